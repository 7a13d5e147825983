"""Seeded random streams.

Every stream is a PCG64 generator seeded through numpy's ``SeedSequence``
with ``entropy=seed`` and ``spawn_key=(purpose, index)``.  Streams with
different keys are statistically independent, and the mapping from
``(seed, purpose, index)`` to the output sequence is fixed by numpy's
documented algorithms, so results do not depend on call order.
"""

from __future__ import annotations

import numpy as np

FOLDS = 1  # index: repeat number
AUGMENT_CONTINUOUS = 2  # index: added attribute number
AUGMENT_DISCRETE = 3  # index: added attribute number
SYNTHETIC = 4  # index: generator-specific
AUDIT = 5  # index: repeat * folds + fold


def stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(purpose), int(index)))
    return np.random.Generator(np.random.PCG64(ss))

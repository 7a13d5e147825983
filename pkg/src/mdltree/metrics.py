"""Splitting-criterion mathematics: entropy, gain, split information,
threshold search and the description-length charge on continuous tests.

All quantities are in bits.  Distributions are per-class weight vectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, class_distribution

#: Gains within this distance of zero are treated as zero.
GAIN_EPS = 1e-12


class Policy(enum.Enum):
    """Split-selection policy.

    ``REL7``: thresholds by gain ratio, no charge.  ``G7``: thresholds by gain.
    ``GS7``: as ``G7`` but continuous tests whose gain does not cover the charge
    are dropped.  ``REL8``: as ``GS7`` and the charged gain is also used to rank.
    """

    REL7 = "rel7"
    G7 = "7g"
    GS7 = "7gs"
    REL8 = "rel8"

    @classmethod
    def parse(cls, text: str) -> "Policy":
        key = text.strip().lower().replace(" ", "")
        aliases = {"rel7": cls.REL7, "7": cls.REL7, "7g": cls.G7, "g7": cls.G7,
                   "7gs": cls.GS7, "gs7": cls.GS7, "rel8": cls.REL8, "8": cls.REL8}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown policy {text!r} (choose rel7, 7g, 7gs, rel8)") from None

    @property
    def thresholds_by_gain(self) -> bool:
        return self is not Policy.REL7

    @property
    def filters(self) -> bool:
        return self in (Policy.GS7, Policy.REL8)

    @property
    def ranks_adjusted(self) -> bool:
        return self is Policy.REL8


ALL_POLICIES = (Policy.REL7, Policy.G7, Policy.GS7, Policy.REL8)


@dataclass(frozen=True)
class SplitCandidate:
    attribute: int
    threshold: float | None
    n_outcomes: int
    gain: float
    split_info: float
    penalty: float = 0.0
    distinct_values: int | None = None
    gain_ratio: float = 0.0
    trivial: bool = False

    @property
    def adjusted_gain(self) -> float:
        return self.gain - self.penalty

    @property
    def is_continuous(self) -> bool:
        return self.threshold is not None


# ---------------------------------------------------------------------------
# entropy primitives


def _row_entropy(counts: np.ndarray) -> np.ndarray:
    """Entropy of each row of a non-negative matrix (0 for empty rows)."""
    counts = np.asarray(counts, dtype=float)
    tot = counts.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        xlogx = np.where(counts > 0, counts * np.log2(counts), 0.0).sum(axis=-1)
        safe = np.where(tot > 0, tot, 1.0)
        h = np.log2(safe) - xlogx / safe
    return np.where(np.count_nonzero(counts, axis=-1) > 1, np.maximum(h, 0.0), 0.0)


def info(distribution) -> float:
    """Class entropy of a weight vector."""
    d = np.asarray(distribution, dtype=float)
    return float(_row_entropy(d))


def split_info(subset_weights) -> float:
    """Entropy of the outcome sizes of a partition."""
    return info(subset_weights)


def gain(parent, subsets) -> float:
    """Information gained by partitioning ``parent`` into ``subsets``."""
    parent = np.asarray(parent, dtype=float)
    subsets = np.asarray(subsets, dtype=float).reshape(-1, parent.shape[0])
    total = parent.sum()
    mismatch = np.abs(subsets.sum(axis=0) - parent).max() if parent.size else 0.0
    if mismatch > 1e-6 * max(total, 1.0):
        raise ValueError("subset distributions do not sum to the parent distribution")
    if total <= 0:
        return 0.0
    g = info(parent) - float((subsets.sum(axis=1) / total) @ _row_entropy(subsets))
    return 0.0 if g < GAIN_EPS else g


def _entropy_small(row) -> float:
    """Scalar entropy for short Python sequences; avoids numpy call overhead."""
    t = math.fsum(row)
    nz = [x for x in row if x > 0]
    if len(nz) < 2:
        return 0.0
    return max(math.log2(t) - math.fsum(x * math.log2(x) for x in nz) / t, 0.0)


def continuous_penalty(n_distinct: int, known_weight: float) -> float:
    """Cost in bits per case of naming one of ``n_distinct - 1`` thresholds."""
    if n_distinct < 2:
        raise ValueError("a continuous test needs at least two distinct values")
    if known_weight <= 0:
        raise ValueError("known weight must be positive")
    return math.log2(n_distinct - 1) / known_weight


# ---------------------------------------------------------------------------
# thresholds


@dataclass(frozen=True)
class _Profile:
    """Sorted distinct values with per-value class weights."""

    values: np.ndarray  # (N,)
    counts: np.ndarray  # (N, C)

    @property
    def n_distinct(self) -> int:
        return self.values.shape[0]

    def midpoints(self) -> np.ndarray:
        lo, hi = self.values[:-1], self.values[1:]
        mid = (lo + hi) / 2.0
        # adjacent floats: keep the cut strictly below the upper value
        return np.where(mid < hi, mid, lo)

    def boundary_mask(self) -> np.ndarray:
        nz = self.counts > 0
        pure = nz.sum(axis=1) == 1
        cls = np.argmax(nz, axis=1)
        same = pure[:-1] & pure[1:] & (cls[:-1] == cls[1:])
        return ~same


def _profile(values, n_classes: int | None = None) -> _Profile:
    """Build a profile from ``(value, class, weight)`` triples or arrays."""
    if isinstance(values, tuple) and len(values) == 3 and isinstance(values[0], np.ndarray):
        v, c, w = values
    else:
        triples = list(values)
        if not triples:
            return _Profile(np.empty(0), np.empty((0, n_classes or 1)))
        v, c, w = (np.asarray(t) for t in zip(*triples))
    v = np.asarray(v, dtype=float)
    c = np.asarray(c, dtype=np.int64)
    w = np.asarray(w, dtype=float)
    C = n_classes if n_classes is not None else (int(c.max()) + 1 if c.size else 1)
    if v.size == 0:
        return _Profile(np.empty(0), np.empty((0, C)))
    uniq, inv = np.unique(v, return_inverse=True)
    counts = np.bincount(inv * C + c, weights=w, minlength=uniq.size * C).reshape(uniq.size, C)
    return _Profile(uniq, counts)


def enumerate_thresholds(values) -> list[float]:
    """Midpoints between adjacent distinct values."""
    p = _profile(values)
    return [float(t) for t in p.midpoints()]


def boundary_thresholds(values) -> list[float]:
    """Midpoints that can maximise a convex criterion.

    A midpoint is dropped when every case at both adjacent values belongs to
    one and the same class.
    """
    p = _profile(values)
    if p.n_distinct < 2:
        return []
    return [float(t) for t in p.midpoints()[p.boundary_mask()]]


@dataclass(frozen=True)
class ThresholdChoice:
    threshold: float | None
    gain: float
    split_info: float
    n_distinct: int
    known_weight: float
    left_weight: float = 0.0
    right_weight: float = 0.0


def _xlogx(a: np.ndarray) -> np.ndarray:
    return a * np.log2(np.maximum(a, 1e-300))


def _cut_scores(p: _Profile, unknown_weight: float):
    """Gain and split information at every cut of a profile.

    Gains are scaled by the known-weight fraction; split information counts
    unknown weight as an extra outcome.
    """
    col_tot = p.counts.sum(axis=0)
    known = col_tot.sum()
    total = known + unknown_weight
    left = np.cumsum(p.counts, axis=0)[:-1]
    lw = left.sum(axis=1)
    rw = known - lw
    # sum_i |D_i| Info(D_i) = sum_i (|D_i| log|D_i| - sum_j n_ij log n_ij)
    within = _xlogx(lw) + _xlogx(rw) - _xlogx(left).sum(axis=1) - _xlogx(col_tot - left).sum(axis=1)
    g = (info(col_tot) - within / known) * (known / total)
    g = np.where(g < GAIN_EPS, 0.0, g)
    si = np.log2(total) - (_xlogx(lw) + _xlogx(rw) + _xlogx(np.float64(unknown_weight))) / total
    si = np.maximum(si, 0.0)
    return g, si, lw, rw


def best_threshold(
    values,
    policy: Policy = Policy.REL8,
    *,
    boundary_only: bool = False,
    min_outcome_weight: float = 0.0,
    unknown_weight: float = 0.0,
    n_classes: int | None = None,
) -> ThresholdChoice:
    """Pick the threshold for a continuous test.

    Rel 7 maximises gain ratio over positive-gain cuts; the other policies
    maximise gain.  Ties go to the smallest threshold.  Only cuts leaving at
    least ``min_outcome_weight`` on each side are considered.  When no cut has
    positive gain the result has ``threshold=None`` and gain 0.
    """
    p = values if isinstance(values, _Profile) else _profile(values, n_classes)
    N = p.n_distinct
    known = float(p.counts.sum())
    if N < 2:
        return ThresholdChoice(None, 0.0, 0.0, N, known)
    g, si, lw, rw = _cut_scores(p, unknown_weight)
    ok = (g > 0) & (lw >= min_outcome_weight) & (rw >= min_outcome_weight)
    if boundary_only:
        ok &= p.boundary_mask()
    if not ok.any():
        return ThresholdChoice(None, 0.0, 0.0, N, known)
    if policy.thresholds_by_gain:
        score = np.where(ok, g, -np.inf)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            score = np.where(ok & (si > 0), g / si, -np.inf)
    i = int(np.argmax(score))
    t = float(p.midpoints()[i])
    return ThresholdChoice(t, float(g[i]), float(si[i]), N, known, float(lw[i]), float(rw[i]))


def c45_min_split(known_weight: float, n_classes: int, min_weight: float) -> float:
    """Smallest outcome weight C4.5 allows for a threshold cut."""
    m = 0.1 * known_weight / n_classes
    return min(max(m, min_weight), max(25.0, min_weight))


# ---------------------------------------------------------------------------
# candidate tests over a dataset


def evaluate_discrete_test(D: Dataset, attribute: int, min_outcome_weight: float = 0.0) -> SplitCandidate:
    """Evaluate the test ``A = ?`` with one outcome per declared value.

    The candidate is flagged trivial when fewer than two outcomes carry at
    least ``min_outcome_weight`` (and some weight) of the known cases.
    """
    decl = D.schema.attributes[attribute]
    k = len(decl.values)
    C = D.schema.n_classes
    col = D.X[:, attribute]
    known = ~np.isnan(col)
    vals = col[known].astype(np.int64)
    counts = np.bincount(vals * C + D.y[known], weights=D.w[known], minlength=k * C).reshape(k, C)
    rows = counts.tolist()
    sizes = [math.fsum(r) for r in rows]
    known_w = math.fsum(sizes)
    unknown_w = float(D.w[~known].sum()) if known.size != vals.size else 0.0
    reasonable = sum(1 for z in sizes if z > 0 and z >= min_outcome_weight)
    if known_w <= 0 or reasonable < 2:
        return SplitCandidate(attribute, None, k, 0.0, 0.0, trivial=True)
    parent = [math.fsum(c) for c in zip(*rows)]
    g = _entropy_small(parent) - math.fsum(z * _entropy_small(r) for z, r in zip(sizes, rows)) / known_w
    g = 0.0 if g < GAIN_EPS else g * known_w / (known_w + unknown_w)
    if g < GAIN_EPS:
        g = 0.0
    si = _entropy_small(sizes + [unknown_w])
    return SplitCandidate(attribute, None, k, g, si)


def continuous_profile(D: Dataset, attribute: int) -> tuple[_Profile, float]:
    col = D.X[:, attribute]
    known = ~np.isnan(col)
    p = _profile((col[known], D.y[known], D.w[known]), D.schema.n_classes)
    return p, float(D.w[~known].sum())


def evaluate_continuous_test(
    D: Dataset,
    attribute: int,
    policy: Policy,
    min_split_weight: float = 0.0,
    boundary_only: bool = False,
) -> SplitCandidate:
    """Best ``A <= t`` test for ``attribute`` under ``policy``, with its charge.

    ``penalty`` is always filled in; whether it matters is up to the policy.
    """
    p, unknown_w = continuous_profile(D, attribute)
    known = float(p.counts.sum())
    if p.n_distinct < 2 or known <= 0:
        return SplitCandidate(attribute, None, 2, 0.0, 0.0, trivial=True, distinct_values=p.n_distinct)
    min_w = c45_min_split(known, D.schema.n_classes, min_split_weight) if min_split_weight > 0 else 0.0
    choice = best_threshold(
        p, policy, boundary_only=boundary_only, min_outcome_weight=min_w, unknown_weight=unknown_w
    )
    pen = continuous_penalty(p.n_distinct, known)
    if choice.threshold is None:
        return SplitCandidate(attribute, None, 2, 0.0, 0.0, pen, p.n_distinct, trivial=True)
    return SplitCandidate(attribute, choice.threshold, 2, choice.gain, choice.split_info, pen, p.n_distinct)

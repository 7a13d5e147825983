"""Config plumbing shared by the experiment scripts."""

from __future__ import annotations

import argparse
import dataclasses
import json
from pathlib import Path

import mdltree


def parse_config(cls, description: str):
    """Build ``cls`` (a dataclass) from command-line flags named after its fields."""
    ap = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, tuple):
            kind = type(default[0]) if default else str
            ap.add_argument(flag, type=lambda s, k=kind: tuple(k(x) for x in s.split(",")), default=default,
                            help=f"comma list (default {','.join(map(str, default))})")
        else:
            ap.add_argument(flag, type=type(default), default=default, help=f"default {default}")
    return cls(**vars(ap.parse_args()))


def header(script: str, cfg) -> list[str]:
    return [f"mdltree {mdltree.__version__}", f"script: {script}",
            "config: " + json.dumps(dataclasses.asdict(cfg), sort_keys=True)]


def write(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")

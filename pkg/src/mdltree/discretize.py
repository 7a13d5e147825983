"""Global supervised discretization by recursive entropy splitting.

Each continuous attribute is cut at the gain-maximising boundary threshold,
and the two halves are cut again, until the minimum-description-length test
of Fayyad and Irani (1993) refuses a cut.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .data import AttributeDecl, Dataset, Schema, format_number
from .metrics import _profile, best_threshold, info, Policy


@dataclass(frozen=True)
class DiscretizationRule:
    attribute: int
    cut_points: tuple[float, ...] = ()

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cut_points)
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut points must be strictly increasing")
        object.__setattr__(self, "cut_points", cuts)

    @property
    def n_intervals(self) -> int:
        return len(self.cut_points) + 1

    def interval(self, v: float) -> int:
        """Index of the interval holding ``v``; a value equal to a cut goes low."""
        return bisect.bisect_left(self.cut_points, v)

    def interval_names(self) -> tuple[str, ...]:
        edges = ["-inf"] + [format_number(c) for c in self.cut_points] + ["inf"]
        names = []
        for i in range(self.n_intervals):
            close = "]" if i < self.n_intervals - 1 else ")"
            names.append(f"({edges[i]},{edges[i + 1]}{close}")
        return tuple(names)


def mdl_accepts(parent, left, right) -> bool:
    """Fayyad-Irani stopping test for splitting ``parent`` into two parts.

    All arguments are per-class weight vectors.
    """
    parent, left, right = (np.asarray(d, dtype=float) for d in (parent, left, right))
    n = parent.sum()
    if n <= 1:
        return False
    h, h1, h2 = info(parent), info(left), info(right)
    g = h - (left.sum() * h1 + right.sum() * h2) / n
    c, c1, c2 = (int(np.count_nonzero(d > 0)) for d in (parent, left, right))
    delta = math.log2(3.0**c - 2) - (c * h - c1 * h1 - c2 * h2)
    return g > (math.log2(n - 1) + delta) / n


def discretize_attribute(cases, attribute: int = 0, n_classes: int | None = None) -> DiscretizationRule:
    """Fit cut points on known-valued ``(value, class, weight)`` cases."""
    p = _profile(cases, n_classes)
    cuts: list[float] = []
    # work on index ranges over the sorted distinct values
    stack = [(0, p.n_distinct)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        seg = type(p)(p.values[lo:hi], p.counts[lo:hi])
        choice = best_threshold(seg, Policy.G7, boundary_only=True)
        if choice.threshold is None:
            continue
        k = lo + int(np.searchsorted(seg.values, choice.threshold, side="right"))
        parent = seg.counts.sum(axis=0)
        left = p.counts[lo:k].sum(axis=0)
        if not mdl_accepts(parent, left, parent - left):
            continue
        cuts.append(choice.threshold)
        stack.append((k, hi))
        stack.append((lo, k))
    return DiscretizationRule(attribute, tuple(sorted(cuts)))


def fit_rules(D: Dataset) -> list[DiscretizationRule]:
    """One rule per continuous attribute, fit on the known values in ``D``."""
    rules = []
    for a in D.schema.continuous_indices:
        col = D.X[:, a]
        known = ~np.isnan(col)
        rules.append(
            discretize_attribute((col[known], D.y[known], D.w[known]), a, D.schema.n_classes)
        )
    return rules


def discretized_schema(schema: Schema, rules: list[DiscretizationRule]) -> Schema:
    by_attr = {r.attribute: r for r in rules}
    cont = set(schema.continuous_indices)
    if set(by_attr) != cont:
        raise ValueError(
            f"rules cover attributes {sorted(by_attr)}, continuous attributes are {sorted(cont)}"
        )
    attrs = []
    for i, a in enumerate(schema.attributes):
        if i in by_attr:
            attrs.append(AttributeDecl.discrete(a.name, by_attr[i].interval_names()))
        else:
            attrs.append(a)
    return Schema(tuple(attrs), schema.classes)


def apply_rules(D: Dataset, rules: list[DiscretizationRule]) -> Dataset:
    """Replace every continuous attribute by its interval index."""
    schema = discretized_schema(D.schema, rules)
    X = np.array(D.X, copy=True)
    for r in rules:
        col = X[:, r.attribute]
        known = ~np.isnan(col)
        col[known] = np.searchsorted(np.asarray(r.cut_points), col[known], side="left")
        X[:, r.attribute] = col
    return Dataset(schema, X, D.y, D.w)


def format_rules(schema: Schema, rules: list[DiscretizationRule], header=()) -> str:
    """Text form: ``name: c1, c2, ...`` per line, ``|`` comments."""
    lines = [f"| {h}" for h in header]
    for r in rules:
        cuts = ", ".join(format_number(c) for c in r.cut_points)
        lines.append(f"{schema.attributes[r.attribute].name}: {cuts}".rstrip())
    return "\n".join(lines) + "\n"


def parse_rules(text: str, schema: Schema) -> list[DiscretizationRule]:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("|", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'name: cuts'")
        try:
            a = schema.index_of(name.strip())
        except KeyError:
            raise ValueError(f"line {lineno}: unknown attribute {name.strip()!r}") from None
        cuts = [float(c) for c in body.split(",") if c.strip()]
        rules.append(DiscretizationRule(a, tuple(cuts)))
    return rules

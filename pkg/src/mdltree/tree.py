"""Recursive tree construction, classification and tree metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from .data import Dataset, class_distribution, partition_by_test
from .metrics import (
    GAIN_EPS,
    Policy,
    SplitCandidate,
    evaluate_continuous_test,
    evaluate_discrete_test,
)


@dataclass(frozen=True)
class GrowParams:
    policy: Policy = Policy.REL8
    min_split_weight: float = 2.0
    prune_confidence: float = 0.25
    pruning: bool = True
    boundary_only: bool = False

    def __post_init__(self):
        if isinstance(self.policy, str):
            object.__setattr__(self, "policy", Policy.parse(self.policy))
        if self.min_split_weight < 1:
            raise ValueError("min_split_weight must be at least 1")
        if not 0 < self.prune_confidence <= 1:
            raise ValueError("prune_confidence must be in (0, 1]")


@dataclass(frozen=True)
class Leaf:
    class_index: int
    distribution: tuple[float, ...]
    weight: float

    @property
    def is_leaf(self) -> bool:
        return True


@dataclass(frozen=True)
class Internal:
    test: SplitCandidate
    children: tuple["Node", ...]
    fallback_class: int
    branch_weights: tuple[float, ...]
    distribution: tuple[float, ...] = field(default=())

    @property
    def is_leaf(self) -> bool:
        return False


Node = Union[Leaf, Internal]


def majority(dist, default: int = 0) -> int:
    """Index of the largest entry; lowest index on ties, ``default`` if empty."""
    d = np.asarray(dist, dtype=float)
    if d.size == 0 or d.sum() <= 0:
        return default
    return int(np.argmax(d))


def make_leaf(dist: np.ndarray, default_class: int = 0) -> Leaf:
    return Leaf(majority(dist, default_class), tuple(float(x) for x in dist), float(dist.sum()))


# ---------------------------------------------------------------------------
# split selection


def candidate_tests(D: Dataset, params: GrowParams) -> list[SplitCandidate]:
    """Evaluate the best test on every attribute (trivial ones included)."""
    out = []
    for a, decl in enumerate(D.schema.attributes):
        if decl.is_continuous:
            c = evaluate_continuous_test(
                D, a, params.policy, params.min_split_weight, params.boundary_only
            )
        else:
            c = evaluate_discrete_test(D, a, params.min_split_weight)
        out.append(c)
    return out


def admissible(c: SplitCandidate, policy: Policy) -> bool:
    """Whether a candidate survives the gain filter under ``policy``."""
    if c.trivial or c.gain <= GAIN_EPS or c.split_info <= 0:
        return False
    if c.is_continuous and policy.filters and c.adjusted_gain <= 0:
        return False
    return True


def rank_tests(candidates: Sequence[SplitCandidate], policy: Policy) -> list[SplitCandidate]:
    """Survivors with at least average gain, gain ratio filled in.

    Rel 8 uses the charged gain both for the average and for the ratio; the
    other policies use the raw gain.
    """
    alive = [c for c in candidates if admissible(c, policy)]
    if not alive:
        return []
    num = [c.adjusted_gain if policy.ranks_adjusted else c.gain for c in alive]
    avg = sum(num) / len(num)
    return [
        replace(c, gain_ratio=n / c.split_info)
        for c, n in zip(alive, num)
        if n >= avg - 1e-9
    ]


def select_split(D: Dataset, params: GrowParams) -> SplitCandidate | None:
    """The test with maximum gain ratio among the ranked survivors."""
    ranked = rank_tests(candidate_tests(D, params), params.policy)
    best = None
    for c in ranked:
        if best is None or c.gain_ratio > best.gain_ratio:
            best = c
    return best


# ---------------------------------------------------------------------------
# growing


def grow(D: Dataset, params: GrowParams = GrowParams(), default_class: int | None = None) -> Node:
    """Build an unpruned tree for ``D``."""
    dist = class_distribution(D)
    total = dist.sum()
    cls = majority(dist, 0 if default_class is None else default_class)
    if total <= 0:
        return make_leaf(dist, cls)
    if dist[cls] >= total or total < 2 * params.min_split_weight:
        return make_leaf(dist, cls)
    test = select_split(D, params)
    if test is None:
        return make_leaf(dist, cls)
    subsets = partition_by_test(D, test)
    children = tuple(grow(S, params, cls) for S in subsets)
    return Internal(
        test,
        children,
        cls,
        tuple(S.total_weight for S in subsets),
        tuple(float(x) for x in dist),
    )


def induce(D: Dataset, params: GrowParams = GrowParams()) -> Node:
    """Grow and, if enabled, prune."""
    from .prune import prune

    tree = grow(D, params)
    return prune(tree, D, params) if params.pruning else tree


# ---------------------------------------------------------------------------
# using trees


def _descend(node: Node, x: np.ndarray, weight: float, acc: np.ndarray) -> None:
    if node.is_leaf:
        if node.weight > 0:
            acc += weight * np.asarray(node.distribution) / node.weight
        else:
            acc[node.class_index] += weight
        return
    t = node.test
    v = x[t.attribute]
    if math.isnan(v):
        bw = np.asarray(node.branch_weights)
        tot = bw.sum()
        for child, b in zip(node.children, bw):
            if b > 0:
                _descend(child, x, weight * b / tot, acc)
        return
    if t.threshold is not None:
        i = 0 if v <= t.threshold else 1
    else:
        i = int(v)
    _descend(node.children[i], x, weight, acc)


def class_probabilities(tree: Node, x, n_classes: int) -> np.ndarray:
    acc = np.zeros(n_classes)
    _descend(tree, np.asarray(x, dtype=float), 1.0, acc)
    s = acc.sum()
    return acc / s if s > 0 else acc


def classify(tree: Node, x, n_classes: int) -> tuple[int, np.ndarray]:
    """Predicted class index and class probabilities for one value vector.

    ``x`` is a row of ``Dataset.X`` (NaN for unknown) or a :class:`Case`.
    """
    if hasattr(x, "values") and hasattr(x, "class_index"):
        x = [np.nan if v is None else v for v in x.values]
    p = class_probabilities(tree, x, n_classes)
    return majority(p), p


def predict(tree: Node, D: Dataset) -> np.ndarray:
    C = D.schema.n_classes
    return np.array([classify(tree, D.X[i], C)[0] for i in range(len(D))], dtype=np.int64)


def error_percent(tree: Node, D: Dataset) -> float:
    """Misclassified weight as a percentage of total weight."""
    if len(D) == 0:
        return 0.0
    wrong = predict(tree, D) != D.y
    return 100.0 * float(D.w[wrong].sum()) / D.total_weight


def tree_size(tree: Node) -> int:
    if tree.is_leaf:
        return 1
    return 1 + sum(tree_size(c) for c in tree.children)


def n_leaves(tree: Node) -> int:
    if tree.is_leaf:
        return 1
    return sum(n_leaves(c) for c in tree.children)


def depth(tree: Node) -> int:
    if tree.is_leaf:
        return 0
    return 1 + max(depth(c) for c in tree.children)


def iter_tests(tree: Node):
    """Yield every internal node's test, depth first."""
    if tree.is_leaf:
        return
    yield tree.test
    for c in tree.children:
        yield from iter_tests(c)

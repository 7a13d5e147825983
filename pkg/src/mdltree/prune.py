"""Pessimistic error-based pruning with subtree replacement and branch raising.

A leaf covering ``N`` cases of which ``E`` are misclassified is charged
``N * U(E, N)`` errors, where ``U`` is the upper limit of the one-sided
binomial confidence interval at level ``CF`` (Clopper-Pearson form, which
extends to fractional ``E`` and ``N``).  A subtree is charged the sum over its
leaves.
"""

from __future__ import annotations

import numpy as np
from scipy.special import betaincinv

from .data import Dataset, class_distribution, partition_by_test
from .tree import GrowParams, Internal, Leaf, Node, majority, make_leaf

_TOL = 1e-9


def upper_error_rate(errors: float, n: float, cf: float) -> float:
    """Upper confidence limit on the error rate given ``errors`` out of ``n``."""
    if n <= 0:
        return 0.0
    if cf >= 1:
        return errors / n
    if n - errors <= 1e-12:
        return 1.0
    return float(betaincinv(errors + 1.0, n - errors, 1.0 - cf))


def estimated_errors(dist: np.ndarray, cf: float, cls: int | None = None) -> float:
    n = float(dist.sum())
    if n <= 0:
        return 0.0
    cls = majority(dist) if cls is None else cls
    e = n - float(dist[cls])
    return n * upper_error_rate(e, n, cf)


def _evaluate(node: Node, D: Dataset, cf: float) -> float:
    """Estimated errors of ``node`` on ``D`` without changing it."""
    if node.is_leaf:
        return estimated_errors(class_distribution(D), cf, node.class_index)
    return sum(
        _evaluate(child, S, cf) for child, S in zip(node.children, partition_by_test(D, node.test))
    )


def _prune(node: Node, D: Dataset, cf: float) -> tuple[Node, float]:
    dist = class_distribution(D)
    if node.is_leaf:
        cls = majority(dist, node.class_index)
        return make_leaf(dist, cls), estimated_errors(dist, cf, cls)

    subsets = partition_by_test(D, node.test)
    pruned = [_prune(c, S, cf) for c, S in zip(node.children, subsets)]
    children = tuple(p[0] for p in pruned)
    subtree_err = sum(p[1] for p in pruned)

    cls = majority(dist, node.fallback_class)
    leaf_err = estimated_errors(dist, cf, cls)

    sizes = [S.total_weight for S in subsets]
    big = int(np.argmax(sizes))
    branch_err = _evaluate(children[big], D, cf) if not children[big].is_leaf else np.inf

    if leaf_err <= subtree_err + _TOL and leaf_err <= branch_err + _TOL:
        return make_leaf(dist, cls), leaf_err
    if branch_err <= subtree_err + _TOL:
        return _prune(children[big], D, cf)
    rebuilt = Internal(
        node.test, children, cls, tuple(sizes), tuple(float(x) for x in dist)
    )
    return rebuilt, subtree_err


def prune(tree: Node, D: Dataset, params: GrowParams = GrowParams()) -> Node:
    """Prune ``tree`` bottom-up against its training data ``D``.

    Leaf class distributions are refreshed from the cases that reach them.
    """
    return _prune(tree, D, params.prune_confidence)[0]


def estimated_tree_errors(tree: Node, D: Dataset, cf: float = 0.25) -> float:
    return _evaluate(tree, D, cf)

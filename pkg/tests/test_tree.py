import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mdltree import rng
from mdltree.data import AttributeDecl, Dataset, Schema, class_distribution
from mdltree.metrics import ALL_POLICIES, Policy
from mdltree.prune import prune
from mdltree.tree import (
    GrowParams,
    Internal,
    Leaf,
    candidate_tests,
    classify,
    error_percent,
    grow,
    iter_tests,
    select_split,
    tree_size,
)

ONE = Schema((AttributeDecl.continuous("v"),), ("a", "b"))


def leaf(cls, dist):
    return Leaf(cls, tuple(float(x) for x in dist), float(sum(dist)))


def diverging_fixture(seed=4, n=20, agree=0.8):
    """Random all-distinct continuous attribute beside a noisy discrete one."""
    g = rng.stream(seed, rng.SYNTHETIC, 200)
    y = np.array([0] * (n // 2) + [1] * (n // 2))
    d = np.where(g.random(n) < agree, y, 1 - y)
    c = g.permutation(n).astype(float)
    s = Schema((AttributeDecl.continuous("r"), AttributeDecl.discrete("d", ("u", "v"))), ("a", "b"))
    return Dataset(s, np.column_stack([c, d]), y)


class TestSelectSplit:
    def test_all_zero_gain(self):
        s = Schema((AttributeDecl.discrete("t", ["x", "y"]), AttributeDecl.continuous("v")), ("a", "b"))
        X = [[0, 1], [0, 1], [1, 2], [1, 2]]
        D = Dataset(s, X, [0, 1, 0, 1])
        for pol in ALL_POLICIES:
            assert select_split(D, GrowParams(pol, min_split_weight=1)) is None

    def test_perfect_discrete_beats_random_continuous_under_rel8(self):
        D0 = diverging_fixture(seed=4)
        D = Dataset(D0.schema, np.column_stack([D0.X[:, 0], D0.y]), D0.y)
        cands = candidate_tests(D, GrowParams(Policy.REL8))
        cont = cands[0]
        assert cont.penalty == pytest.approx(math.log2(19) / 20, abs=1e-12)
        triples = [(float(v), int(c), 1.0) for v, c in zip(D.X[:, 0], D.y)]
        best_gain = max(g for t, g, s in oracles.midpoint_scores(triples, 2, min_weight=2))
        assert cont.gain == pytest.approx(best_gain, abs=1e-9)
        chosen = select_split(D, GrowParams(Policy.REL8))
        assert chosen.attribute == 1
        assert chosen.gain == pytest.approx(1.0)

    def test_policies_diverge(self):
        D = diverging_fixture(seed=4)
        assert select_split(D, GrowParams(Policy.REL7)).attribute == 0
        assert select_split(D, GrowParams(Policy.REL8)).attribute == 1

    def test_rel8_ratio_uses_charged_gain(self):
        D = diverging_fixture(seed=4)
        D = Dataset(D.schema, np.column_stack([np.arange(20.0), D.X[:, 1]]), D.y)
        c = select_split(D, GrowParams(Policy.REL8))
        assert c.gain_ratio == pytest.approx(c.adjusted_gain / c.split_info)
        c7 = select_split(D, GrowParams(Policy.GS7))
        assert c7.gain_ratio == pytest.approx(c7.gain / c7.split_info)

    def test_tie_goes_to_lowest_attribute(self):
        s = Schema((AttributeDecl.discrete("p", ["x", "y"]), AttributeDecl.discrete("q", ["x", "y"])), ("a", "b"))
        X = [[0, 0]] * 3 + [[1, 1]] * 3
        D = Dataset(s, X, [0, 0, 0, 1, 1, 1])
        assert select_split(D, GrowParams(min_split_weight=1)).attribute == 0


class TestGrow:
    def test_single_class(self):
        D = Dataset(ONE, [[1], [2], [3]], [1, 1, 1])
        t = grow(D)
        assert t == leaf(1, [0, 3])

    def test_forced_perfect_split(self):
        D = Dataset(ONE, [[1], [2], [3], [4]], [0, 0, 1, 1])
        t = grow(D, GrowParams(min_split_weight=1))
        assert isinstance(t, Internal)
        assert t.test.threshold == 2.5
        assert t.children == (leaf(0, [2, 0]), leaf(1, [0, 2]))
        assert tree_size(t) == 3

    def test_conflicting_duplicates(self):
        D = Dataset(ONE, [[1.0]] * 5, [0, 0, 0, 1, 1])
        t = grow(D, GrowParams(min_split_weight=1))
        assert t.is_leaf and t.class_index == 0

    def test_small_node_is_leaf(self):
        D = Dataset(ONE, [[1], [2], [3]], [0, 1, 0])
        assert grow(D, GrowParams(min_split_weight=2)).is_leaf

    def test_empty_branch_predicts_parent_majority(self):
        s = Schema((AttributeDecl.discrete("t", ["x", "y", "z"]),), ("a", "b"))
        D = Dataset(s, [[0]] * 4 + [[1]] * 3, [0] * 4 + [1] * 3)
        t = grow(D, GrowParams(min_split_weight=1))
        assert t.children[2] == Leaf(0, (0.0, 0.0), 0.0)


class TestClassify:
    def test_pure_leaf(self):
        D = Dataset(ONE, [[1], [2], [3], [4]], [0, 0, 1, 1])
        t = grow(D, GrowParams(min_split_weight=1))
        cls, p = classify(t, [3.5], 2)
        assert cls == 1
        assert list(p) == [0.0, 1.0]

    def test_unknown_uses_branch_weights(self):
        D = Dataset(ONE, [[1], [2], [3], [4], [5], [6]], [0, 0, 1, 1, 1, 1])
        t = grow(D, GrowParams(min_split_weight=1))
        cls, p = classify(t, [np.nan], 2)
        assert p == pytest.approx([2 / 6, 4 / 6])
        assert cls == 1

    def test_single_leaf(self):
        t = leaf(1, [1, 3])
        assert classify(t, [42.0], 2)[0] == 1

    def test_case_object(self):
        D = Dataset(ONE, [[1], [2], [3], [4]], [0, 0, 1, 1])
        t = grow(D, GrowParams(min_split_weight=1))
        assert classify(t, D.case(0), 2)[0] == 0


class TestTreeSize:
    def test_leaf(self):
        assert tree_size(leaf(0, [1, 0])) == 1

    def test_binary(self):
        t = Internal(None, (leaf(0, [1, 0]), leaf(1, [0, 1])), 0, (1, 1))
        assert tree_size(t) == 3

    def test_three_way(self):
        t = Internal(None, (leaf(0, [1, 0]), leaf(1, [0, 1]), leaf(0, [0, 0])), 0, (1, 1, 0))
        assert tree_size(t) == 4


# ---------------------------------------------------------------------------
# properties


@st.composite
def distinct_continuous(draw):
    n = draw(st.integers(2, 40))
    m = draw(st.integers(1, 3))
    C = draw(st.integers(2, 3))
    cols = [draw(st.permutations(list(range(n)))) for _ in range(m)]
    y = draw(st.lists(st.integers(0, C - 1), min_size=n, max_size=n))
    s = Schema(tuple(AttributeDecl.continuous(f"a{i}") for i in range(m)), tuple("abc"[:C]))
    return Dataset(s, np.array(cols, dtype=float).T, y)


@settings(max_examples=60, deadline=None)
@given(distinct_continuous(), st.sampled_from([Policy.REL7, Policy.G7]))
def test_unpruned_trees_fit_training_data(D, pol):
    t = grow(D, GrowParams(pol, min_split_weight=1, pruning=False))
    assert error_percent(t, D) == 0.0


@st.composite
def discrete_only(draw):
    n = draw(st.integers(1, 40))
    m = draw(st.integers(1, 4))
    ks = [draw(st.integers(1, 4)) for _ in range(m)]
    X = [[draw(st.integers(0, k - 1)) for k in ks] for _ in range(n)]
    y = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    s = Schema(
        tuple(AttributeDecl.discrete(f"a{i}", [f"v{j}" for j in range(k)]) for i, k in enumerate(ks)),
        ("a", "b", "c"),
    )
    return Dataset(s, np.array(X, dtype=float).reshape(n, m), y)


@settings(max_examples=60, deadline=None)
@given(discrete_only())
def test_policies_agree_without_continuous_attributes(D):
    trees = [grow(D, GrowParams(p)) for p in ALL_POLICIES]
    assert all(t == trees[0] for t in trees[1:])


@st.composite
def mixed_data(draw):
    n = draw(st.integers(4, 60))
    seed = draw(st.integers(0, 10_000))
    g = np.random.default_rng(seed)
    y = g.integers(0, 2, n)
    X = np.column_stack([
        np.round(g.random(n) * 10, 1),
        np.where(g.random(n) < 0.7, y, 1 - y),
        np.round(g.normal(y, 1.0), 2),
    ])
    X[g.random((n, 3)) < 0.1] = np.nan
    s = Schema(
        (AttributeDecl.continuous("r"), AttributeDecl.discrete("d", ["u", "v"]), AttributeDecl.continuous("c")),
        ("a", "b"),
    )
    return Dataset(s, X, y)


@settings(max_examples=40, deadline=None)
@given(mixed_data())
def test_rel8_tests_pay_for_themselves(D):
    t = grow(D, GrowParams(Policy.REL8))
    for test in iter_tests(t):
        assert test.adjusted_gain > 0


@settings(max_examples=40, deadline=None)
@given(mixed_data(), st.sampled_from(ALL_POLICIES))
def test_grow_is_deterministic(D, pol):
    assert grow(D, GrowParams(pol)) == grow(D, GrowParams(pol))


@settings(max_examples=40, deadline=None)
@given(mixed_data(), st.sampled_from(ALL_POLICIES))
def test_classify_probabilities(D, pol):
    t = grow(D, GrowParams(pol))
    for i in range(len(D)):
        cls, p = classify(t, D.X[i], 2)
        assert p.sum() == pytest.approx(1.0, abs=1e-9)
        assert p[cls] == p.max()


def test_leaf_class_is_argmax():
    D = Dataset(ONE, np.arange(30.0)[:, None], np.random.default_rng(3).integers(0, 2, 30))

    def walk(n):
        if n.is_leaf:
            assert n.distribution[n.class_index] == max(n.distribution)
        else:
            assert len(n.children) >= 2
            for c in n.children:
                walk(c)

    walk(grow(D, GrowParams(Policy.REL7)))
    walk(prune(grow(D, GrowParams(Policy.REL7)), D))

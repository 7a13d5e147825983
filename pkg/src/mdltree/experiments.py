"""Repeated stratified cross-validation, irrelevant-attribute augmentation,
policy comparison and global-discretization trials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import rng
from .data import AttributeDecl, Dataset, Schema
from .discretize import apply_rules, fit_rules
from .metrics import Policy
from .tree import GrowParams, error_percent, induce, tree_size


class FoldError(ValueError):
    pass


@dataclass(frozen=True)
class FoldPlan:
    seed: int
    repeat: int
    k: int
    assignments: np.ndarray

    def test_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def stratified_folds(D: Dataset, k: int = 10, seed: int = 0, repeat: int = 0) -> FoldPlan:
    """Deal each class's shuffled cases round-robin into ``k`` folds.

    Dealing continues across classes from where the previous class stopped,
    so fold sizes (and per-class fold counts) differ by at most one.
    """
    n = len(D)
    if k < 2:
        raise FoldError("need at least 2 folds")
    if k > n:
        raise FoldError(f"{k} folds requested but the dataset has only {n} cases")
    gen = rng.stream(seed, rng.FOLDS, repeat)
    assign = np.empty(n, dtype=np.int64)
    nxt = 0
    for c in range(D.schema.n_classes):
        idx = np.flatnonzero(D.y == c)
        idx = idx[gen.permutation(idx.size)]
        assign[idx] = (nxt + np.arange(idx.size)) % k
        nxt = (nxt + idx.size) % k
    assign.setflags(write=False)
    return FoldPlan(seed, repeat, k, assign)


@dataclass(frozen=True)
class CvParams:
    folds: int = 10
    repeats: int = 10
    seed: int = 1


@dataclass
class RepeatResult:
    error: float  # percent
    size: float  # mean tree size over folds


Learner = Callable[[Dataset, Dataset], tuple[float, int]]
"""Train on the first dataset, return (misclassified weight, tree size) on the second."""


def tree_learner(params: GrowParams) -> Learner:
    def run(train: Dataset, test: Dataset):
        tree = induce(train, params)
        return error_percent(tree, test) * test.total_weight / 100.0, tree_size(tree)

    return run


def _check_plan(D: Dataset, plan: FoldPlan):
    for f in range(plan.k):
        if plan.train_index(f).size < 2:
            raise FoldError(
                f"fold {f} leaves {plan.train_index(f).size} training case(s); "
                f"{plan.k} folds is too many for {len(D)} cases"
            )


def fold_plans(D: Dataset, cv: CvParams) -> list[FoldPlan]:
    plans = [stratified_folds(D, cv.folds, cv.seed, r) for r in range(cv.repeats)]
    for p in plans:
        _check_plan(D, p)
    return plans


def run_learner(D: Dataset, plans: Sequence[FoldPlan], learner: Learner) -> list[RepeatResult]:
    results = []
    for plan in plans:
        wrong, sizes = 0.0, []
        for f in range(plan.k):
            train = D.subset(plan.train_index(f))
            test = D.subset(plan.test_index(f))
            e, s = learner(train, test)
            wrong += e
            sizes.append(s)
        results.append(RepeatResult(100.0 * wrong / D.total_weight, float(np.mean(sizes))))
    return results


def cross_validate(D: Dataset, params: GrowParams, cv: CvParams = CvParams()) -> list[RepeatResult]:
    """Per-repeat error percentage and mean pruned tree size."""
    return run_learner(D, fold_plans(D, cv), tree_learner(params))


# ---------------------------------------------------------------------------
# reports


def _mean_se(xs: Sequence[float]) -> tuple[float, float]:
    a = np.asarray(xs, dtype=float)
    if a.size < 2:
        return float(a.mean()), 0.0
    return float(a.mean()), float(a.std(ddof=1) / math.sqrt(a.size))


@dataclass
class SystemSummary:
    name: str
    errors: list[float]
    sizes: list[float]

    @property
    def error_mean(self) -> float:
        return _mean_se(self.errors)[0]

    @property
    def error_se(self) -> float:
        return _mean_se(self.errors)[1]

    @property
    def size_mean(self) -> float:
        return _mean_se(self.sizes)[0]

    @property
    def size_se(self) -> float:
        return _mean_se(self.sizes)[1]


@dataclass
class Comparison:
    system: str
    baseline: str
    wins: int
    draws: int
    losses: int
    error_ratio: float
    size_ratio: float


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return 1.0 if a == 0 else math.inf
    return a / b


def compare(a: SystemSummary, b: SystemSummary) -> Comparison:
    """``a`` against baseline ``b``; a win is a lower per-repeat error."""
    w = d = l = 0
    for ea, eb in zip(a.errors, b.errors):
        ra, rb = round(ea, 4), round(eb, 4)
        if ra < rb:
            w += 1
        elif ra == rb:
            d += 1
        else:
            l += 1
    return Comparison(
        a.name, b.name, w, d, l,
        _ratio(a.error_mean, b.error_mean),
        _ratio(a.size_mean, b.size_mean),
    )


@dataclass
class CvReport:
    dataset: str
    n_cases: int
    cv: CvParams
    systems: list[SystemSummary]
    comparisons: list[Comparison]
    notes: list[str] = field(default_factory=list)

    def system(self, name: str) -> SystemSummary:
        for s in self.systems:
            if s.name == name:
                return s
        raise KeyError(name)

    def comparison(self, system: str, baseline: str | None = None) -> Comparison:
        for c in self.comparisons:
            if c.system == system and (baseline is None or c.baseline == baseline):
                return c
        raise KeyError(system)


def build_report(dataset: str, n_cases: int, cv: CvParams, results: dict[str, list[RepeatResult]],
                 baseline: str, notes=()) -> CvReport:
    systems = [
        SystemSummary(name, [r.error for r in rs], [r.size for r in rs]) for name, rs in results.items()
    ]
    base = next(s for s in systems if s.name == baseline)
    comps = [compare(s, base) for s in systems if s.name != baseline]
    return CvReport(dataset, n_cases, cv, systems, comps, list(notes))


def compare_policies(
    D: Dataset,
    policies: Sequence[Policy | str],
    cv: CvParams = CvParams(),
    params: GrowParams = GrowParams(),
    dataset: str = "data",
    notes=(),
) -> CvReport:
    """Run every policy on the same fold plans; the first policy is the baseline."""
    policies = [Policy.parse(p) if isinstance(p, str) else p for p in policies]
    if len(policies) < 1:
        raise ValueError("need at least one policy")
    plans = fold_plans(D, cv)
    results = {}
    for pol in policies:
        p = GrowParams(pol, params.min_split_weight, params.prune_confidence, params.pruning,
                       params.boundary_only)
        results[pol.value] = run_learner(D, plans, tree_learner(p))
    return build_report(dataset, len(D), cv, results, policies[0].value, notes)


# ---------------------------------------------------------------------------
# irrelevant attributes


def augment_irrelevant(D: Dataset, n_cont: int = 10, n_disc: int = 10, disc_card: int = 10,
                       seed: int = 0) -> Dataset:
    """Append uniform [0, 1) continuous and equiprobable discrete noise attributes."""
    if n_cont == 0 and n_disc == 0:
        return D
    n = len(D)
    attrs = list(D.schema.attributes)
    cols = [D.X]
    for i in range(1, n_cont + 1):
        attrs.append(AttributeDecl.continuous(f"_irr_c{i}"))
        cols.append(rng.stream(seed, rng.AUGMENT_CONTINUOUS, i).random(n)[:, None])
    values = tuple(f"v{j}" for j in range(disc_card))
    for i in range(1, n_disc + 1):
        attrs.append(AttributeDecl.discrete(f"_irr_d{i}", values))
        cols.append(rng.stream(seed, rng.AUGMENT_DISCRETE, i).integers(0, disc_card, n)[:, None].astype(float))
    schema = Schema(tuple(attrs), D.schema.classes)
    return Dataset(schema, np.hstack(cols), D.y, D.w)


# ---------------------------------------------------------------------------
# global discretization


@dataclass
class DiscretizationTrial:
    report: CvReport
    audit: list[str]
    error_ratio: float  # discretized error / local-threshold error


def _leakage_audit(D: Dataset, plan: FoldPlan, fold: int, rules, seed: int) -> str:
    """Refit on a copy whose held-out labels are scrambled; rules must not move."""
    test = plan.test_index(fold)
    y = np.array(D.y, copy=True)
    gen = rng.stream(seed, rng.AUDIT, plan.repeat * plan.k + fold)
    y[test] = gen.integers(0, D.schema.n_classes, test.size)
    scrambled = Dataset(D.schema, D.X, y, D.w).subset(plan.train_index(fold))
    same = fit_rules(scrambled) == rules
    overlap = np.intersect1d(plan.train_index(fold), test).size
    status = "ok" if same and overlap == 0 else "LEAK"
    if status != "ok":
        raise AssertionError(f"leakage audit failed on repeat {plan.repeat} fold {fold}")
    return (f"repeat {plan.repeat} fold {fold}: train={plan.train_index(fold).size} "
            f"test={test.size} overlap={overlap} rules_invariant_to_test_labels={same} {status}")


def discretization_experiment(
    D: Dataset,
    cv: CvParams = CvParams(),
    params: GrowParams = GrowParams(),
    dataset: str = "data",
    audit: bool = True,
) -> DiscretizationTrial:
    """Compare local thresholds (Rel 8) with trees on globally discretized data.

    Rules are fit on each training portion and applied unchanged to its
    held-out fold.  Both systems see the same fold plans.
    """
    if not D.schema.has_continuous():
        raise ValueError("discretization experiment needs at least one continuous attribute")
    plans = fold_plans(D, cv)
    local = GrowParams(Policy.REL8, params.min_split_weight, params.prune_confidence, params.pruning)
    local_results = run_learner(D, plans, tree_learner(local))

    lines: list[str] = []
    disc_results = []
    for plan in plans:
        wrong, sizes = 0.0, []
        for f in range(plan.k):
            train = D.subset(plan.train_index(f))
            test = D.subset(plan.test_index(f))
            rules = fit_rules(train)
            if audit:
                lines.append(_leakage_audit(D, plan, f, rules, cv.seed))
            tree = induce(apply_rules(train, rules), local)
            wrong += error_percent(tree, apply_rules(test, rules)) * test.total_weight / 100.0
            sizes.append(tree_size(tree))
        disc_results.append(RepeatResult(100.0 * wrong / D.total_weight, float(np.mean(sizes))))

    report = build_report(dataset, len(D), cv, {"rel8": local_results, "discr": disc_results}, "discr")
    ratio = _ratio(report.system("discr").error_mean, report.system("rel8").error_mean)
    return DiscretizationTrial(report, lines, ratio)

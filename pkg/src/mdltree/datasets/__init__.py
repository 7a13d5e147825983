"""Bundled and synthetic datasets.

``iris`` ships as ``.names`` / ``.data`` files.  The generators below build
stand-ins for data sets that cannot be bundled; every one is a pure function
of its seed.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .. import rng
from ..data import AttributeDecl, Dataset, Schema, load_stem

HERE = Path(__file__).parent


def stem(name: str) -> str:
    return str(HERE / name)


def load_iris() -> Dataset:
    return load_stem(stem("iris"))


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def diabetes_surrogate(seed: int = 0, n: int = 768) -> Dataset:
    """Continuous-only, two-class, noisy data shaped like the Pima diabetes set.

    Eight attributes with the Pima value grids (integer counts, one-decimal
    BMI, three-decimal pedigree).  The class follows a logistic model in
    glucose, BMI, age and pedigree; the remaining attributes are weak or
    irrelevant.  A little over a quarter of the cases are positive.
    """
    g = rng.stream(seed, rng.SYNTHETIC, 1)
    preg = np.minimum(g.poisson(3.8, n), 17).astype(float)
    glucose = np.clip(np.round(g.normal(121, 31, n)), 44, 199)
    pressure = np.clip(np.round(g.normal(72, 12, n)), 24, 122)
    skin = np.clip(np.round(g.normal(29, 10, n)), 7, 99)
    insulin = np.clip(np.round(g.lognormal(4.8, 0.6, n)), 14, 846)
    bmi = np.clip(np.round(g.normal(32.4, 6.9, n), 1), 18.2, 67.1)
    pedigree = np.clip(np.round(g.gamma(2.2, 0.21, n), 3), 0.078, 2.42)
    age = np.clip(np.round(21 + g.gamma(1.6, 7.5, n)), 21, 81)
    z = (
        -1.25
        + 0.034 * (glucose - 121)
        + 0.085 * (bmi - 32.4)
        + 0.025 * (age - 33)
        + 0.9 * (pedigree - 0.47)
        + 0.05 * (preg - 3.8)
    )
    y = (g.random(n) < _sigmoid(z)).astype(np.int64)
    names = ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age"]
    schema = Schema(tuple(AttributeDecl.continuous(a) for a in names), ("tested_negative", "tested_positive"))
    X = np.column_stack([preg, glucose, pressure, skin, insulin, bmi, pedigree, age])
    return Dataset(schema, X, y)


def mixed_surrogate(seed: int = 0, n: int = 368) -> Dataset:
    """Two-class data with informative discrete attributes and a few
    continuous ones, in the spirit of the horse-colic task."""
    g = rng.stream(seed, rng.SYNTHETIC, 2)
    attrs, cols = [], []
    z = np.zeros(n)
    effects = [1.6, -1.2, 0.9]
    for i, eff in enumerate(effects):
        v = g.integers(0, 3, n)
        attrs.append(AttributeDecl.discrete(f"d{i + 1}", ("low", "mid", "high")))
        cols.append(v.astype(float))
        z += eff * (v - 1)
    for i in range(3):
        v = g.integers(0, 2, n)
        attrs.append(AttributeDecl.discrete(f"b{i + 1}", ("no", "yes")))
        cols.append(v.astype(float))
        if i == 0:
            z += 0.8 * (2 * v - 1)
    for i in range(4):
        v = np.round(g.normal(0, 1, n), 2)
        attrs.append(AttributeDecl.continuous(f"c{i + 1}"))
        cols.append(v)
        if i == 0:
            z += 0.7 * v
    y = (g.random(n) < _sigmoid(z)).astype(np.int64)
    schema = Schema(tuple(attrs), ("no", "yes"))
    return Dataset(schema, np.column_stack(cols), y)


def regional_flip(n: int, seed: int = 0, noise: float = 0.05) -> Dataset:
    """Two continuous attributes where the class threshold on ``y`` flips
    direction across ``x = 0.3``.

    ``x`` on its own says nothing about the class, so a global per-attribute
    discretization cannot find any cut on it, while a tree choosing
    thresholds locally can.
    """
    g = rng.stream(seed, rng.SYNTHETIC, 3)
    x = np.round(g.random(n), 3)
    yv = np.round(g.random(n), 3)
    cls = np.where(x > 0.3, yv > 0.5, yv <= 0.5).astype(np.int64)
    flip = g.random(n) < noise
    cls = np.where(flip, 1 - cls, cls)
    schema = Schema((AttributeDecl.continuous("x"), AttributeDecl.continuous("y")), ("neg", "pos"))
    return Dataset(schema, np.column_stack([x, yv]), cls)


def two_clusters(n_per_class: int = 50, seed: int = 0) -> Dataset:
    """One continuous attribute: class ``a`` near 0, class ``b`` near 1."""
    g = rng.stream(seed, rng.SYNTHETIC, 4)
    a = g.normal(0.0, 0.05, n_per_class)
    b = g.normal(1.0, 0.05, n_per_class)
    schema = Schema((AttributeDecl.continuous("v"),), ("a", "b"))
    X = np.concatenate([a, b])[:, None]
    y = np.r_[np.zeros(n_per_class, int), np.ones(n_per_class, int)]
    return Dataset(schema, X, y)


def resolve(name: str, seed: int = 0) -> Dataset:
    """Dataset by stem path, bundled name, or ``synth:`` generator name.

    Synthetic generators take their seed from ``seed``.
    """
    if name.startswith("synth:"):
        kind = name[len("synth:"):]
        if kind == "diabetes":
            return diabetes_surrogate(seed)
        if kind == "mixed":
            return mixed_surrogate(seed)
        if kind == "clusters":
            return two_clusters(50, seed)
        if kind.startswith("flip-"):
            return regional_flip(int(kind[len("flip-"):]), seed)
        raise ValueError(f"unknown synthetic dataset {name!r}")
    if not Path(f"{name}.names").exists() and (HERE / f"{name}.names").exists():
        return load_stem(stem(name))
    return load_stem(name)

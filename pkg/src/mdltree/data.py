"""Schemas, weighted datasets and C4.5-style ``.names`` / ``.data`` ingestion.

A :class:`Dataset` stores its cases column-wise: ``X`` is an ``(n, m)`` float
array where continuous attributes hold their numeric value, discrete
attributes hold the index of their value in the declared value list, and
``NaN`` marks an unknown value.  Class indices live in ``y`` and case weights
in ``w``.  Datasets are never mutated after construction.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

UNKNOWN = None


class DataFormatError(ValueError):
    """Raised for malformed schema or data text; carries the offending line."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    values: tuple[str, ...] | None = None  # None means continuous

    def __post_init__(self):
        if self.values is not None:
            if len(self.values) == 0:
                raise ValueError(f"discrete attribute {self.name!r} has no values")
            if len(set(self.values)) != len(self.values):
                raise ValueError(f"discrete attribute {self.name!r} has duplicate values")

    @property
    def is_continuous(self) -> bool:
        return self.values is None

    @classmethod
    def continuous(cls, name: str) -> "AttributeDecl":
        return cls(name, None)

    @classmethod
    def discrete(cls, name: str, values: Iterable[str]) -> "AttributeDecl":
        return cls(name, tuple(values))


@dataclass(frozen=True)
class Schema:
    attributes: tuple[AttributeDecl, ...]
    classes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("schema has no classes")
        if len(set(self.classes)) != len(self.classes):
            raise ValueError("schema has duplicate class labels")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate attribute name {dup!r}")

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def index_of(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise KeyError(name)

    @property
    def continuous_indices(self) -> list[int]:
        return [i for i, a in enumerate(self.attributes) if a.is_continuous]

    def has_continuous(self) -> bool:
        return any(a.is_continuous for a in self.attributes)


@dataclass(frozen=True)
class Case:
    """One case in row form; ``values`` use ``None`` for unknown."""

    values: tuple
    class_index: int
    weight: float = 1.0


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    schema: Schema
    X: np.ndarray
    y: np.ndarray
    w: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.array(self.X, dtype=float, copy=True)
        n = X.shape[0] if X.ndim == 2 else len(self.y)
        X = X.reshape(n, self.schema.n_attributes)
        y = np.array(self.y, dtype=np.int64, copy=True).reshape(n)
        w = np.ones(n) if self.w is None else np.array(self.w, dtype=float, copy=True).reshape(n)
        if n and (y.min() < 0 or y.max() >= self.schema.n_classes):
            raise ValueError("class index out of range")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("case weights must be finite and non-negative")
        for j, a in enumerate(self.schema.attributes):
            if a.is_continuous:
                col = X[:, j]
                if np.any(np.isinf(col)):
                    raise ValueError(f"attribute {a.name!r} has infinite values")
                continue
            col = X[:, j]
            known = col[~np.isnan(col)]
            if known.size and (
                np.any(known != np.floor(known)) or known.min() < 0 or known.max() >= len(a.values)
            ):
                raise ValueError(f"value index out of range for attribute {a.name!r}")
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "w", _readonly(w))

    def __len__(self) -> int:
        return self.y.shape[0]

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())

    @property
    def cases(self) -> list[Case]:
        return [self.case(i) for i in range(len(self))]

    def case(self, i: int) -> Case:
        row = []
        for j, a in enumerate(self.schema.attributes):
            v = self.X[i, j]
            if math.isnan(v):
                row.append(UNKNOWN)
            elif a.is_continuous:
                row.append(float(v))
            else:
                row.append(int(v))
        return Case(tuple(row), int(self.y[i]), float(self.w[i]))

    @classmethod
    def from_cases(cls, schema: Schema, cases: Sequence[Case]) -> "Dataset":
        m = schema.n_attributes
        X = np.full((len(cases), m), np.nan)
        for i, c in enumerate(cases):
            if len(c.values) != m:
                raise ValueError(f"case {i} has {len(c.values)} values, expected {m}")
            for j, v in enumerate(c.values):
                if v is not None:
                    X[i, j] = v
        return cls(schema, X, [c.class_index for c in cases], [c.weight for c in cases])

    @classmethod
    def _trusted(cls, schema: Schema, X: np.ndarray, y: np.ndarray, w: np.ndarray) -> "Dataset":
        # arrays derived from an already-validated dataset
        obj = object.__new__(cls)
        for name, a in (("X", X), ("y", y), ("w", w)):
            object.__setattr__(obj, name, _readonly(a))
        object.__setattr__(obj, "schema", schema)
        return obj

    def subset(self, index, weights=None) -> "Dataset":
        index = np.asarray(index)
        if weights is None:
            w = self.w[index]
        else:
            w = np.array(weights, dtype=float)
            if w.shape != index.shape or np.any(w < 0):
                raise ValueError("subset weights must be non-negative, one per case")
        return Dataset._trusted(self.schema, self.X[index], self.y[index], w)

    def with_weights(self, w) -> "Dataset":
        return Dataset(self.schema, self.X, self.y, w)

    def same_as(self, other: "Dataset") -> bool:
        return (
            self.schema == other.schema
            and np.array_equal(self.X, other.X, equal_nan=True)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.w, other.w)
        )


def class_distribution(D: Dataset) -> np.ndarray:
    """Summed case weight per class (length C)."""
    return np.bincount(D.y, weights=D.w, minlength=D.schema.n_classes).astype(float)


def outcome_indices(X_col: np.ndarray, threshold: float | None) -> np.ndarray:
    """Outcome index of each value for a test; -1 where the value is unknown.

    Continuous tests (``threshold`` given) map ``v <= t`` to 0 and ``v > t`` to 1.
    """
    out = np.full(X_col.shape[0], -1, dtype=np.int64)
    known = ~np.isnan(X_col)
    if threshold is None:
        out[known] = X_col[known].astype(np.int64)
    else:
        out[known] = np.where(X_col[known] <= threshold, 0, 1)
    return out


def partition_by_test(D: Dataset, test) -> list[Dataset]:
    """Split ``D`` by ``test`` (anything with ``attribute`` and ``threshold``).

    Cases with an unknown tested value go down every outcome, their weight
    scaled by that outcome's share of the known-value weight.
    """
    attr = test.attribute
    decl = D.schema.attributes[attr]
    k = 2 if decl.is_continuous else len(decl.values)
    out = outcome_indices(D.X[:, attr], test.threshold if decl.is_continuous else None)
    known = out >= 0
    known_w = np.bincount(out[known], weights=D.w[known], minlength=k)
    total_known = known_w.sum()
    shares = known_w / total_known if total_known > 0 else np.full(k, 1.0 / k)
    unknown_idx = np.flatnonzero(~known)
    subsets = []
    for i in range(k):
        idx = np.flatnonzero(out == i)
        if unknown_idx.size and shares[i] > 0:
            idx = np.concatenate([idx, unknown_idx])
            w = D.w[idx].copy()
            w[-unknown_idx.size:] *= shares[i]
            subsets.append(D.subset(idx, w))
        else:
            subsets.append(D.subset(idx))
    return subsets


# ---------------------------------------------------------------------------
# .names / .data ingestion

def _strip(line: str) -> str:
    """Drop an unescaped ``|`` comment and surrounding blanks."""
    i, n = 0, len(line)
    while i < n:
        if line[i] == "\\":
            i += 2
            continue
        if line[i] == "|":
            return line[:i].strip()
        i += 1
    return line.strip()


def _split_list(body: str) -> list[str]:
    """Split on unescaped commas; ``\\x`` stands for a literal ``x``."""
    out, cur, i = [], [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            cur.append(body[i + 1])
            i += 2
            continue
        if ch == ",":
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
        i += 1
    out.append("".join(cur).strip())
    return out


def _ends_entry(buf: str) -> bool:
    if not buf.endswith("."):
        return False
    slashes = len(buf) - 1 - len(buf[:-1].rstrip("\\"))
    return slashes % 2 == 0


def escape(token: str) -> str:
    """Escape separators so ``token`` survives a ``.names`` / ``.data`` round trip."""
    t = token.replace("\\", "\\\\").replace(",", "\\,").replace("|", "\\|")
    return t[:-1] + "\\." if t.endswith(".") else t


def parse_names(text: str, source: str | None = None) -> Schema:
    """Parse a C4.5 ``.names`` file into a :class:`Schema`.

    Entries may span lines; each ends with an unescaped ``.`` at end of line.
    """
    entries: list[tuple[int, str]] = []
    buf, start = "", None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if start is None:
            start = lineno
        buf = f"{buf} {line}" if buf else line
        if _ends_entry(buf):
            entries.append((start, buf[:-1].strip()))
            buf, start = "", None
    if buf:
        entries.append((start, buf))  # final entry may omit the period

    if not entries:
        raise DataFormatError("empty class list", 1, source)
    lineno, first = entries[0]
    classes = [c for c in _split_list(first) if c]
    if not classes or ":" in first:
        raise DataFormatError("first entry must list the class labels", lineno, source)
    if len(set(classes)) != len(classes):
        raise DataFormatError("duplicate class label", lineno, source)

    attrs: list[AttributeDecl] = []
    seen: set[str] = set()
    for lineno, entry in entries[1:]:
        name, sep, body = entry.partition(":")
        name, body = name.strip(), body.strip()
        if not sep or not name or not body:
            raise DataFormatError(f"malformed attribute declaration {entry!r}", lineno, source)
        if name in seen:
            raise DataFormatError(f"duplicate attribute name {name!r}", lineno, source)
        seen.add(name)
        if body == "continuous":
            attrs.append(AttributeDecl.continuous(name))
            continue
        values = _split_list(body)
        if any(v == "" for v in values):
            raise DataFormatError(f"empty value in declaration of {name!r}", lineno, source)
        if len(set(values)) != len(values):
            raise DataFormatError(f"duplicate value in declaration of {name!r}", lineno, source)
        attrs.append(AttributeDecl.discrete(name, values))
    return Schema(tuple(attrs), tuple(classes))


def _parse_row(fields: list[str], schema: Schema, lineno: int, source: str | None):
    m = schema.n_attributes
    if len(fields) != m + 1:
        raise DataFormatError(f"expected {m + 1} fields, found {len(fields)}", lineno, source)
    row = np.full(m, np.nan)
    for j, (a, raw) in enumerate(zip(schema.attributes, fields)):
        if raw == "?":
            continue
        if a.is_continuous:
            try:
                v = float(raw)
            except ValueError:
                raise DataFormatError(
                    f"cannot parse {raw!r} as a number for attribute {a.name!r}", lineno, source
                ) from None
            if not math.isfinite(v):
                raise DataFormatError(f"non-finite value {raw!r} for {a.name!r}", lineno, source)
            row[j] = v
        else:
            try:
                row[j] = a.values.index(raw)
            except ValueError:
                raise DataFormatError(
                    f"value {raw!r} not declared for attribute {a.name!r}", lineno, source
                ) from None
    label = fields[-1]
    try:
        cls = schema.classes.index(label)
    except ValueError:
        raise DataFormatError(f"class label {label!r} not in schema", lineno, source) from None
    return row, cls


def parse_data(text: str, schema: Schema, source: str | None = None) -> Dataset:
    """Parse ``.data`` text: one comma-separated case per line, class last."""
    rows, ys = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        row, cls = _parse_row(_split_list(line), schema, lineno, source)
        rows.append(row)
        ys.append(cls)
    X = np.array(rows) if rows else np.empty((0, schema.n_attributes))
    return Dataset(schema, X, ys)


def parse_csv(text: str, class_column: str, source: str | None = None) -> Dataset:
    """Read a CSV with a header row.

    A column is continuous when every known entry parses as a number;
    otherwise its sorted distinct entries become the value list.  Class labels
    are ordered by first appearance.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataFormatError("empty CSV", 1, source) from None
    if class_column not in header:
        raise DataFormatError(f"class column {class_column!r} not in header", 1, source)
    ci = header.index(class_column)
    body = []
    for lineno, rec in enumerate(reader, 2):
        rec = [f.strip() for f in rec]
        if not any(rec):
            continue
        if len(rec) != len(header):
            raise DataFormatError(f"expected {len(header)} fields, found {len(rec)}", lineno, source)
        body.append((lineno, rec))

    attr_cols = [j for j in range(len(header)) if j != ci]
    attrs = []
    for j in attr_cols:
        known = [rec[j] for _, rec in body if rec[j] != "?"]
        try:
            for v in known:
                float(v)
            attrs.append(AttributeDecl.continuous(header[j]))
        except ValueError:
            attrs.append(AttributeDecl.discrete(header[j], sorted(set(known))))
    classes = list(dict.fromkeys(rec[ci] for _, rec in body))
    schema = Schema(tuple(attrs), tuple(classes))
    rows, ys = [], []
    for lineno, rec in body:
        fields = [rec[j] for j in attr_cols] + [rec[ci]]
        row, cls = _parse_row(fields, schema, lineno, source)
        rows.append(row)
        ys.append(cls)
    X = np.array(rows) if rows else np.empty((0, schema.n_attributes))
    return Dataset(schema, X, ys)


def format_number(v: float) -> str:
    """Shortest decimal string that parses back to exactly ``v``."""
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") else r


def serialize_names(schema: Schema, header: Sequence[str] = ()) -> str:
    lines = [f"| {h}" if h else "|" for h in header]
    lines.append(", ".join(escape(c) for c in schema.classes) + ".")
    lines.append("")
    for a in schema.attributes:
        body = "continuous" if a.is_continuous else ", ".join(escape(v) for v in a.values)
        lines.append(f"{a.name}: {body}.")
    return "\n".join(lines) + "\n"


def serialize_data(D: Dataset, header: Sequence[str] = ()) -> str:
    """Write cases in ``.data`` form; weights are not representable and dropped."""
    out = [f"| {h}" if h else "|" for h in header]
    attrs = D.schema.attributes
    for i in range(len(D)):
        fields = []
        for j, a in enumerate(attrs):
            v = D.X[i, j]
            if math.isnan(v):
                fields.append("?")
            elif a.is_continuous:
                fields.append(format_number(v))
            else:
                fields.append(escape(a.values[int(v)]))
        fields.append(escape(D.schema.classes[D.y[i]]))
        out.append(",".join(fields))
    return "\n".join(out) + "\n"


def load_stem(stem: str) -> Dataset:
    """Read ``stem.names`` and ``stem.data``."""
    names_path, data_path = f"{stem}.names", f"{stem}.data"
    with open(names_path) as f:
        schema = parse_names(f.read(), source=names_path)
    with open(data_path) as f:
        return parse_data(f.read(), schema, source=data_path)


def load_csv(path: str, class_column: str) -> Dataset:
    with open(path) as f:
        return parse_csv(f.read(), class_column, source=path)

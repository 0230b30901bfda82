"""Parametric design space: parameter specs, bounds, design vectors.

A schema is an ordered list of parameters; the order defines vector index
positions and is fixed for the life of the schema. Continuous parameters
carry finite (lower, upper) bounds in schema units (mm, degrees, or a
unit-interval color channel); categorical parameters carry an ordered list
of unique labels. Designs store continuous values raw and categorical
values as label indices.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .errors import (DataFormatError, InvalidDesignError, SchemaError,
                     SchemaVersionMismatch)

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class ParameterSpec:
    """One axis of the design hyperrectangle."""

    name: str
    kind: str                                   # CONTINUOUS or CATEGORICAL
    lower: float = math.nan                     # continuous only
    upper: float = math.nan                     # continuous only
    categories: tuple[str, ...] = ()            # categorical only
    default: float | int = 0.0                  # value, or label index

    def __post_init__(self):
        if self.kind == CONTINUOUS:
            if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
                raise SchemaError("bounds must be finite", parameter=self.name)
            if not self.lower < self.upper:
                raise SchemaError(
                    f"inverted or empty bounds [{self.lower}, {self.upper}]",
                    parameter=self.name)
            if not self.lower <= float(self.default) <= self.upper:
                raise SchemaError(
                    f"default {self.default} outside [{self.lower}, {self.upper}]",
                    parameter=self.name)
        elif self.kind == CATEGORICAL:
            if not self.categories:
                raise SchemaError("categorical needs at least one label",
                                  parameter=self.name)
            if len(set(self.categories)) != len(self.categories):
                raise SchemaError("duplicate category labels", parameter=self.name)
            if not 0 <= int(self.default) < len(self.categories):
                raise SchemaError("default label index out of range",
                                  parameter=self.name)
        else:
            raise SchemaError(f"unknown kind {self.kind!r}", parameter=self.name)

    @property
    def is_continuous(self) -> bool:
        return self.kind == CONTINUOUS


@dataclass(frozen=True)
class DesignSchema:
    """Ordered parameter list; the order defines vector slots."""

    parameters: tuple[ParameterSpec, ...]
    version: str

    def __post_init__(self):
        names = [p.name for p in self.parameters]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise SchemaError(f"duplicate parameter name {sorted(dupes)[0]!r}",
                              parameter=sorted(dupes)[0])

    def __len__(self) -> int:
        return len(self.parameters)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.parameters)

    def index_of(self, name: str) -> int:
        for i, p in enumerate(self.parameters):
            if p.name == name:
                return i
        raise KeyError(name)

    def spec(self, name: str) -> ParameterSpec:
        return self.parameters[self.index_of(name)]

    def default_design(self) -> "DesignVector":
        values = tuple(
            float(p.default) if p.is_continuous else int(p.default)
            for p in self.parameters)
        return DesignVector(values=values, schema_version=self.version)

    def encoded_length(self) -> int:
        """Length of encode_real output: continuous slots + one-hot blocks."""
        n = 0
        for p in self.parameters:
            n += 1 if p.is_continuous else len(p.categories)
        return n


@dataclass(frozen=True)
class DesignVector:
    """Parameter values in schema order; categoricals as label indices."""

    values: tuple[float | int, ...]
    schema_version: str

    def value(self, schema: DesignSchema, name: str) -> float | int:
        return self.values[schema.index_of(name)]

    def replace(self, schema: DesignSchema, **updates) -> "DesignVector":
        """New vector with the named parameters changed."""
        vals = list(self.values)
        for name, v in updates.items():
            i = schema.index_of(name)
            vals[i] = int(v) if not schema.parameters[i].is_continuous else float(v)
        return DesignVector(values=tuple(vals), schema_version=self.schema_version)

    def label(self, schema: DesignSchema, name: str) -> str:
        p = schema.spec(name)
        return p.categories[int(self.value(schema, name))]


@dataclass(frozen=True)
class BoundsTable:
    """(lower, upper) per continuous parameter, in schema order."""

    names: tuple[str, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        for n, lo, hi in zip(self.names, self.lower, self.upper):
            if not lo < hi:
                raise SchemaError(f"inverted bounds ({lo}, {hi})", parameter=n)

    def row(self, name: str) -> tuple[float, float]:
        i = self.names.index(name)
        return (self.lower[i], self.upper[i])


def schema_bounds(schema: DesignSchema) -> BoundsTable:
    """BoundsTable carrying the schema's own continuous bounds."""
    cont = [p for p in schema.parameters if p.is_continuous]
    return BoundsTable(
        names=tuple(p.name for p in cont),
        lower=tuple(p.lower for p in cont),
        upper=tuple(p.upper for p in cont))


# -- schema config file ------------------------------------------------

def load_schema(path) -> DesignSchema:
    """Load a schema from the documented text config format.

    One record per line:
      ``<name> cont <lower> <upper> <default>``
      ``<name> cat <label1,label2,...> <default_label>``
      ``version <string>`` (optional, at most once)
    ``#`` starts a comment; blank lines are ignored.
    """
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_schema_text(text)


def parse_schema_text(text: str) -> DesignSchema:
    params: list[ParameterSpec] = []
    seen: dict[str, int] = {}
    version = "unversioned"
    version_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "version":
            if version_seen:
                raise SchemaError("duplicate version record", line=lineno)
            if len(tokens) != 2:
                raise SchemaError("version record needs one value", line=lineno)
            version = tokens[1]
            version_seen = True
            continue
        name = tokens[0]
        if name in seen:
            raise SchemaError(
                f"duplicate parameter name {name!r} (first at line {seen[name]})",
                parameter=name, line=lineno)
        seen[name] = lineno
        if len(tokens) < 2:
            raise SchemaError("missing kind", parameter=name, line=lineno)
        kind = tokens[1]
        try:
            if kind in ("cont", "continuous"):
                if len(tokens) != 5:
                    raise SchemaError("continuous record needs: name cont lower upper default",
                                      parameter=name, line=lineno)
                lo, hi, default = (float(tokens[2]), float(tokens[3]), float(tokens[4]))
                params.append(ParameterSpec(name=name, kind=CONTINUOUS,
                                            lower=lo, upper=hi, default=default))
            elif kind == "cat":
                if len(tokens) != 4:
                    raise SchemaError("categorical record needs: name cat labels default",
                                      parameter=name, line=lineno)
                labels = tuple(tokens[2].split(","))
                if tokens[3] not in labels:
                    raise SchemaError(f"default label {tokens[3]!r} not in categories",
                                      parameter=name, line=lineno)
                params.append(ParameterSpec(name=name, kind=CATEGORICAL,
                                            categories=labels,
                                            default=labels.index(tokens[3])))
            else:
                raise SchemaError(f"unknown kind {kind!r}", parameter=name, line=lineno)
        except ValueError as e:
            raise SchemaError(f"bad number: {e}", parameter=name, line=lineno) from None
        except SchemaError as e:
            if e.line is None:
                raise SchemaError(str(e), parameter=name, line=lineno) from None
            raise
    if not params:
        raise SchemaError("schema defines no parameters")
    return DesignSchema(parameters=tuple(params), version=version)


def reference_schema() -> DesignSchema:
    """The bundled 24-parameter reference bicycle schema."""
    text = resources.files("velogen.data").joinpath("reference_schema.txt").read_text("utf-8")
    return parse_schema_text(text)


# -- operations --------------------------------------------------------

def bounds_from_percentiles(samples: np.ndarray, names: Sequence[str],
                            lo_pct: float = 1.0, hi_pct: float = 99.0) -> BoundsTable:
    """Per-column percentile bounds, linear-interpolation method.

    Percentile index = pct/100 * (n-1), interpolated between the two
    nearest order statistics.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2:
        raise ValueError("samples must be a 2-D matrix")
    if samples.shape[0] < 2:
        raise ValueError("need at least 2 samples per parameter")
    if not lo_pct < hi_pct:
        raise ValueError("lo_pct must be below hi_pct")
    if samples.shape[1] != len(names):
        raise ValueError("names length must match sample columns")
    lowers, uppers = [], []
    for j, name in enumerate(names):
        col = samples[:, j]
        if np.min(col) == np.max(col):
            raise SchemaError("degenerate column (all values equal)", parameter=name)
        lo = float(np.percentile(col, lo_pct, method="linear"))
        hi = float(np.percentile(col, hi_pct, method="linear"))
        lowers.append(lo)
        uppers.append(hi)
    return BoundsTable(names=tuple(names), lower=tuple(lowers), upper=tuple(uppers))


@dataclass(frozen=True)
class Violation:
    parameter: str
    value: float | int
    expected: str

    def __str__(self):
        return f"{self.parameter}={self.value} not in {self.expected}"


def validate(design: DesignVector, schema: DesignSchema) -> list[Violation]:
    """All bound/label violations; empty list means valid."""
    if design.schema_version != schema.version:
        raise SchemaVersionMismatch(
            f"design built for schema {design.schema_version!r}, "
            f"validating against {schema.version!r}")
    if len(design.values) != len(schema.parameters):
        raise SchemaVersionMismatch(
            f"design has {len(design.values)} values, schema has "
            f"{len(schema.parameters)} parameters")
    out: list[Violation] = []
    for p, v in zip(schema.parameters, design.values):
        if p.is_continuous:
            v = float(v)
            if not math.isfinite(v) or not p.lower <= v <= p.upper:
                out.append(Violation(p.name, v, f"[{p.lower}, {p.upper}]"))
        else:
            if int(v) != v or not 0 <= int(v) < len(p.categories):
                out.append(Violation(p.name, v, f"label index 0..{len(p.categories) - 1}"))
    return out


def encode_real(design: DesignVector, schema: DesignSchema) -> np.ndarray:
    """Min-max scale continuous values to [0,1]; one-hot categoricals.

    Output layout follows schema order: one slot per continuous
    parameter, a block of len(categories) slots per categorical.
    """
    bad = validate(design, schema)
    if bad:
        raise InvalidDesignError(bad)
    out = np.empty(schema.encoded_length(), dtype=np.float64)
    k = 0
    for p, v in zip(schema.parameters, design.values):
        if p.is_continuous:
            out[k] = (float(v) - p.lower) / (p.upper - p.lower)
            k += 1
        else:
            block = np.zeros(len(p.categories))
            block[int(v)] = 1.0
            out[k:k + len(block)] = block
            k += len(block)
    return out


# -- CSV import/export -------------------------------------------------

def designs_to_csv(designs: Iterable[DesignVector], schema: DesignSchema) -> str:
    """CSV text: header of parameter names, categoricals as labels."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(schema.names)
    for d in designs:
        row = []
        for p, v in zip(schema.parameters, d.values):
            row.append(repr(float(v)) if p.is_continuous else p.categories[int(v)])
        w.writerow(row)
    return buf.getvalue()


def designs_from_csv(text: str, schema: DesignSchema) -> list[DesignVector]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DataFormatError("empty CSV")
    header = rows[0]
    if tuple(header) != schema.names:
        raise DataFormatError(
            f"CSV header {header} does not match schema parameters")
    out = []
    for r in rows[1:]:
        if not r:
            continue
        if len(r) != len(schema.parameters):
            raise DataFormatError(f"row has {len(r)} fields, expected "
                                         f"{len(schema.parameters)}")
        vals: list[float | int] = []
        for p, cell in zip(schema.parameters, r):
            if p.is_continuous:
                vals.append(float(cell))
            else:
                if cell not in p.categories:
                    raise DataFormatError(
                        f"unknown label {cell!r} for {p.name}")
                vals.append(p.categories.index(cell))
        out.append(DesignVector(values=tuple(vals), schema_version=schema.version))
    return out


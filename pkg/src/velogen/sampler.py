"""Low-discrepancy sampling of the design hyperrectangle.

Points come from a Sobol sequence in Gray-code order, built from a
vendored copy of the Joe & Kuo ``new-joe-kuo-6`` direction-number table
(dimensions up to 192, checksummed at load). Point i is computed by
direct XOR over the set bits of gray(i), so any index range can be
generated independently of batching: streaming k calls of count=1 is
bit-identical to one call of count=k, and disjoint shards can generate
disjoint index ranges in parallel.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterator

import numpy as np

from .design_schema import (BoundsTable, DesignSchema, DesignVector,
                            schema_bounds)
from .errors import SampleCapError, VelogenError

BITS = 30                      # coordinates are multiples of 2**-30 in [0, 1)
_TABLE_FILE = "sobol_new_joe_kuo_6_d192.txt"
_TABLE_SHA256 = "2a8f0cd36d4b25c432ea57d912f6f7daa1f9a08431a3cc33b58a96a894ea2a6a"
_MAX_DIM = 192

_direction_cache: dict[int, np.ndarray] = {}


def _load_table() -> list[tuple[int, int, list[int]]]:
    """(s, a, m_initial) per dimension >= 2, from the vendored table."""
    raw = resources.files("velogen.data").joinpath(_TABLE_FILE).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != _TABLE_SHA256:
        raise VelogenError(
            f"direction-number table checksum mismatch: {digest}")
    rows = []
    for line in raw.decode("ascii").splitlines()[1:]:
        parts = line.split()
        rows.append((int(parts[1]), int(parts[2]), [int(x) for x in parts[3:]]))
    return rows


def direction_integers(dim: int) -> np.ndarray:
    """Direction integers V, shape (dim, BITS), uint64, scaled to BITS bits."""
    if dim in _direction_cache:
        return _direction_cache[dim]
    if not 1 <= dim <= _MAX_DIM:
        raise VelogenError(f"dimension {dim} exceeds table maximum {_MAX_DIM}")
    table = _load_table()
    V = np.zeros((dim, BITS), dtype=np.uint64)
    V[0] = [1 << (BITS - 1 - k) for k in range(BITS)]
    for j in range(1, dim):
        s, a, m_init = table[j - 1]
        m = list(m_init)
        for k in range(s, BITS):
            new = m[k - s] ^ (m[k - s] << s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    new ^= m[k - i] << i
            m.append(new)
        V[j] = [m[k] << (BITS - 1 - k) for k in range(BITS)]
    _direction_cache[dim] = V
    return V


def sobol_points(dim: int, count: int, skip: int = 0) -> np.ndarray:
    """Points skip..skip+count-1 of the unscrambled Sobol sequence.

    Returns a (count, dim) float64 matrix in [0, 1). Deterministic and
    batching-invariant: output row r is a pure function of (dim, skip+r).
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if skip < 0:
        raise ValueError("skip must be non-negative")
    if skip + count > (1 << BITS):
        raise VelogenError(f"index range exceeds 2**{BITS} points")
    V = direction_integers(dim)
    idx = np.arange(skip, skip + count, dtype=np.uint64)
    gray = idx ^ (idx >> np.uint64(1))
    acc = np.zeros((count, dim), dtype=np.uint64)
    for b in range(BITS):
        mask = (gray >> np.uint64(b)) & np.uint64(1)
        if mask.any():
            acc[mask.astype(bool)] ^= V[:, b]
    return acc.astype(np.float64) / float(1 << BITS)


@dataclass
class SobolState:
    """Streaming cursor over the sequence for one dimension count."""

    dimension: int
    index: int = 0

    def draw(self, count: int) -> np.ndarray:
        pts = sobol_points(self.dimension, count, skip=self.index)
        self.index += count
        return pts


def sampling_dimension(schema: DesignSchema) -> int:
    """Sobol axes consumed per design: one per parameter."""
    return len(schema.parameters)


def scale_to_bounds(points: np.ndarray, bounds: BoundsTable,
                    schema: DesignSchema) -> list[DesignVector]:
    """Map unit-cube rows into designs.

    Continuous axis: lower + u * (upper - lower). Categorical axis with K
    labels: index floor(u * K), clamped to K - 1.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[None, :]
    if points.shape[1] != sampling_dimension(schema):
        raise VelogenError(
            f"point dimension {points.shape[1]} != schema sampling dimension "
            f"{sampling_dimension(schema)}")
    lows = dict(zip(bounds.names, bounds.lower))
    highs = dict(zip(bounds.names, bounds.upper))
    designs = []
    for row in points:
        vals: list[float | int] = []
        for p, u in zip(schema.parameters, row):
            if p.is_continuous:
                lo = lows.get(p.name, p.lower)
                hi = highs.get(p.name, p.upper)
                vals.append(lo + float(u) * (hi - lo))
            else:
                k = len(p.categories)
                vals.append(min(int(u * k), k - 1))
        designs.append(DesignVector(values=tuple(vals),
                                    schema_version=schema.version))
    return designs


@dataclass
class SampleStats:
    """Acceptance bookkeeping for one sampling run."""

    attempted: int = 0
    accepted: int = 0
    rejected_by_rule: dict[str, int] = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempted if self.attempted else 0.0

    def record(self, rule_ids: list[str]) -> None:
        self.attempted += 1
        if not rule_ids:
            self.accepted += 1
        for rid in rule_ids:
            self.rejected_by_rule[rid] = self.rejected_by_rule.get(rid, 0) + 1

    def to_dict(self) -> dict:
        return {"attempted": self.attempted, "accepted": self.accepted,
                "acceptance_rate": self.acceptance_rate,
                "rejected_by_rule": dict(sorted(self.rejected_by_rule.items()))}


def sample_feasible(target: int, schema: DesignSchema,
                    constraint_checker: Callable[[DesignVector], list[str]],
                    batch: int = 1024, skip: int = 1,
                    bounds: BoundsTable | None = None,
                    attempt_cap: int | None = None,
                    stats: SampleStats | None = None,
                    ) -> Iterator[tuple[int, DesignVector]]:
    """Yield (sobol index, design) for the first `target` feasible designs.

    ``constraint_checker`` returns the violated rule ids for a design
    (empty list = feasible). Default skip=1 drops the all-zeros corner
    point. Raises SampleCapError, with stats attached, if attempt_cap
    designs are checked without reaching the target.
    """
    if stats is None:
        stats = SampleStats()
    if attempt_cap is None:
        attempt_cap = max(1_000_000, 1000 * target)
    if bounds is None:
        bounds = schema_bounds(schema)
    dim = sampling_dimension(schema)
    cursor = skip
    yielded = 0
    while yielded < target:
        n = min(batch, attempt_cap - stats.attempted)
        if n <= 0:
            raise SampleCapError(
                f"attempt cap {attempt_cap} exceeded with {yielded}/{target} "
                f"feasible designs (constraints too tight for bounds?)", stats)
        pts = sobol_points(dim, n, skip=cursor)
        designs = scale_to_bounds(pts, bounds, schema)
        for offset, design in enumerate(designs):
            violated = constraint_checker(design)
            stats.record(violated)
            if not violated:
                yield cursor + offset, design
                yielded += 1
                if yielded >= target:
                    return
        cursor += n

"""Power series described by a closed language of coefficient rules.

A series is a dimension plus a rule assigning every multi-index a complex
coefficient.  The rule language is deliberately closed (five kinds: explicit
tables, the full geometric series, geometric series along a lattice ray,
support-weighted index families, and index-wise sums) so that series
specifications serialize to JSON and command-line runs reproduce exactly.

Coefficient magnitudes enter the geometry only through log|c_J| / |J|, so
every rule reports that quantity directly wherever a closed form exists:
exp(-|J| h) underflows to zero near |J| ~ 700/h, while -h is exact at every
degree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from math import fsum, inf, log

from .multiindex import (
    MultiIndex,
    SimplexDirection,
    enumerate_degree,
    nearest_index_of_degree,
)

__all__ = [
    "CoefficientRule",
    "DimensionMismatch",
    "ExplicitTable",
    "FullGeometric",
    "RayGeometric",
    "SeriesSpec",
    "SumRule",
    "SupportWeighted",
]

_DISTINCT_TOL = 1e-10


class DimensionMismatch(ValueError):
    """Index or component dimension does not match the series dimension."""


def _as_multiindex(value) -> MultiIndex:
    return value if isinstance(value, MultiIndex) else MultiIndex(tuple(value))


def _as_direction(value) -> SimplexDirection:
    return value if isinstance(value, SimplexDirection) else SimplexDirection(tuple(value))


def _complex_to_json(c: complex) -> list[float]:
    return [c.real, c.imag]


def _complex_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    re, im = value
    return complex(re, im)


class CoefficientRule:
    """Total assignment of a complex coefficient to every multi-index."""

    kind = "abstract"

    def check_dimension(self, dimension: int) -> None:
        raise NotImplementedError

    def coefficient(self, index: MultiIndex) -> complex:
        raise NotImplementedError

    def supported_indices(self, dimension: int, degree: int):
        """Indices of the given degree where the coefficient may be nonzero."""
        raise NotImplementedError

    def log_abs_normalized(self, index: MultiIndex) -> float:
        """log|c_J| / |J|; -inf for a vanishing coefficient."""
        mag = abs(self.coefficient(index))
        if mag == 0.0:
            return -inf
        if math.isinf(mag):
            return inf
        return log(mag) / index.degree

    def to_json(self) -> dict:
        raise NotImplementedError


class FullGeometric(CoefficientRule):
    """c_J = 1 for every J: the standard N-variable geometric series."""

    kind = "full_geometric"

    def check_dimension(self, dimension: int) -> None:
        pass

    def coefficient(self, index: MultiIndex) -> complex:
        return 1.0 + 0.0j

    def supported_indices(self, dimension: int, degree: int):
        return enumerate_degree(dimension, degree)

    def log_abs_normalized(self, index: MultiIndex) -> float:
        return 0.0

    def to_json(self) -> dict:
        return {"kind": self.kind}


class RayGeometric(CoefficientRule):
    """c_{k J0} = ratio**k for k >= 1 along a fixed nonzero ray, zero elsewhere."""

    kind = "ray_geometric"

    def __init__(self, direction, ratio):
        direction = _as_multiindex(direction)
        if direction.degree == 0:
            raise ValueError("ray direction must be a nonzero multi-index")
        self.direction = direction
        self.ratio = complex(ratio)

    def check_dimension(self, dimension: int) -> None:
        if self.direction.dimension != dimension:
            raise DimensionMismatch(
                f"ray direction has dimension {self.direction.dimension}, series has {dimension}"
            )

    def _multiple(self, index: MultiIndex):
        """k >= 1 with index == k * direction, else None."""
        k = None
        for e, b in zip(index.entries, self.direction.entries):
            if b == 0:
                if e != 0:
                    return None
            else:
                q, r = divmod(e, b)
                if r:
                    return None
                if k is None:
                    k = q
                elif q != k:
                    return None
        return k if k is not None and k >= 1 else None

    def coefficient(self, index: MultiIndex) -> complex:
        k = self._multiple(index)
        if k is None:
            return 0.0j
        try:
            return self.ratio**k
        except OverflowError:
            return complex(inf, 0.0)

    def log_abs_normalized(self, index: MultiIndex) -> float:
        if self._multiple(index) is None:
            return -inf
        mag = abs(self.ratio)
        if mag == 0.0:
            return -inf
        # log|ratio**k| / (k |J0|) collapses to a degree-free constant
        return log(mag) / self.direction.degree

    def supported_indices(self, dimension: int, degree: int):
        self.check_dimension(dimension)
        q, r = divmod(degree, self.direction.degree)
        if r or q < 1:
            return ()
        return (self.direction.scaled(q),)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "direction": list(self.direction.entries),
            "ratio": _complex_to_json(self.ratio),
        }


class ExplicitTable(CoefficientRule):
    """Finite table of coefficients; everything absent is zero."""

    kind = "explicit_table"

    def __init__(self, table):
        items: dict[MultiIndex, complex] = {}
        dim = None
        for j, c in dict(table).items():
            j = _as_multiindex(j)
            if dim is None:
                dim = j.dimension
            elif j.dimension != dim:
                raise DimensionMismatch("table indices have mixed dimensions")
            items[j] = complex(c)
        self.table = items
        self._dimension = dim
        by_degree: dict[int, list[MultiIndex]] = {}
        for j in items:
            by_degree.setdefault(j.degree, []).append(j)
        self._by_degree = {k: tuple(sorted(v)) for k, v in by_degree.items()}

    def check_dimension(self, dimension: int) -> None:
        if self._dimension is not None and self._dimension != dimension:
            raise DimensionMismatch(
                f"table indices have dimension {self._dimension}, series has {dimension}"
            )

    def coefficient(self, index: MultiIndex) -> complex:
        return self.table.get(index, 0.0j)

    def supported_indices(self, dimension: int, degree: int):
        return self._by_degree.get(degree, ())

    def to_json(self) -> dict:
        items = sorted(self.table.items())
        return {
            "kind": self.kind,
            "indices": [list(j.entries) for j, _ in items],
            "values": [_complex_to_json(c) for _, c in items],
        }


class SupportWeighted(CoefficientRule):
    """Coefficients exp(-|J| h_n) on a doubly-indexed family of lattice points.

    Row n tracks the direction alpha_n with weight h_n.  Slot (n, k) lives at
    degree base + (n-1) stride + (k-1) M stride, so every slot owns a unique
    degree and the family members are distinct by construction; the slot index
    is the nearest degree-d lattice direction to alpha_n.  Normalized log
    magnitudes are reported as -h_n exactly, never through exp.
    """

    kind = "support_weighted"

    def __init__(self, directions, values, per_row: int, base: int = 8, stride: int = 1):
        directions = tuple(_as_direction(d) for d in directions)
        values = tuple(float(v) for v in values)
        if not directions:
            raise ValueError("support-weighted rule needs at least one direction")
        if len(directions) != len(values):
            raise ValueError("directions and values must have equal length")
        dim = directions[0].dimension
        for d in directions:
            if d.dimension != dim:
                raise DimensionMismatch("support directions have mixed dimensions")
        for i in range(len(directions)):
            for j in range(i):
                if directions[i].l1_distance(directions[j]) <= _DISTINCT_TOL:
                    raise ValueError("support directions must be pairwise distinct")
        for v in values:
            if not math.isfinite(v):
                raise ValueError("support weights must be finite")
        if per_row < 1 or base < 1 or stride < 1:
            raise ValueError("per_row, base and stride must be >= 1")
        self.directions = directions
        self.values = values
        self.per_row = per_row
        self.base = base
        self.stride = stride
        self._index_cache: dict[int, MultiIndex] = {}

    @property
    def rows(self) -> int:
        return len(self.directions)

    def degree_of(self, row: int, slot: int) -> int:
        """Degree of slot (row, slot), both 1-based."""
        m = self.rows
        return self.base + (row - 1) * self.stride + (slot - 1) * m * self.stride

    def slot_of_degree(self, degree: int):
        """(row, slot) owning this degree, 1-based, or None."""
        t = degree - self.base
        if t < 0 or t % self.stride:
            return None
        u = t // self.stride
        m = self.rows
        row, slot = u % m + 1, u // m + 1
        if slot > self.per_row:
            return None
        return row, slot

    def index_at(self, row: int, slot: int) -> MultiIndex:
        d = self.degree_of(row, slot)
        cached = self._index_cache.get(d)
        if cached is None:
            cached = nearest_index_of_degree(self.directions[row - 1], d)
            self._index_cache[d] = cached
        return cached

    def family_indices(self):
        """All (row, slot, index) triples in (slot, row) order."""
        for slot in range(1, self.per_row + 1):
            for row in range(1, self.rows + 1):
                yield row, slot, self.index_at(row, slot)

    def row(self, row: int) -> "SupportWeighted":
        """Single row as its own rule; degrees are preserved exactly."""
        if not 1 <= row <= self.rows:
            raise ValueError(f"row must be in 1..{self.rows}")
        return SupportWeighted(
            (self.directions[row - 1],),
            (self.values[row - 1],),
            per_row=self.per_row,
            base=self.base + (row - 1) * self.stride,
            stride=self.rows * self.stride,
        )

    def check_dimension(self, dimension: int) -> None:
        if self.directions[0].dimension != dimension:
            raise DimensionMismatch(
                f"support directions have dimension {self.directions[0].dimension}, "
                f"series has {dimension}"
            )

    def coefficient(self, index: MultiIndex) -> complex:
        slot = self.slot_of_degree(index.degree)
        if slot is None or self.index_at(*slot) != index:
            return 0.0j
        try:
            return complex(math.exp(-index.degree * self.values[slot[0] - 1]))
        except OverflowError:
            return complex(inf, 0.0)

    def log_abs_normalized(self, index: MultiIndex) -> float:
        slot = self.slot_of_degree(index.degree)
        if slot is None or self.index_at(*slot) != index:
            return -inf
        return -self.values[slot[0] - 1]

    def supported_indices(self, dimension: int, degree: int):
        self.check_dimension(dimension)
        slot = self.slot_of_degree(degree)
        if slot is None:
            return ()
        return (self.index_at(*slot),)

    def to_json(self) -> dict:
        dirs = [list(d.coords) for d in self.directions]
        return {
            "kind": self.kind,
            "support": {"directions": dirs, "values": list(self.values)},
            "family": {
                "base": self.base,
                "stride": self.stride,
                "per_row": self.per_row,
                "directions": dirs,
            },
        }


class SumRule(CoefficientRule):
    """Index-wise sum of member rules; like terms combine by addition."""

    kind = "sum"

    def __init__(self, members):
        members = tuple(members)
        if not members:
            raise ValueError("sum rule needs at least one member")
        for m in members:
            if not isinstance(m, CoefficientRule):
                raise TypeError(f"sum members must be coefficient rules, got {m!r}")
        self.members = members

    def check_dimension(self, dimension: int) -> None:
        for m in self.members:
            m.check_dimension(dimension)

    def coefficient(self, index: MultiIndex) -> complex:
        return sum((m.coefficient(index) for m in self.members), 0.0j)

    def supported_indices(self, dimension: int, degree: int):
        seen: set[MultiIndex] = set()
        for m in self.members:
            seen.update(m.supported_indices(dimension, degree))
        return tuple(sorted(seen))

    def to_json(self) -> dict:
        return {"kind": self.kind, "members": [m.to_json() for m in self.members]}


def _rule_from_json(data: dict) -> CoefficientRule:
    kind = data.get("kind")
    if kind == FullGeometric.kind:
        return FullGeometric()
    if kind == RayGeometric.kind:
        return RayGeometric(data["direction"], _complex_from_json(data["ratio"]))
    if kind == ExplicitTable.kind:
        indices = data["indices"]
        values = data["values"]
        if len(indices) != len(values):
            raise ValueError("explicit table indices and values differ in length")
        return ExplicitTable(
            {tuple(j): _complex_from_json(c) for j, c in zip(indices, values)}
        )
    if kind == SupportWeighted.kind:
        support = data["support"]
        family = data["family"]
        fam_dirs = family.get("directions")
        if fam_dirs is not None and fam_dirs != support["directions"]:
            raise ValueError("support and family directions disagree")
        return SupportWeighted(
            support["directions"],
            support["values"],
            per_row=family["per_row"],
            base=family.get("base", 8),
            stride=family.get("stride", 1),
        )
    if kind == SumRule.kind:
        return SumRule([_rule_from_json(m) for m in data["members"]])
    raise ValueError(f"unknown coefficient rule kind: {kind!r}")


def _power(point, index: MultiIndex) -> float:
    try:
        p = 1.0
        for base, e in zip(point, index.entries):
            if e:
                p *= base**e
        return p
    except OverflowError:
        return inf


@dataclass(frozen=True, eq=False)
class SeriesSpec:
    """Dimension, coefficient rule, and a free-text label."""

    dimension: int
    rule: CoefficientRule
    label: str = ""

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("series dimension must be >= 1")
        self.rule.check_dimension(self.dimension)

    def _check_index(self, index: MultiIndex) -> MultiIndex:
        index = _as_multiindex(index)
        if index.dimension != self.dimension:
            raise DimensionMismatch(
                f"index has dimension {index.dimension}, series has {self.dimension}"
            )
        return index

    def _check_point(self, point, positive=False) -> tuple[float, ...]:
        point = tuple(float(x) for x in point)
        if len(point) != self.dimension:
            raise DimensionMismatch(
                f"point has dimension {len(point)}, series has {self.dimension}"
            )
        for x in point:
            if positive and not x > 0.0:
                raise ValueError("point coordinates must be > 0")
            if not positive and x < 0.0:
                raise ValueError("point coordinates must be >= 0")
        return point

    @property
    def zero_index(self) -> MultiIndex:
        return MultiIndex((0,) * self.dimension)

    def constant_term(self) -> complex:
        return self.rule.coefficient(self.zero_index)

    def coefficient(self, index) -> complex:
        return self.rule.coefficient(self._check_index(index))

    def log_abs_coeff_normalized(self, index) -> float:
        index = self._check_index(index)
        if index.degree < 1:
            raise ValueError("normalized log magnitude needs degree >= 1")
        return self.rule.log_abs_normalized(index)

    def supported_indices(self, degree: int):
        return self.rule.supported_indices(self.dimension, degree)

    def partial_sum_abs(self, point, max_degree: int) -> float:
        """sum of |c_J| r^J over 0 <= |J| <= max_degree; +inf on overflow.

        Accumulated with exact summation, so the value depends only on the
        multiset of terms, not on enumeration order.
        """
        r = self._check_point(point)
        terms = [abs(self.constant_term())]
        for k in range(1, max_degree + 1):
            for j in self.supported_indices(k):
                mag = abs(self.rule.coefficient(j))
                if mag == 0.0:
                    continue
                t = mag * _power(r, j)
                if math.isinf(t):
                    return inf
                terms.append(t)
        return fsum(terms)

    def slice_coefficients(self, point, max_degree: int) -> list[complex]:
        """a_k = sum of c_J r^J over |J| = k, for k = 0..max_degree.

        These are the coefficients of the one-variable series obtained by
        restricting to the ray through r and combining like powers.
        """
        r = self._check_point(point, positive=True)
        out = [self.constant_term()]
        for k in range(1, max_degree + 1):
            total = 0.0j
            for j in self.supported_indices(k):
                total += self.rule.coefficient(j) * _power(r, j)
            out.append(total)
        return out

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "label": self.label,
            "rule": self.rule.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SeriesSpec":
        return cls(
            dimension=int(data["dimension"]),
            rule=_rule_from_json(data["rule"]),
            label=str(data.get("label", "")),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "SeriesSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

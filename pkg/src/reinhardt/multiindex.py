"""Multi-index arithmetic on the exponent lattice of N-variable power series.

A multi-index is a point of the non-negative integer lattice; its degree is
the l1 sum of the entries.  Nonzero indices project radially onto the
probability simplex (the non-negative face of the l1 unit sphere), and the
projections of degree-k indices form the rational grid with denominator k.
This module provides the projection, degree-ordered enumeration of the
lattice, and the inverse problem of finding the degree-k index whose
projection best approximates a prescribed simplex direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

__all__ = [
    "MultiIndex",
    "SimplexDirection",
    "ZeroIndexNotProjectable",
    "degree_count",
    "enumerate_degree",
    "nearest_index_of_degree",
    "project",
    "uniform_directions_2d",
]

_INT64_MAX = 2**63 - 1
_SIMPLEX_SUM_TOL = 1e-12


class ZeroIndexNotProjectable(ValueError):
    """Raised when the zero multi-index is radially projected."""


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Lattice exponent J with cached l1 degree |J|.

    Ordering is lexicographic on the entries, which is the tie-breaking
    order used throughout the library.
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("multi-index needs at least one entry")
        for e in self.entries:
            if isinstance(e, bool) or not isinstance(e, int):
                raise TypeError(f"multi-index entries must be integers, got {e!r}")
            if e < 0:
                raise ValueError(f"multi-index entries must be non-negative, got {e}")
            if e > _INT64_MAX:
                raise OverflowError("multi-index entry exceeds the 64-bit range")
        if sum(self.entries) > _INT64_MAX:
            raise OverflowError("multi-index degree exceeds the 64-bit range")

    @cached_property
    def degree(self) -> int:
        return sum(self.entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def scaled(self, m: int) -> "MultiIndex":
        """Return m*J; overflow past 64 bits is a hard error."""
        if m < 0:
            raise ValueError("scale factor must be non-negative")
        return MultiIndex(tuple(m * e for e in self.entries))

    def __repr__(self):
        return f"MultiIndex({self.entries!r})"


@dataclass(frozen=True)
class SimplexDirection:
    """Point of the probability simplex: non-negative coordinates summing to 1."""

    coords: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if not self.coords:
            raise ValueError("direction needs at least one coordinate")
        for c in self.coords:
            if not math.isfinite(c) or c < 0.0:
                raise ValueError(f"simplex coordinates must be finite and >= 0, got {c}")
        if abs(math.fsum(self.coords) - 1.0) > _SIMPLEX_SUM_TOL:
            raise ValueError(f"simplex coordinates must sum to 1, got {self.coords}")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def l1_distance(self, other: "SimplexDirection") -> float:
        if len(self.coords) != len(other.coords):
            raise ValueError("dimension mismatch between simplex directions")
        return math.fsum(abs(a - b) for a, b in zip(self.coords, other.coords))

    def __repr__(self):
        return f"SimplexDirection({self.coords!r})"


@lru_cache(maxsize=None)
def project(index: MultiIndex) -> SimplexDirection:
    """Radial projection J / |J| onto the probability simplex.

    The result coordinates are the exact rationals entry/degree rounded once
    to double precision, so project(m*J) == project(J) holds exactly.
    """
    d = index.degree
    if d == 0:
        raise ZeroIndexNotProjectable("the zero multi-index has no radial projection")
    return SimplexDirection(tuple(e / d for e in index.entries))


def degree_count(dimension: int, degree: int) -> int:
    """Number of multi-indices of the given dimension and exact degree."""
    return math.comb(degree + dimension - 1, dimension - 1)


@lru_cache(maxsize=None)
def enumerate_degree(dimension: int, degree: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of exact degree, in lexicographic order."""
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    if degree < 0:
        raise ValueError("degree must be >= 0")
    out: list[MultiIndex] = []

    def emit(prefix: tuple[int, ...], remaining: int):
        if len(prefix) == dimension - 1:
            out.append(MultiIndex(prefix + (remaining,)))
            return
        for v in range(remaining + 1):
            emit(prefix + (v,), remaining - v)

    emit((), degree)
    return tuple(out)


def nearest_index_of_degree(alpha: SimplexDirection, degree: int) -> MultiIndex:
    """Degree-k index J minimizing the l1 distance |J/k - alpha|.

    Largest-remainder apportionment of k units: floor the targets k*alpha_i
    and hand the leftover units to the largest fractional parts.  Any
    leftover assignment among tied fractional parts is a distance tie; units
    then go to the latest coordinates, which yields the lexicographically
    smallest minimizer.  The result satisfies |J/k - alpha|_l1 < N/k.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    n = alpha.dimension
    targets = [degree * c for c in alpha.coords]
    floors = [math.floor(t) for t in targets]
    fracs = [t - f for t, f in zip(targets, floors)]
    leftover = degree - sum(floors)
    leftover = max(0, min(leftover, n))
    if leftover:
        order = sorted(range(n), key=lambda i: (-fracs[i], -i))
        for i in order[:leftover]:
            floors[i] += 1
    return MultiIndex(tuple(floors))


def uniform_directions_2d(count: int) -> list[SimplexDirection]:
    """count equally spaced directions on the 2-dimensional simplex edge."""
    if count < 2:
        raise ValueError("need at least two directions")
    step = count - 1
    return [SimplexDirection((i / step, 1.0 - i / step)) for i in range(count)]

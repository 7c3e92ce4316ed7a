"""Constructive side: index families, extremal sequences, and realizing series.

Three builders live here.  build_family lays out a doubly-indexed family of
distinct lattice points whose row-n projections converge to a prescribed
direction; degree interleaving (one global degree per slot) makes
distinctness automatic and preserves the 2N/degree convergence rate.
extremal_sequence picks, per doubling degree band, the supported index near a
direction with the largest normalized log magnitude, realizing the direction
functional with a concrete sequence.  series_for_domain assembles the
support-weighted series whose domain of convergence reproduces a prescribed
half-space intersection: row n carries coefficients exp(-|J| h(alpha_n)), so
each row alone is an elementary series for the supporting half-space at
alpha_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import inf

from .convex import HDomain, support_value
from .multiindex import MultiIndex, SimplexDirection, nearest_index_of_degree, project
from .series import SeriesSpec, SupportWeighted

__all__ = [
    "EmptyWindow",
    "IndexFamily",
    "InfiniteSupport",
    "band_radius",
    "build_family",
    "extremal_sequence",
    "series_for_domain",
]

BASE_DEGREE = 8  # keeps the starting projection error 2N/8 moderate
_DISTINCT_TOL = 1e-10


class EmptyWindow(ValueError):
    """No degree band holds a supported index near the direction."""


class InfiniteSupport(ValueError):
    """A prescribed direction has infinite support value on the domain."""


def _check_directions(directions) -> tuple[SimplexDirection, ...]:
    dirs = tuple(
        d if isinstance(d, SimplexDirection) else SimplexDirection(tuple(d))
        for d in directions
    )
    if not dirs:
        raise ValueError("need at least one direction")
    dim = dirs[0].dimension
    for d in dirs:
        if d.dimension != dim:
            raise ValueError("directions have mixed dimensions")
    for i in range(len(dirs)):
        for j in range(i):
            if dirs[i].l1_distance(dirs[j]) <= _DISTINCT_TOL:
                raise ValueError("directions must be pairwise distinct")
    return dirs


@dataclass(frozen=True)
class IndexFamily:
    """Rows of distinct lattice points; row n projects toward direction n."""

    directions: tuple[SimplexDirection, ...]
    rows: tuple[tuple[MultiIndex, ...], ...]

    def __post_init__(self):
        if len(self.directions) != len(self.rows):
            raise ValueError("one row per direction required")

    def all_indices(self):
        for row in self.rows:
            yield from row


def build_family(directions, per_row: int, base: int = BASE_DEGREE, stride: int = 1) -> IndexFamily:
    """Doubly-indexed family: row n, slot k at degree base + (n-1+M(k-1)) stride.

    Every slot owns a unique degree, so all indices are distinct without any
    discard step; the slot index is the nearest lattice direction of that
    degree, hence |J/|J| - alpha_n|_l1 < 2N/|J| along each row.
    """
    dirs = _check_directions(directions)
    if per_row < 1:
        raise ValueError("per_row must be >= 1")
    m = len(dirs)
    rows = []
    for n in range(1, m + 1):
        row = []
        for k in range(1, per_row + 1):
            degree = base + (n - 1) * stride + (k - 1) * m * stride
            row.append(nearest_index_of_degree(dirs[n - 1], degree))
        rows.append(tuple(row))
    return IndexFamily(dirs, tuple(rows))


def band_radius(dimension: int, band: int) -> float:
    """Window radius per degree band: the nearest-index rounding bound 2N/b,
    floored at 0.02 so high bands keep a usable neighborhood."""
    return max(0.02, 2.0 * dimension / band)


def extremal_sequence(series: SeriesSpec, alpha, max_degree: int) -> list[MultiIndex]:
    """Per band b = 8, 16, 32, ... <= K, the best supported index near alpha.

    "Best" maximizes log|c_J|/|J| over supported indices of degree b within
    l1 distance band_radius of alpha; ties prefer the projection closest to
    alpha and then the lexicographically smallest index, so an all-equal
    coefficient rule pins the sequence to the ray through alpha.  Bands with
    no candidate are skipped; if every band is empty the direction is not
    realized and EmptyWindow is raised.  The normalized log magnitudes of the
    returned indices approach the negative of the direction functional at the
    truncation scale.
    """
    if max_degree < 8:
        raise ValueError("max_degree must be >= 8")
    alpha = alpha if isinstance(alpha, SimplexDirection) else SimplexDirection(tuple(alpha))
    if alpha.dimension != series.dimension:
        raise ValueError("direction dimension does not match the series")
    out: list[MultiIndex] = []
    band = BASE_DEGREE
    while band <= max_degree:
        radius = band_radius(series.dimension, band)
        best = None  # (-value, distance, index)
        for j in series.supported_indices(band):
            v = series.log_abs_coeff_normalized(j)
            if v == -inf:
                continue
            dist = project(j).l1_distance(alpha)
            if dist > radius:
                continue
            key = (-v, dist, j)
            if best is None or key < best:
                best = key
        if best is not None:
            out.append(best[2])
        band *= 2
    if not out:
        raise EmptyWindow(f"no supported index near {alpha.coords} in any degree band")
    return out


def series_for_domain(
    domain: HDomain, directions, per_row: int, base: int = BASE_DEGREE, stride: int = 1
) -> SeriesSpec:
    """Support-weighted series whose convergence domain realizes the H-domain.

    Uses the family of build_family over the prescribed directions with
    coefficients exp(-|J| h(alpha_n)) on row n, h the support function of the
    region.  Each row alone is elementary with half-space
    {<alpha_n, s> - h(alpha_n) < 0}; the whole sum reproduces the region when
    the directions sample its support geometry densely enough.

    Raises EmptyDomain for an infeasible region and InfiniteSupport when a
    prescribed direction lies outside the effective domain of h.
    """
    dirs = _check_directions(directions)
    if dirs[0].dimension != domain.dimension:
        raise ValueError("direction dimension does not match the domain")
    values = []
    for alpha in dirs:
        h = support_value(domain, alpha)
        if math.isinf(h):
            raise InfiniteSupport(
                f"direction {alpha.coords} has infinite support value; "
                "prescribe directions from the effective domain only"
            )
        values.append(h)
    rule = SupportWeighted(dirs, values, per_row=per_row, base=base, stride=stride)
    return SeriesSpec(
        domain.dimension,
        rule,
        label=f"realizing series: {len(dirs)} directions, {per_row} per row",
    )

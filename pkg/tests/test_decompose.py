import math

import pytest

from reinhardt import (
    ExplicitTable,
    MultiIndex,
    NeedTwoDirections,
    SeriesSpec,
    SimplexDirection,
    SupportsOverlap,
    convex_closure_value,
    decompose_elementary,
    decompose_simple,
    estimate_domain,
    support_value,
    sum_domain_check,
    uniform_directions_2d,
)
from reinhardt.convex import SampledFunction
from conftest import LN2, coeff_table, grid2

INF = math.inf


def merge_tables(series_list, max_degree):
    out = {}
    for s in series_list:
        for j, c in coeff_table(s, max_degree).items():
            out[j] = out.get(j, 0.0j) + c
    return out


def test_two_row_split_of_the_geometric_series(full_geom):
    dirs = [SimplexDirection((1.0, 0.0)), SimplexDirection((0.0, 1.0))]
    dec = decompose_elementary(full_geom, dirs, 16)
    for j, row in dec.assignment.items():
        want = 0 if j.entries[0] >= j.entries[1] else 1  # ties to the first row
        assert row == want
    assert dec.parts[0].level == 0.0
    assert dec.parts[1].level == 0.0
    for part in dec.parts:
        assert part.halfspace is not None
        assert part.halfspace.offset == 0.0


def test_diagonal_row_carries_the_spike(f_zero):
    dirs = uniform_directions_2d(3)  # (0,1), (1/2,1/2), (1,0)
    dec = decompose_elementary(f_zero, dirs, 64)
    levels = [p.level for p in dec.parts]
    mid = next(i for i, d in enumerate(dirs) if d.coords == (0.5, 0.5))
    # window peak sits at the lowest window degree of the diagonal
    peak = max(math.log(1 + 2**j) / (2 * j) for j in range(16, 33))
    assert levels[mid] == pytest.approx(peak, abs=1e-12)
    assert levels[mid] == pytest.approx(LN2 / 2, abs=0.02)
    for i, lev in enumerate(levels):
        if i != mid:
            assert lev == 0.0


def test_single_direction_is_the_whole_tail(f_zero):
    dec = decompose_elementary(f_zero, [SimplexDirection((0.5, 0.5))], 32)
    routed = coeff_table(dec.parts[0].series, 32)
    original = coeff_table(f_zero, 32)
    assert routed == original
    assert dec.constant_part == f_zero.constant_term()


def test_partition_is_exact_bitwise(f_zero):
    dirs = uniform_directions_2d(11)
    dec = decompose_elementary(f_zero, dirs, 64)
    routed = merge_tables([p.series for p in dec.parts], 64)
    original = coeff_table(f_zero, 64)
    assert routed == original  # identical keys, bitwise-identical values
    partial_parts = math.fsum(
        p.series.partial_sum_abs((0.7, 0.6), 64) for p in dec.parts
    )
    whole = f_zero.partial_sum_abs((0.7, 0.6), 64)
    constant = abs(f_zero.constant_term())
    # routing never alters a coefficient: exact to the last bit
    assert math.fsum([partial_parts, constant, -whole]) == pytest.approx(0.0, abs=0.0)


def test_absorb_constant_flag(f_zero):
    dec = decompose_elementary(f_zero, uniform_directions_2d(3), 16, absorb_constant=True)
    assert dec.constant_part == 0.0
    zero = MultiIndex((0, 0))
    assert dec.parts[0].series.coefficient(zero) == f_zero.constant_term()


def test_row_halfspaces_contain_supporting_halfspaces(f_zero, wedge_domain):
    dirs = uniform_directions_2d(11)
    dec = decompose_elementary(f_zero, dirs, 64)
    for part in dec.parts:
        h = support_value(wedge_domain, part.direction)
        assert part.level <= -h + 0.02


def test_empty_rows_keep_infinite_level():
    diag_only = SeriesSpec(2, ExplicitTable({(20, 20): 1.0, (28, 28): 2.0}))
    dirs = uniform_directions_2d(3)
    dec = decompose_elementary(diag_only, dirs, 64)
    for i, part in enumerate(dec.parts):
        if dirs[i].coords == (0.5, 0.5):
            assert math.isfinite(part.level)
            assert part.halfspace is not None
        else:
            assert part.level == INF
            assert part.halfspace is None


def test_decompose_simple_telescoping(full_geom, third_quadrant):
    dirs = uniform_directions_2d(5)
    dec = decompose_simple(full_geom, third_quadrant, dirs, 64)
    lhs = merge_tables([p.series for p in dec.parts], 64)
    rhs = merge_tables(list(dec.g_rows), 64)
    m = len(dirs)
    for j, c in coeff_table(dec.f_rows[-1], 64).items():
        rhs[j] = rhs.get(j, 0.0j) + c / m
    assert set(lhs) == set(rhs)
    for j in lhs:
        a, b = lhs[j], rhs[j]
        assert abs(a - b) <= 1e-12 * max(abs(a), abs(b)), j


def test_decompose_simple_wedges(full_geom, third_quadrant):
    dirs = uniform_directions_2d(2)  # (0,1), (1,0)
    dec = decompose_simple(full_geom, third_quadrant, dirs, 16)
    assert dec.parts[0].wedge is None
    wedge = dec.parts[1].wedge
    assert wedge is not None
    normals = {wedge[0].normal.coords, wedge[1].normal.coords}
    assert normals == {(0.0, 1.0), (1.0, 0.0)}
    assert wedge[0].offset == 0.0 and wedge[1].offset == 0.0
    with pytest.raises(NeedTwoDirections):
        decompose_simple(full_geom, third_quadrant, [SimplexDirection((0.5, 0.5))], 16)


def test_wedge_intersection_equals_domain(full_geom, third_quadrant):
    dirs = uniform_directions_2d(5)
    dec = decompose_simple(full_geom, third_quadrant, dirs, 32)
    for p in grid2(-1.0, 1.0, 21):
        in_domain = third_quadrant.evaluate(p) < 0
        in_wedges = all(
            h.value(p) < 0 for part in dec.parts if part.wedge for h in part.wedge
        )
        assert in_domain == in_wedges


def test_row_levels_feed_the_support_function(f_zero):
    # the decomposition's levels, read as direction samples, reproduce the
    # support function of the region estimated independently from the series
    dirs = uniform_directions_2d(21)
    dec = decompose_elementary(f_zero, dirs, 64)
    estimated = estimate_domain(f_zero, dirs, 64)
    samples = SampledFunction(
        tuple(p.direction for p in dec.parts),
        tuple(-p.level for p in dec.parts),
    )
    for d in dirs:
        envelope = convex_closure_value(samples, d)
        href = support_value(estimated, d)
        assert abs(envelope - href) <= 0.05


def test_sum_domain_check_finite_family(full_geom):
    dirs = [SimplexDirection((1.0, 0.0)), SimplexDirection((0.0, 1.0))]
    dec = decompose_elementary(full_geom, dirs, 16)
    report = sum_domain_check(
        [p.series for p in dec.parts], 16, grid2(-1.0, 1.0, 11)
    )
    assert report.agreement == 1.0
    assert not report.containment_only
    assert report.decisive > 0
    assert report.disagreements == ()


def test_sum_domain_check_flags_vacuous_truncations(full_geom):
    # monomial parts of the degree-4 truncated geometric series: each part
    # converges everywhere, and the tail window cannot see the full sum
    parts = []
    for k in range(1, 5):
        for j in full_geom.supported_indices(k):
            parts.append(SeriesSpec(2, ExplicitTable({j: 1.0})))
    report = sum_domain_check(parts, 64, grid2(-1.0, 1.0, 5))
    assert report.containment_only
    assert report.agreement == 1.0


def test_sum_domain_check_overlap_witness(full_geom):
    a = SeriesSpec(2, ExplicitTable({(1, 1): 1.0, (2, 0): 1.0}))
    b = SeriesSpec(2, ExplicitTable({(1, 1): 2.0}))
    with pytest.raises(SupportsOverlap) as err:
        sum_domain_check([a, b], 16, [])
    assert err.value.index.entries == (1, 1)


def test_estimate_domain_recovers_the_wedge(f_zero, wedge_domain):
    estimated = estimate_domain(f_zero, uniform_directions_2d(21), 64)
    for t in [i / 20 for i in range(21)]:
        alpha = SimplexDirection((t, 1 - t))
        assert abs(
            support_value(estimated, alpha) - support_value(wedge_domain, alpha)
        ) <= 0.05

"""Jets, the slope-indexed hyperplane family, and per-line extraction."""

import itertools
from fractions import Fraction

import pytest

from planarize.jetplan import (
    DegeneratePoint,
    ExactMapSource,
    GridMapSource,
    OrderMismatch,
    hyperplane_for_line,
    jet_of,
    nondegenerate_at,
    omega,
    read_csv_grid,
    write_csv_grid,
)
from planarize.poly import HPoly, reduce_map, variables
from planarize.projcore import PPoint, hyperplane_through
from planarize.seeding import stable_rng

X0, X1, X2 = variables(3)

PARABOLOID = reduce_map([X0 * X0, X0 * X1, X0 * X2, X1 * X1 + X2 * X2])  # (u, v, u^2+v^2)
PRODUCT = reduce_map([X0 * X0, X0 * X1, X0 * X2, X1 * X2])  # (u, v, uv)
LINEAR = reduce_map([X0, X1, X2, X1 + 2 * X2])  # an affine-linear embedding


def F(x):
    return Fraction(x)


# -- jets -----------------------------------------------------------------------


def test_jet_of_paraboloid_at_origin():
    jet = jet_of(ExactMapSource(PARABOLOID), (0, 0), 2)
    assert jet.chart == 0
    expect = {
        (0, 0): (0, 0, 0),
        (1, 0): (1, 0, 0),
        (0, 1): (0, 1, 0),
        (2, 0): (0, 0, 1),
        (1, 1): (0, 0, 0),
        (0, 2): (0, 0, 1),
    }
    for k, v in expect.items():
        assert jet.coeffs[k] == tuple(F(c) for c in v)


def test_jet_of_affine_linear_has_no_second_order():
    jet = jet_of(ExactMapSource(LINEAR), (F(1) / 3, F(2) / 7), 2)
    for (i, j), vec in jet.coeffs.items():
        if i + j == 2:
            assert all(c == 0 for c in vec)


def test_jet_of_product_map_at_one_one_matches_symbolic_shift():
    # (u, v, uv) shifted to (1, 1): (1+s, 1+t, 1+s+t+st)
    jet = jet_of(ExactMapSource(PRODUCT), (1, 1), 2)
    assert jet.chart == 0
    expect = {
        (0, 0): (1, 1, 1),
        (1, 0): (1, 0, 1),
        (0, 1): (0, 1, 1),
        (1, 1): (0, 0, 1),
        (2, 0): (0, 0, 0),
        (0, 2): (0, 0, 0),
    }
    for k, v in expect.items():
        assert jet.coeffs[k] == tuple(F(c) for c in v)


# -- omega ------------------------------------------------------------------------


def curve_points_on_line(ratmap, slope, ts):
    """Exact image points of the line v = slope*u through the origin."""
    pts = []
    for t in ts:
        val = ratmap.evaluate([F(1), F(t), F(slope) * F(t)])
        pts.append(PPoint.of(val))
    return pts


def test_omega_paraboloid_matches_hyperplane_through_oracle():
    om = omega(jet_of(ExactMapSource(PARABOLOID), (0, 0), 2))
    assert om.degree == 1
    for slope in (1, 2):
        value = om.evaluate(slope)
        oracle = hyperplane_through(curve_points_on_line(PARABOLOID, slope, [1, 2, 3]))
        got = PPoint.of(value)
        assert got == PPoint.of(oracle.covector)


def test_omega_of_affine_linear_is_identically_zero():
    om = omega(jet_of(ExactMapSource(LINEAR), (F(1) / 4, F(1) / 5), 2))
    assert om.is_zero


def test_omega_degree_bound_for_order_two_jets():
    rng = stable_rng(31, "omega_bound")
    for _ in range(10):
        comps = []
        monos = [e for e in itertools.product(range(3), repeat=3) if sum(e) == 2]
        for _ in range(4):
            terms = {m: Fraction(rng.randint(-5, 5)) for m in monos}
            comps.append(HPoly(3, 2, {m: c for m, c in terms.items() if c}))
        if all(c.is_zero for c in comps):
            continue
        m = reduce_map(comps)
        if m.degree != 2 or m.codim != 3:
            continue
        try:
            om = omega(jet_of(ExactMapSource(m), (F(1) / 3, F(1) / 2), 2))
        except Exception:
            continue
        assert om.degree <= 3


def test_omega_order_mismatch_rejected():
    jet = jet_of(ExactMapSource(PARABOLOID), (0, 0), 1)
    with pytest.raises(OrderMismatch):
        omega(jet)


# -- nondegeneracy ------------------------------------------------------------------


def test_nondegenerate_paraboloid_origin():
    assert nondegenerate_at(ExactMapSource(PARABOLOID), (0, 0))


def test_degenerate_affine_linear_everywhere():
    src = ExactMapSource(LINEAR)
    for a in [(0, 0), (F(1) / 2, F(1) / 3), (5, -7)]:
        assert not nondegenerate_at(src, a)


def test_degenerate_planar_image():
    flat = reduce_map([X0 * X0, X0 * X1, X0 * X2, HPoly.zero(3, 2)])  # (u, v, 0)
    assert not nondegenerate_at(ExactMapSource(flat), (F(1) / 3, F(1) / 7))


# -- hyperplane_for_line --------------------------------------------------------------


def test_hyperplane_paraboloid_slope_two():
    h = hyperplane_for_line(ExactMapSource(PARABOLOID), (0, 0), 2)
    assert h.covector == (0, 2, -1, 0)
    # containment oracle on four exact image points
    for t in (1, 2, -1, F(1) / 2):
        val = PARABOLOID.evaluate([F(1), F(t), 2 * F(t)])
        assert sum(F(c) * x for c, x in zip(h.covector, val)) == 0


def test_hyperplane_product_map_slope_one():
    h = hyperplane_for_line(ExactMapSource(PRODUCT), (0, 0), 1)
    assert PPoint.of(h.covector) == PPoint.of((0, 1, -1, 0))
    for t in (1, 3, -2, F(2) / 3):
        val = PRODUCT.evaluate([F(1), F(t), F(t)])
        assert sum(F(c) * x for c, x in zip(h.covector, val)) == 0


def test_hyperplane_vertical_line():
    h = hyperplane_for_line(ExactMapSource(PARABOLOID), (0, 0), "inf")
    for t in (1, 2, -3):
        val = PARABOLOID.evaluate([F(1), F(0), F(t)])
        assert sum(F(c) * x for c, x in zip(h.covector, val)) == 0


def test_hyperplane_requires_nondegenerate_point():
    with pytest.raises(DegeneratePoint):
        hyperplane_for_line(ExactMapSource(LINEAR), (0, 0), 1)


def test_containment_along_planarization_lines():
    # every quadratic map into RP^3 is a planarization; hyperplanes must
    # contain exactly computed image points for several base points/slopes
    rng = stable_rng(37, "containment")
    src = ExactMapSource(PARABOLOID)
    for _ in range(6):
        a = (Fraction(rng.randint(-4, 4), 3), Fraction(rng.randint(-4, 4), 5))
        slope = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        h = hyperplane_for_line(src, a, slope)
        for k in (1, 2, 3):
            t = Fraction(k, 7)
            u, v = a[0] + t, a[1] + slope * t
            val = PARABOLOID.evaluate([F(1), u, v])
            assert sum(F(c) * x for c, x in zip(h.covector, val)) == 0


# -- grid (float) mode -----------------------------------------------------------------


def build_grid(ratmap, center, h, half, chart=0):
    us = [float(center[0] + k * h) for k in range(-half, half + 1)]
    vs = [float(center[1] + k * h) for k in range(-half, half + 1)]
    values = []
    for v in vs:
        row = []
        for u in us:
            val = ratmap.evaluate([F(1), Fraction(u).limit_denominator(10**12),
                                   Fraction(v).limit_denominator(10**12)])
            row.append(tuple(float(c / val[chart]) for i, c in enumerate(val) if i != chart))
        values.append(row)
    return GridMapSource(us, vs, values, mode="float")


def test_grid_jets_match_exact_jets():
    # exact jets vs central differences on sampled grids, 10 seeded quadratics
    rng = stable_rng(41, "fd_cross")
    checked = 0
    monos = [e for e in itertools.product(range(3), repeat=3) if sum(e) == 2]
    while checked < 10:
        terms0 = {m: Fraction(rng.randint(-4, 4)) for m in monos}
        terms0[(2, 0, 0)] = Fraction(rng.randint(30, 40))  # dominate: chart 0
        comps = [HPoly(3, 2, {m: c for m, c in terms0.items() if c})]
        for _ in range(3):
            t = {m: Fraction(rng.randint(-4, 4)) for m in monos}
            comps.append(HPoly(3, 2, {m: c for m, c in t.items() if c}))
        m = reduce_map(comps)
        if m.degree != 2:
            continue
        base = (Fraction(1, 4), Fraction(1, 3))
        exact = jet_of(ExactMapSource(m), base, 2)
        if exact.chart != 0:
            continue
        grid = build_grid(m, base, Fraction(1, 1024), 3)
        approx = jet_of(grid, (grid.u_axis[3], grid.v_axis[3]), 2)
        scale = max(abs(float(x)) for vec in exact.coeffs.values() for x in vec) or 1.0
        for key in exact.coeffs:
            for a, b in zip(exact.coeffs[key], approx.coeffs[key]):
                assert abs(float(a) - b) <= 1e-5 * scale
        checked += 1


def test_grid_nondegeneracy_and_hyperplane():
    grid = build_grid(PARABOLOID, (Fraction(1, 8), Fraction(1, 16)), Fraction(1, 512), 3)
    a = (grid.u_axis[3], grid.v_axis[3])
    assert nondegenerate_at(grid, a)
    h = hyperplane_for_line(grid, a, 2)
    assert h is not None


# -- CSV ---------------------------------------------------------------------------------


def test_csv_round_trip_and_order():
    us = [0.0, 0.5, 1.0]
    vs = [0.0, 1.0]
    values = [[(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)], [(7.0, 8.0), (9.0, 10.0), (11.0, 12.0)]]
    src = GridMapSource(us, vs, values)
    text = write_csv_grid(src)
    lines = text.strip().splitlines()
    assert lines[0] == "u,v,F1,F2"
    # row-major in v then u: the u index varies fastest
    assert lines[1].startswith("0.0,0.0") and lines[2].startswith("0.5,0.0")
    back = read_csv_grid(text)
    assert back.u_axis == us and back.v_axis == vs
    assert back.node_value(1, 1) == (9.0, 10.0)


def test_hyperplane_accepts_projective_slope_pairs():
    src = ExactMapSource(PARABOLOID)
    affine = hyperplane_for_line(src, (0, 0), 2)
    pair = hyperplane_for_line(src, (0, 0), (2, 1))  # (dv, du)
    vertical = hyperplane_for_line(src, (0, 0), (1, 0))
    assert affine.covector == pair.covector
    assert vertical.covector == hyperplane_for_line(src, (0, 0), "inf").covector

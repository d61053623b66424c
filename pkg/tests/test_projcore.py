"""Exact projective linear algebra: contract examples and properties."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planarize.projcore import (
    NONE_EXISTS,
    DimensionMismatch,
    NOT_UNIQUE,
    Hyperplane,
    PLine2,
    PPoint,
    ZeroVector,
    cross,
    det,
    hyperplane_through,
    normalize,
    nullspace,
    rank,
    scalar_from_str,
    scalar_to_str,
    wedge_complement,
)

# -- independent oracle: plain rational Gaussian elimination ---------------


def gauss_nullspace(rows):
    """Textbook rational elimination, independent of the Bareiss path."""
    m = [[Fraction(c) for c in r] for r in rows]
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def is_parallel(u, v):
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if Fraction(u[i]) * Fraction(v[j]) != Fraction(u[j]) * Fraction(v[i]):
                return False
    return True


# -- normalize ---------------------------------------------------------------


def test_normalize_scale_removal():
    assert normalize([2, 4, 6]) == (1, 2, 3)


def test_normalize_sign_convention():
    assert normalize([0, 0, -3]) == (0, 0, 1)


def test_normalize_denominator_clearing():
    assert normalize([Fraction(1, 2), Fraction(1, 3), 0]) == (3, 2, 0)


def test_normalize_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        normalize([0, 0, 0])


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=5), rationals.filter(lambda c: c != 0))
def test_normalize_idempotent_and_scale_invariant(vec, c):
    if all(x == 0 for x in vec):
        return
    base = normalize(vec)
    assert normalize(base) == base
    assert normalize([c * x for x in vec]) == base


# -- wedge_complement --------------------------------------------------------


def test_wedge_standard_basis():
    assert normalize(wedge_complement([(1, 0, 0), (0, 1, 0)])) == (0, 0, 1)


def test_wedge_four_space_matches_elimination_oracle():
    vs = [(0, 0, 0, 1), (1, 0, 0, 1), (0, 0, 1, 1)]
    got = wedge_complement(vs)
    oracle = gauss_nullspace(vs)
    assert len(oracle) == 1
    assert is_parallel(got, oracle[0])
    assert normalize(got) == normalize(oracle[0]) == (0, 1, 0, 0)


def test_wedge_dependent_inputs_give_zero():
    assert wedge_complement([(1, 2, 3), (2, 4, 6)]) == (0, 0, 0)


def test_wedge_orthogonality_exact():
    vs = [(3, -1, 2, 7), (0, 5, 1, -2), (1, 1, 1, 1)]
    w = wedge_complement(vs)
    for v in vs:
        assert sum(a * b for a, b in zip(w, v)) == 0


def test_wedge_alternating_swap_flips_sign():
    vs = [(3, -1, 2, 7), (0, 5, 1, -2), (1, 1, 1, 1)]
    w1 = wedge_complement(vs)
    w2 = wedge_complement([vs[1], vs[0], vs[2]])
    assert tuple(-x for x in w1) == w2


def test_wedge_repeated_input_is_zero():
    assert wedge_complement([(1, 2, 3), (1, 2, 3)]) == (0, 0, 0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=3, max_size=3))
def test_wedge_annihilates_inputs(rows):
    w = wedge_complement(rows)
    for v in rows:
        assert sum(a * b for a, b in zip(w, v)) == 0


# -- hyperplane_through ------------------------------------------------------


def test_hyperplane_through_two_points_rp2():
    h = hyperplane_through([PPoint.of(1, 0, 0), PPoint.of(0, 1, 0)])
    assert isinstance(h, Hyperplane)
    assert h.covector == (0, 0, 1)


def test_hyperplane_through_collinear_rp3_not_unique():
    pts = [PPoint.of(1, 0, 0, 0), PPoint.of(0, 1, 0, 0), PPoint.of(1, 1, 0, 0)]
    assert hyperplane_through(pts) is NOT_UNIQUE


def test_hyperplane_through_full_span_none_exists():
    pts = [PPoint.of(1, 0, 0, 0), PPoint.of(0, 1, 0, 0), PPoint.of(0, 0, 1, 0), PPoint.of(0, 0, 0, 1)]
    assert hyperplane_through(pts) is NONE_EXISTS


def test_hyperplane_through_agrees_with_wedge():
    pts = [PPoint.of(1, 2, 3, 1), PPoint.of(0, 1, -1, 2), PPoint.of(5, 0, 1, 1)]
    h = hyperplane_through(pts)
    w = wedge_complement([p.coords for p in pts])
    assert normalize(w) == h.covector


# -- rank / nullspace / misc -------------------------------------------------


def test_rank_and_nullspace_against_oracle():
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0], [1, 3, 4, 4]]
    assert rank(rows) == 2
    ours = nullspace(rows)
    oracle = gauss_nullspace(rows)
    assert len(ours) == len(oracle) == 2
    for v in ours:
        for row in rows:
            assert sum(Fraction(a) * b for a, b in zip(row, v)) == 0


def test_det_exact():
    assert det([[1, 2], [3, 4]]) == -2
    assert det([[Fraction(1, 2), 0], [0, Fraction(2, 3)]]) == Fraction(1, 3)


def test_cross_product_join_meet():
    # the line through [1:0:0] and [0:1:0] is {x2 = 0}
    assert normalize(cross((1, 0, 0), (0, 1, 0))) == (0, 0, 1)


def test_line_contains():
    line = PLine2.of(1, 2, 3)
    assert line.contains(PPoint.of(3, 0, -1))
    assert not line.contains(PPoint.of(1, 0, 0))


def test_scalar_serialization():
    assert scalar_to_str(Fraction(3, 4)) == "3/4"
    assert scalar_to_str(Fraction(5)) == "5"
    assert scalar_from_str("3/4") == Fraction(3, 4)
    assert scalar_from_str("-7") == Fraction(-7)


def test_dimension_mismatch_errors():
    with pytest.raises(DimensionMismatch):
        wedge_complement([(1, 0, 0), (0, 1, 0), (0, 0, 1)])  # 3 vectors need length 4
    with pytest.raises(DimensionMismatch):
        Hyperplane.of(1, 0, 0).contains(PPoint.of(1, 0, 0, 0))
    with pytest.raises(DimensionMismatch):
        PLine2.of(1, 2, 3, 4)


def test_rationalize_direction_snaps_clean_ratios():
    from planarize.projcore import rationalize_direction

    vec = [0.0, 0.4458930, 0.66883956, 0.2229465]
    # entries proportional to (0, 2, 3, 1) up to float noise
    assert rationalize_direction([x * 1.0000000001 for x in vec]) == (0, 2, 3, 1)

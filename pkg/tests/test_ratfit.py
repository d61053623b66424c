"""Rational interpolation: planted recovery, sharpness, and rejection."""

from fractions import Fraction

import pytest

from planarize import variables, reduce_map
from planarize.jetplan import ExactMapSource
from planarize.projcore import nullspace
from planarize.ratfit import (
    DegreeTooLow,
    SampleSet,
    UniRat,
    fit_bi,
    fit_map,
    fit_uni,
)
from planarize.seeding import stable_rng
from planarize import univar

X0, X1, X2 = variables(3)


def F(x):
    return Fraction(x)


def random_unirat(rng, d):
    """Planted reduced rational function with max(deg p, deg q) = d."""
    while True:
        p = [Fraction(rng.randint(-9, 9)) for _ in range(d + 1)]
        q = [Fraction(rng.randint(-9, 9)) for _ in range(d + 1)]
        if rng.random() < 0.5:
            q[-1] = Fraction(0)
            p[-1] = p[-1] if p[-1] else Fraction(1)
        p, q = univar.trim(p), univar.trim(q)
        if not p or not q:
            continue
        if max(univar.degree(p), univar.degree(q)) != d:
            continue
        g = univar.gcd(p, q)
        if univar.degree(g) > 0:
            p = univar.divexact(p, g)
            q = univar.divexact(q, g)
        if max(univar.degree(p), univar.degree(q)) != d:
            continue
        lead = q[-1]
        return UniRat(tuple(c / lead for c in p), tuple(c / lead for c in q))


def sample_unirat(r, nodes):
    out = []
    skip = max(int(n) for n in nodes) + 1
    for u in nodes:
        val = r.evaluate(u)
        while val is None:  # pole: replace with the next unused integer
            u = Fraction(skip)
            skip += 1
            val = r.evaluate(u)
        out.append((Fraction(u), val))
    return out


def unirat_equal(a: UniRat, b: UniRat) -> bool:
    pn = univar.mul(list(a.num), list(b.den))
    qn = univar.mul(list(b.num), list(a.den))
    return univar.sub(pn, qn) == []


# -- fit_uni ---------------------------------------------------------------------


def test_fit_identity():
    r = fit_uni([(0, 0), (1, 1), (2, 2)], 1)
    assert list(r.num) == [0, 1] and list(r.den) == [1]


def test_fit_planted_quadratic_over_linear():
    def f(u):
        return Fraction(u * u + 1, u - 2)

    r = fit_uni([(u, f(u)) for u in (0, 1, 3, 4, 5)], 2)
    planted = UniRat((F(1), F(0), F(1)), (F(-2), F(1)))
    assert unirat_equal(r, planted)


def test_fit_cubic_at_degree_two_rejected():
    with pytest.raises(DegreeTooLow):
        fit_uni([(u, u**3) for u in range(7)], 2)


def test_planted_recovery_sweep():
    for d in (1, 2, 3):
        rng = stable_rng(d, "planted_uni")
        for _ in range(12):
            planted = random_unirat(rng, d)
            samples = sample_unirat(planted, list(range(2 * d + 1)))
            got = fit_uni(samples, d)
            assert unirat_equal(got, planted)


def test_node_count_sharpness():
    # with only 2d nodes the linearized system has nullspace dimension >= 2
    d = 2
    rng = stable_rng(9, "sharpness")
    for _ in range(5):
        rows = []
        for u in range(2 * d):
            fu = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            uu = Fraction(u)
            rows.append([uu**k for k in range(d + 1)] + [-fu * uu**k for k in range(d + 1)])
        assert len(nullspace(rows)) >= 2


def test_sample_set_rejects_duplicate_nodes():
    with pytest.raises(ValueError):
        SampleSet.of([(1, 2), (1, 3)])


# -- fit_bi ----------------------------------------------------------------------


def test_fit_bi_planted():
    def f(u, v):
        return Fraction(u + v) / Fraction(1 + u * u)

    r = fit_bi(f, 2)
    assert r.num == {(1, 0): F(1), (0, 1): F(1)}
    assert r.den == {(0, 0): F(1), (2, 0): F(1)}


def test_fit_bi_polynomial():
    r = fit_bi(lambda u, v: Fraction(u) * Fraction(v), 2)
    assert r.num == {(1, 1): F(1)}
    assert r.den == {(0, 0): F(1)}


def test_fit_bi_perturbed_table_rejected():
    def f(u, v):
        if v == -1:
            return None
        base = Fraction(u) / Fraction(1 + v)
        if (u, v) == (1, 1):
            return base + 1
        return base

    with pytest.raises(DegreeTooLow):
        fit_bi(f, 2)


def test_fit_bi_with_poles_on_lines():
    # denominator vanishes along u = v: whole-line poles never occur, but
    # node poles are replaced per line
    def f(u, v):
        den = Fraction(1 + u) if u != -1 else None
        if den is None:
            return None
        return Fraction(v) / den

    r = fit_bi(f, 2)
    assert r.num == {(0, 1): F(1)}
    assert r.den == {(0, 0): F(1), (1, 0): F(1)}


def test_fit_bi_two_routes_agree_structurally():
    # fit_bi raises if the two routes disagree; a nontrivial planted case
    def f(u, v):
        return Fraction(u * v - 3) / Fraction(2 + u + v * v)

    r = fit_bi(f, 2)
    for (u, v) in [(F(1), F(2)), (F(3), F(5)), (F(1) / 2, F(7))]:
        assert r.evaluate(u, v) == f(u, v)


# -- fit_map ----------------------------------------------------------------------


def test_fit_map_degree_one_baseline():
    P = reduce_map([X0 + 2 * X1, 3 * X1 - X2, X0 + X2])
    model = fit_map(ExactMapSource(P), 1)
    assert model.projectively_equal(P)


def test_fit_map_segre_recovery():
    S = reduce_map([X0 * X0, X0 * X1, X0 * X2, X1 * X2])
    model = fit_map(ExactMapSource(S), 2)
    assert model.projectively_equal(S)


def test_fit_map_cubic_at_degree_two_rejected():
    C = reduce_map([X0**3 + X1 * X2 * X0, X1**3, X2**3 - X0 * X1 * X2, X0 * X1 * X2])
    with pytest.raises(DegreeTooLow):
        fit_map(ExactMapSource(C), 2)


def test_fit_map_composition_consistency():
    # the fitted model agrees with the source projectively at grid nodes
    S = reduce_map([X0 * X0 - X1 * X2, X0 * X1 + X2 * X2, X0 * X2, X1 * X1])
    src = ExactMapSource(S)
    model = fit_map(src, 2)
    for u in range(5):
        for v in range(5):
            y = src.evaluate(u, v)
            m = model.evaluate([F(1), F(u), F(v)])
            if y is None or m is None:
                continue
            n1 = len(y)
            for i in range(n1):
                for j in range(i + 1, n1):
                    assert y[i] * m[j] == y[j] * m[i]

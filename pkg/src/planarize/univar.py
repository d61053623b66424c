"""Dense univariate polynomial helpers over exact rationals.

Coefficient lists are low-to-high degree; the zero polynomial is [].
These back the rational-interpolation machinery, resultants, and
squarefree parts; everything is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Poly = list  # list[Fraction], low-to-high


def trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[Fraction]) -> int:
    """Degree, with deg 0 = -1 by convention."""
    return len(trim(p)) - 1


def add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    return add(p, [-c for c in q])


def scale(p: Sequence[Fraction], c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return []
    return [x * c for x in p]


def mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def evaluate(p: Sequence[Fraction], x) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def derivative(p: Sequence[Fraction]) -> Poly:
    return trim([Fraction(i) * c for i, c in enumerate(p)][1:])


def divmod_exact(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[Poly, Poly]:
    """Euclidean division over the rationals."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    r = [Fraction(c) for c in trim(p)]
    d = len(q) - 1
    lead = q[-1]
    quo = [Fraction(0)] * max(0, len(r) - d)
    while len(r) - 1 >= d and r:
        k = len(r) - 1 - d
        c = r[-1] / lead
        quo[k] = c
        for i in range(len(q)):
            r[k + i] -= c * q[i]
        r = trim(r)
    return trim(quo), r


def divexact(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    quo, rem = divmod_exact(p, q)
    if rem:
        raise ArithmeticError("inexact univariate division")
    return quo


def content_primitive(p: Sequence[Fraction]) -> tuple[Fraction, Poly]:
    """Rational content and the integer primitive part with positive lead."""
    p = trim(p)
    if not p:
        return Fraction(0), []
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if ints[-1] < 0:
        g = -g
    prim = [Fraction(c // g) for c in ints]
    return Fraction(g, den), prim


def gcd(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    """Primitive gcd via the Euclidean remainder sequence with
    primitive-part reduction at every step (controls coefficient growth)."""
    a = content_primitive(p)[1]
    b = content_primitive(q)[1]
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        _, r = divmod_exact(a, b)
        r = content_primitive(r)[1]
        a, b = b, r
    return content_primitive(a)[1]


def squarefree_part(p: Sequence[Fraction]) -> Poly:
    """p with every repeated factor reduced to multiplicity one."""
    p = trim(p)
    if degree(p) <= 0:
        return content_primitive(p)[1] if p else []
    g = gcd(p, derivative(p))
    if degree(g) <= 0:
        return content_primitive(p)[1]
    return content_primitive(divexact(p, g))[1]


def resultant(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    """Sylvester-matrix resultant of two univariate rationals (exact)."""
    from . import projcore

    p = trim(p)
    q = trim(q)
    n, m = len(p) - 1, len(q) - 1
    if n < 0 or m < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(p[0]) ** m
    if m == 0:
        return Fraction(q[0]) ** n
    size = n + m
    rows = []
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return projcore.det(rows)


def lagrange_interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> Poly:
    """Exact interpolating polynomial through distinct nodes."""
    out: Poly = []
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = mul(basis, [-xj, Fraction(1)])
            denom *= xi - xj
        out = add(out, scale(basis, yi / denom))
    return out


def lcm(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    p = trim(p)
    q = trim(q)
    if not p or not q:
        return []
    g = gcd(p, q)
    out = divexact(mul(p, q), g)
    return content_primitive(out)[1]

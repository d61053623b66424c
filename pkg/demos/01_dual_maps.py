"""Dual maps of planarizations, computed exactly.

A quadratic rational map RP^2 -> RP^3 sends every line into a plane (its
restriction to a line spans at most a plane).  The dual map sends each line
to that plane, viewed as a point of the dual space.  This script computes a
few duals symbolically and checks the classical facts: duals of generic
quadratics are cubic, and dualizing twice returns the original map.
"""

from fractions import Fraction

from planarize import reduce_map, variables
from planarize.cli import generate_map
from planarize.dualize import dual_map

x0, x1, x2 = variables(3)

# A quadratic whose dual collapses to degree one: every line l.x = 0 maps
# into the plane [l0:l1:l2:0], because l0*x0^2 + l1*x0x1 + l2*x0x2 = x0*(l.x).
F = reduce_map([x0 * x0, x0 * x1, x0 * x2, x1 * x2])
F_hat = dual_map(F)
print("map:      ", F.components)
print("dual:     ", F_hat.components)
print("dual degree:", F_hat.degree)
print()

# A generic quadratic: its dual is genuinely cubic.
G = generate_map(seed=1, degree=2, target_dim=3)
G_hat = dual_map(G, seed=1)
print("generic quadratic dual degree:", G_hat.degree)

# Biduality: the dual of the dual agrees with the original map wherever
# both are defined.  Exact check at a few rational points.
G_hh = dual_map(G_hat, seed=1)
print("bidual equals original:", G_hh.projectively_equal(G))

for x in [(1, 2, 3), (5, -1, 4), (Fraction(1, 2), Fraction(1, 3), 1)]:
    a = G.evaluate(list(map(Fraction, x)))
    b = G_hh.evaluate(list(map(Fraction, x)))
    same = all(a[i] * b[j] == a[j] * b[i] for i in range(4) for j in range(4))
    print(f"  at {x}: projectively equal = {same}")

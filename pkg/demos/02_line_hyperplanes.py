"""Per-line hyperplanes from jets.

For a smooth map into RP^n, the order-(n-1) Taylor data at a point packs,
for every line direction, the vectors spanning the affine hull of the local
image curve.  Wedging their homogeneous lifts yields a covector polynomial
in the slope: evaluate it at a slope and you hold the plane containing that
line's image.  Identically zero output means the point is degenerate (no
line determines a unique plane there).
"""

from fractions import Fraction

from planarize import reduce_map, variables
from planarize.jetplan import ExactMapSource, hyperplane_for_line, jet_of, nondegenerate_at, omega

x0, x1, x2 = variables(3)

# The paraboloid chart (u, v) -> (u, v, u^2 + v^2), homogenized.
F = reduce_map([x0 * x0, x0 * x1, x0 * x2, x1 * x1 + x2 * x2])
src = ExactMapSource(F)

jet = jet_of(src, (0, 0), 2)
print("jet coefficients at the origin:")
for key in sorted(jet.coeffs):
    print(f"  A{key} = {jet.coeffs[key]}")

family = omega(jet)
print("\nslope family (covector polynomial):")
for k, cov in enumerate(family.coeffs):
    print(f"  slope^{k}: {cov}")

# The plane for the line v = 2u: y = 2x in the affine chart.
plane = hyperplane_for_line(src, (0, 0), 2)
print("\nplane for slope 2:", plane.covector)

# Exact containment of true image points of that line:
for t in (1, 2, Fraction(1, 3)):
    img = F.evaluate([Fraction(1), t, 2 * t])
    pairing = sum(Fraction(c) * y for c, y in zip(plane.covector, img))
    print(f"  containment at t={t}: pairing = {pairing}")

# The vertical line gets its plane from the swapped-variable jet.
print("vertical line plane:", hyperplane_for_line(src, (0, 0), "inf").covector)

# An affine-linear embedding is degenerate everywhere: each image line lies
# in a pencil of planes, so no unique plane exists.
L = reduce_map([x0, x1, x2, x1 + 2 * x2])
print("\naffine-linear map nondegenerate anywhere?",
      nondegenerate_at(ExactMapSource(L), (Fraction(1, 3), Fraction(1, 5))))

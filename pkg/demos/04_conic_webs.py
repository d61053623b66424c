"""Maps taking lines to conics of a web.

The circle web is spanned by x0^2, x0x1, x0x2, x1^2 + x2^2: its members are
all circles of the affine plane plus degenerate line pairs.  Inversion takes
every line to a circle; composing with the web map turns that geometry into
linear algebra, and the classifier sorts the map into its structural case.
"""

from planarize import reduce_map, variables
from planarize.conicweb import (
    ConicSystem,
    circle_web,
    classify_web,
    invert_via_net,
    lines_to_curves,
    phi_map,
)
from planarize.jetplan import ExactMapSource
from planarize.poly import implicitize
from planarize.projcore import PLine2

x0, x1, x2 = variables(3)
web = circle_web()
inversion = reduce_map([x1 * x1 + x2 * x2, x0 * x1, x0 * x2])

# Which circle contains the image of a given line?
lines = [PLine2.of(1, 2, 3), PLine2.of(0, 1, 1)]
members = lines_to_curves(ExactMapSource(inversion), web, lines)
for line, lam in zip(lines, members):
    print(f"line {line.covector} -> member {lam.coords}: {web.conic(list(lam.coords))}")

# The web map's image surface is the quadric y0*y3 = y1^2 + y2^2.
phi = phi_map(web)
degree, relation = implicitize(phi)
print("\nimage surface degree:", degree)
print("relation:", relation)

# Classification: inversion rides the quadric (both the web map and the
# composite land on it).
verdict = classify_web(inversion, web)
print("\ninversion verdict:", type(verdict).__name__)
print("quadric:", verdict.quadric)

# A map onto one member classifies as InConic.
onto_circle = reduce_map([x0 * x0 + x1 * x1, x0 * x0 - x1 * x1, 2 * x0 * x1])
print("image-in-circle verdict:", classify_web(onto_circle, web))

# Inversion through a net: the classical involution inverts itself.
net = ConicSystem([x1 * x1 + x2 * x2, x0 * x1, x0 * x2])
W = invert_via_net(inversion, net)
print("\nnet inverse equals inversion:", W.projectively_equal(inversion))

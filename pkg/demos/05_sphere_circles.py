"""Sphere-valued maps taking lines to circles.

Circles on the unit sphere are exactly its plane sections, so a map into
the sphere taking lines to circles is a planarization after embedding the
sphere in RP^3.  The classifier distinguishes: image inside one circle, a
co-trivial family of planes, or a quadratic rational map.  Inverse
stereographic projection is the model quadratic case; its exact rational
samples live on the sphere with no rounding at all.
"""

from fractions import Fraction

from planarize.conicweb import khovanskii_classify
from planarize.jetplan import CallableSource


def stereo(u, v):
    """Inverse stereographic projection, exactly rational on the sphere."""
    u, v = Fraction(u), Fraction(v)
    s = u * u + v * v + 1
    return (2 * u / s, 2 * v / s, (u * u + v * v - 1) / s)


x, y, z = stereo(Fraction(1, 2), Fraction(1, 3))
print("sample:", (x, y, z), "norm^2 =", x * x + y * y + z * z)

verdict = khovanskii_classify(CallableSource(stereo, codim=3, mode="exact"))
print("stereographic verdict:", type(verdict).__name__)
print("recovered map:", verdict.map.components)


def equator(u, v):
    """Values on the equator via the rational circle parameterization."""
    t = Fraction(u) + Fraction(v) * Fraction(v)
    den = 1 + t * t
    return (Fraction(1 - t * t) / den, Fraction(2 * t) / den, Fraction(0))


print("\nequator-valued verdict:", khovanskii_classify(CallableSource(equator, codim=3, mode="exact")))

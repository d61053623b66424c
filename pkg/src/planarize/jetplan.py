"""Jets of maps into projective space and per-line hyperplane extraction.

A map source is either an exact rational map (jets by polynomial shift and
truncated series division, no rounding) or a rectangular CSV sample grid
(jets by central finite differences).  From an order-(n-1) jet at a base
point we build the slope-indexed family of vectors B_l, lift them to
homogeneous coordinates and wedge them into a covector-valued polynomial in
the slope; its value at a slope is the hyperplane containing the image of
the line with that slope, and its identical vanishing signals degeneracy.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from . import projcore, univar
from .poly import RatMap
from .projcore import Hyperplane

#: float-mode relative threshold for "this covector polynomial is zero"
DEGENERACY_RTOL = 1e-7
#: float-mode relative containment residual for per-line hyperplanes
CONTAINMENT_RTOL = 1e-6


class OnIndeterminacy(ValueError):
    """The map is undefined (all components vanish) at the requested point."""


class ChartOverflow(ValueError):
    """No affine chart keeps the local image finite (bad grid data)."""


class OrderMismatch(ValueError):
    """A jet of the wrong order was fed to the hyperplane construction."""


class DegenerateSlope(ValueError):
    """The hyperplane family vanishes at this slope (but not identically)."""


class DegeneratePoint(ValueError):
    """The map is degenerate at the base point (no line gives a hyperplane)."""


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in the affine (u, v) chart of the domain."""

    u_lo: Fraction = Fraction(0)
    u_hi: Fraction = Fraction(1)
    v_lo: Fraction = Fraction(0)
    v_hi: Fraction = Fraction(1)

    def contains(self, u, v) -> bool:
        return self.u_lo <= u <= self.u_hi and self.v_lo <= v <= self.v_hi

    def center(self) -> tuple[Fraction, Fraction]:
        return (self.u_lo + self.u_hi) / 2, (self.v_lo + self.v_hi) / 2


UNIT_SQUARE = Region()


class ExactMapSource:
    """Exact evaluator of a rational map on the chart (u, v) -> [1:u:v]."""

    mode = "exact"

    def __init__(self, ratmap: RatMap, region: Region = UNIT_SQUARE):
        if ratmap.domain_vars != 3:
            raise ValueError("map sources have domain RP^2")
        self.ratmap = ratmap
        self.region = region

    @property
    def codim(self) -> int:
        return self.ratmap.codim

    def evaluate(self, u, v) -> Optional[tuple[Fraction, ...]]:
        """Homogeneous image coordinates, or None at an indeterminacy point."""
        return self.ratmap.evaluate([Fraction(1), Fraction(u), Fraction(v)])


class CallableSource:
    """Black-box evaluator (used for composites and embeddings).

    `nodes`, when given, names the (u, v) lattice the callable supports;
    fitting then samples and validates on that lattice only.
    """

    def __init__(
        self,
        fn: Callable,
        codim: int,
        region: Region = UNIT_SQUARE,
        mode: str = "exact",
        nodes: Optional[tuple] = None,
    ):
        self._fn = fn
        self.codim = codim
        self.region = region
        self.mode = mode
        self.nodes = nodes

    def evaluate(self, u, v):
        return self._fn(u, v)


class GridMapSource:
    """Rectangular sample grid of an affine map (u, v) -> R^n.

    Values are stored per node; homogeneous coordinates prepend a 1, so the
    chart index is always 0.  Axes must be strictly monotone.
    """

    def __init__(self, u_axis: Sequence, v_axis: Sequence, values, mode: str = "float"):
        self.u_axis = list(u_axis)
        self.v_axis = list(v_axis)
        for ax in (self.u_axis, self.v_axis):
            if any(not (b > a) for a, b in zip(ax, ax[1:])):
                raise ValueError("grid axes must be strictly increasing")
        self.values = values  # values[iv][iu] = tuple of n numbers
        self.mode = mode
        n = len(values[0][0])
        self.codim = n
        self.region = Region(
            Fraction(self.u_axis[0]) if mode == "exact" else self.u_axis[0],
            Fraction(self.u_axis[-1]) if mode == "exact" else self.u_axis[-1],
            Fraction(self.v_axis[0]) if mode == "exact" else self.v_axis[0],
            Fraction(self.v_axis[-1]) if mode == "exact" else self.v_axis[-1],
        )

    @property
    def pitch(self) -> tuple:
        return self.u_axis[1] - self.u_axis[0], self.v_axis[1] - self.v_axis[0]

    def node_index(self, u, v) -> tuple[int, int]:
        def find(axis, x):
            for i, a in enumerate(axis):
                if a == x or (self.mode == "float" and abs(float(a) - float(x)) < 1e-12):
                    return i
            raise KeyError(f"{x} is not a grid node")

        return find(self.u_axis, u), find(self.v_axis, v)

    def node_value(self, iu: int, iv: int) -> tuple:
        return self.values[iv][iu]

    def evaluate(self, u, v) -> Optional[tuple]:
        """Affine value at a grid node, prefixed with 1 (homogeneous).

        Off-grid points evaluate to None (a grid knows nothing there)."""
        try:
            iu, iv = self.node_index(u, v)
        except KeyError:
            return None
        val = self.values[iv][iu]
        one = Fraction(1) if self.mode == "exact" else 1.0
        return (one, *val)


MapSource = Union[ExactMapSource, GridMapSource, CallableSource]


def read_csv_grid(text_or_path: str, mode: str = "float") -> GridMapSource:
    """Parse the grid CSV format: header u,v,F1..Fn, rows v-major then u."""
    if "\n" not in text_or_path and "," not in text_or_path:
        with open(text_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = text_or_path
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0]
    if header[:2] != ["u", "v"]:
        raise ValueError("grid CSV must start with columns u,v")
    n = len(header) - 2
    conv = Fraction if mode == "exact" else float
    u_set: list = []
    v_set: list = []
    data: dict = {}
    for row in rows[1:]:
        if not row:
            continue
        u, v = conv(row[0]), conv(row[1])
        if u not in u_set:
            u_set.append(u)
        if v not in v_set:
            v_set.append(v)
        data[(u, v)] = tuple(conv(x) for x in row[2:])
    u_axis = sorted(u_set)
    v_axis = sorted(v_set)
    values = [[data[(u, v)] for u in u_axis] for v in v_axis]
    if any(len(val) != n for line in values for val in line):
        raise ValueError("ragged grid CSV")
    return GridMapSource(u_axis, v_axis, values, mode=mode)


def write_csv_grid(source: GridMapSource) -> str:
    n = source.codim
    out = io.StringIO()
    w = csv.writer(out)
    w.writerow(["u", "v"] + [f"F{i+1}" for i in range(n)])
    fmt = projcore.scalar_to_str if source.mode == "exact" else repr
    for v in source.v_axis:
        for u in source.u_axis:
            iu, iv = source.node_index(u, v)
            w.writerow([fmt(u), fmt(v)] + [fmt(x) for x in source.node_value(iu, iv)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Jet:
    """Taylor data of a map at a base point, in a fixed target chart.

    coeffs[(i, j)] is the vector of scaled mixed partials
    (1/(i! j!)) d^{i+j}F/du^i dv^j at the base, for i + j <= order.
    `chart` is the dehomogenizing target coordinate.
    """

    base: tuple
    order: int
    chart: int
    coeffs: dict
    mode: str = "exact"

    @property
    def codim(self) -> int:
        return len(self.coeffs[(0, 0)])

    def transposed(self) -> "Jet":
        """Swap the roles of u and v (used for vertical lines)."""
        swapped = {(j, i): vec for (i, j), vec in self.coeffs.items()}
        return Jet((self.base[1], self.base[0]), self.order, self.chart, swapped, self.mode)

    def scale(self) -> float:
        return max(abs(float(x)) for vec in self.coeffs.values() for x in vec) or 1.0


def _shift_bivariate(pd: dict, u0: Fraction, v0: Fraction) -> dict:
    """P(u0+s, v0+t) expanded exactly as a polynomial in (s, t)."""
    out: dict = {}
    for (a, b), c in pd.items():
        for i in range(a + 1):
            for j in range(b + 1):
                coef = c * math.comb(a, i) * math.comb(b, j) * u0 ** (a - i) * v0 ** (b - j)
                if coef:
                    key = (i, j)
                    s = out.get(key, Fraction(0)) + coef
                    if s:
                        out[key] = s
                    elif key in out:
                        del out[key]
    return out


def _series_truncate(pd: dict, m: int) -> dict:
    return {e: c for e, c in pd.items() if e[0] + e[1] <= m}


def _series_mul(a: dict, b: dict, m: int) -> dict:
    out: dict = {}
    for (i, j), ca in a.items():
        for (k, l), cb in b.items():
            if i + j + k + l > m:
                continue
            key = (i + k, j + l)
            s = out.get(key, Fraction(0)) + ca * cb
            if s:
                out[key] = s
            elif key in out:
                del out[key]
    return out


def _series_inverse(d: dict, m: int) -> dict:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = d.get((0, 0), Fraction(0))
    if c0 == 0:
        raise ZeroDivisionError("series has no constant term")
    rest = {e: -c / c0 for e, c in d.items() if e != (0, 0)}
    inv = {(0, 0): Fraction(1, 1) / c0}
    power = {(0, 0): Fraction(1)}
    for _ in range(m):
        power = _series_mul(power, rest, m)
        if not power:
            break
        for e, c in power.items():
            key = e
            s = inv.get(key, Fraction(0)) + c / c0
            if s:
                inv[key] = s
            elif key in inv:
                del inv[key]
    return inv


_STENCILS = {
    0: ((0, Fraction(1)),),
    1: ((-1, Fraction(-1, 2)), (1, Fraction(1, 2))),
    2: ((-1, Fraction(1)), (0, Fraction(-2)), (1, Fraction(1))),
    3: ((-2, Fraction(-1, 2)), (-1, Fraction(1)), (1, Fraction(-1)), (2, Fraction(1, 2))),
}


def jet_of(source: MapSource, a: tuple, m: int) -> Jet:
    """Order-m jet of a map source at an affine base point.

    Exact sources: polynomial shift plus truncated series division, so the
    coefficients are exact rationals.  Grid sources: central differences of
    matched order (m <= 3) on the stored pitch.
    """
    if isinstance(source, ExactMapSource):
        return _jet_exact(source, a, m)
    if isinstance(source, GridMapSource):
        return _jet_grid(source, a, m)
    raise TypeError("jets need an exact rational map or a sample grid")


def _jet_exact(source: ExactMapSource, a: tuple, m: int) -> Jet:
    u0, v0 = Fraction(a[0]), Fraction(a[1])
    comps = source.ratmap.components
    vals = source.evaluate(u0, v0)
    if vals is None:
        raise OnIndeterminacy(f"map undefined at {a}")
    chart = max(range(len(vals)), key=lambda i: (abs(vals[i]), -i))
    shifted = [
        _series_truncate(_shift_bivariate(c.dehomogenize(0), u0, v0), m) for c in comps
    ]
    inv_den = _series_inverse(shifted[chart], m)
    coeffs: dict = {}
    for i in range(m + 1):
        for j in range(m + 1 - i):
            coeffs[(i, j)] = []
    for idx, s in enumerate(shifted):
        if idx == chart:
            continue
        series = _series_mul(s, inv_den, m)
        for (i, j) in coeffs:
            coeffs[(i, j)].append(series.get((i, j), Fraction(0)))
    return Jet((u0, v0), m, chart, {k: tuple(v) for k, v in coeffs.items()}, "exact")


def _jet_grid(source: GridMapSource, a: tuple, m: int) -> Jet:
    if m > 3:
        raise OrderMismatch("grid jets support order <= 3")
    iu, iv = source.node_index(a[0], a[1])
    hu, hv = source.pitch
    margin = 2 if m >= 3 else 1
    if not (margin <= iu < len(source.u_axis) - margin and margin <= iv < len(source.v_axis) - margin):
        raise ChartOverflow("base point too close to the grid edge for the stencil")
    n = source.codim
    coeffs: dict = {}
    for i in range(m + 1):
        for j in range(m + 1 - i):
            vec = []
            for comp in range(n):
                acc = 0.0
                for du, wu in _STENCILS[i]:
                    for dv, wv in _STENCILS[j]:
                        val = source.node_value(iu + du, iv + dv)[comp]
                        fval = float(val)
                        if not math.isfinite(fval):
                            raise ChartOverflow("non-finite sample near the base point")
                        acc += float(wu) * float(wv) * fval
                acc /= float(hu) ** i * float(hv) ** j
                acc /= math.factorial(i) * math.factorial(j)
                vec.append(acc)
            coeffs[(i, j)] = tuple(vec)
    return Jet((a[0], a[1]), m, 0, coeffs, "float")


# ---------------------------------------------------------------------------
# the per-slope hyperplane polynomial
# ---------------------------------------------------------------------------


def _lp_add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = [0] * n
    for i, c in enumerate(p):
        out[i] = out[i] + c
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return out


def _lp_mul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _lp_det(matrix: list[list[list]]) -> list:
    """Determinant of a square matrix of slope-polynomials (cofactor)."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    out: list = []
    sign = 1
    for col in range(n):
        entry = matrix[0][col]
        if any(c != 0 for c in entry):
            minor = [[row[c] for c in range(n) if c != col] for row in matrix[1:]]
            term = _lp_mul(entry, _lp_det(minor))
            if sign < 0:
                term = [-c for c in term]
            out = _lp_add(out, term)
        sign = -sign
    return out


@dataclass(frozen=True)
class CovectorPoly:
    """Covector-valued polynomial in the line slope."""

    coeffs: tuple  # tuple of covectors (tuples), index = slope power
    mode: str = "exact"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(all(x == 0 for x in vec) for vec in self.coeffs)

    def max_abs(self) -> float:
        return max((abs(float(x)) for vec in self.coeffs for x in vec), default=0.0)

    def evaluate(self, lam) -> tuple:
        if not self.coeffs:
            return ()
        width = len(self.coeffs[0])
        if self.mode == "exact":
            lam = Fraction(lam)
            acc = [Fraction(0)] * width
        else:
            lam = float(lam)
            acc = [0.0] * width
        for vec in reversed(self.coeffs):
            acc = [a * lam + c for a, c in zip(acc, vec)]
        return tuple(acc)


def omega(jet: Jet) -> CovectorPoly:
    """Hyperplane-family polynomial of an order-(n-1) jet.

    B_l(slope) collects the jet coefficients along the line direction; the
    base value lifts with a 1 in the chart slot and the direction terms with
    a 0, and the wedge complement of the lifted rows gives, per slope, the
    covector of the hyperplane containing the image of that line.  The zero
    polynomial is a valid output: the point is degenerate.
    """
    n = jet.codim
    if jet.order != n - 1:
        raise OrderMismatch(f"jet order {jet.order} != codomain dim {n} minus 1")
    zero = Fraction(0) if jet.mode == "exact" else 0.0
    one = Fraction(1) if jet.mode == "exact" else 1.0

    def lifted(vec: tuple, fill) -> list:
        out = list(vec)
        out.insert(jet.chart, fill)
        return out

    # rows[l][col] = slope-polynomial entry (list low-to-high)
    rows = []
    for l in range(n):
        entries = [[] for _ in range(n + 1)]
        for j in range(l + 1):
            vec = lifted(jet.coeffs[(l - j, j)], one if l == 0 else zero)
            for col in range(n + 1):
                while len(entries[col]) <= j:
                    entries[col].append(zero)
                entries[col][j] = entries[col][j] + vec[col]
        rows.append(entries)
    cov_polys = []
    for omit in range(n + 1):
        minor = [[row[c] for c in range(n + 1) if c != omit] for row in rows]
        d = _lp_det(minor)
        if omit % 2 == 1:
            d = [-c for c in d]
        cov_polys.append(d)
    if jet.mode == "exact":
        # divide out the common polynomial factor in the slope: this is the
        # rational continuation of the hyperplane family (slopes where the
        # raw minors all vanish get their limiting hyperplane)
        content: list = []
        for p in cov_polys:
            content = univar.gcd(content, univar.trim(p))
        if univar.degree(content) > 0:
            cov_polys = [
                univar.divexact(univar.trim(p), content) if univar.trim(p) else [] for p in cov_polys
            ]
    top = max((len(p) for p in cov_polys), default=0)
    coeffs = []
    for k in range(top):
        coeffs.append(tuple(p[k] if k < len(p) else zero for p in cov_polys))
    while coeffs and all(x == 0 for x in coeffs[-1]):
        coeffs.pop()
    return CovectorPoly(tuple(coeffs), jet.mode)


def nondegenerate_at(source: MapSource, a: tuple) -> bool:
    """Whether some line through the point determines a unique hyperplane."""
    n = source.codim
    jet = jet_of(source, a, n - 1)
    om = omega(jet)
    if jet.mode == "exact":
        return not om.is_zero
    return om.max_abs() > DEGENERACY_RTOL * jet.scale() ** n


def _slope_parts(slope) -> tuple:
    """Accept an affine slope, the string "inf", or a projective pair."""
    if isinstance(slope, str):
        if slope in ("inf", "vertical"):
            return (1, 0)
        return (Fraction(slope), 1)
    if isinstance(slope, tuple):
        num, den = slope
        if num == 0 and den == 0:
            raise ValueError("slope [0:0] is not a direction")
        return (num, den)
    return (Fraction(slope), 1)


def hyperplane_for_line(source: MapSource, a: tuple, slope) -> Hyperplane:
    """Hyperplane containing the image of the line through `a` with `slope`.

    The slope may be affine (v = slope * u relative to the base point),
    "inf" for the vertical line, or a projective pair (dv, du).  Exactly
    computed image points of the line are cross-checked for containment.
    """
    n = source.codim
    jet = jet_of(source, a, n - 1)
    num, den = _slope_parts(slope)
    if den == 0:
        om = omega(jet.transposed())
        value = om.evaluate(0)
        full = om
    else:
        om = omega(jet)
        value = om.evaluate(Fraction(num, den) if jet.mode == "exact" else num / den)
        full = om
    if full.is_zero or (jet.mode == "float" and full.max_abs() <= DEGENERACY_RTOL * jet.scale() ** n):
        raise DegeneratePoint(f"map degenerate at {a}")
    if all(x == 0 for x in value):
        raise DegenerateSlope(f"hyperplane family vanishes at slope {slope}")
    plane = Hyperplane.of(value) if jet.mode == "exact" else None
    _validate_containment(source, jet, a, (num, den), value, n)
    if plane is None:
        plane = Hyperplane(projcore.rationalize_direction(value, max_den=10**9))
    return plane


def _validate_containment(source, jet, a, direction, covector, n):
    num, den = direction
    if isinstance(source, ExactMapSource):
        du, dv = Fraction(den), Fraction(num)
        good = 0
        k = 1
        while good < 2 * n and k < 64:
            for s in (Fraction(k, 8), Fraction(-k, 8)):
                img = source.evaluate(Fraction(a[0]) + s * du, Fraction(a[1]) + s * dv)
                if img is None:
                    continue
                pairing = sum(Fraction(c) * x for c, x in zip(covector, img))
                if pairing != 0:
                    raise DegenerateSlope(
                        f"image of the line with slope {num}/{den} leaves the hyperplane"
                    )
                good += 1
            k += 1
        return
    # float/grid: check the Taylor curve itself against the covector
    scale = math.sqrt(sum(float(c) ** 2 for c in covector)) or 1.0
    lam = None if den == 0 else num / den
    use = jet.transposed() if den == 0 else jet
    for t in [x / 7.0 for x in range(-n, n + 1) if x]:
        point = [0.0] * (use.codim)
        for l in range(use.order + 1):
            b = [0.0] * use.codim
            for j in range(l + 1):
                w = (lam**j) if lam is not None else (1.0 if j == 0 else 0.0)
                vec = use.coeffs[(l - j, j)]
                b = [x + w * y for x, y in zip(b, vec)]
            point = [x + (t**l) * y for x, y in zip(point, b)]
        lifted = list(point)
        lifted.insert(use.chart, 1.0)
        norm = math.sqrt(sum(x * x for x in lifted)) or 1.0
        resid = abs(sum(float(c) * x for c, x in zip(covector, lifted))) / (scale * norm)
        if resid > CONTAINMENT_RTOL:
            raise DegenerateSlope(f"containment residual {resid:.2e} too large")

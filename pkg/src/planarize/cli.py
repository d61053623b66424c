"""Command-line front end: JSON/CSV ingestion, seeded generation, reports.

Subcommands: dualize | classify | fit | web-classify | implicitize |
khovanskii | gen.  Reports are canonical JSON (sorted keys, compact
separators), so identical configuration and inputs give byte-identical
output.  Exit codes: 0 definite verdict, 2 unresolved/indeterminate, 1
input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import conicweb, dualize, jetplan, ratfit
from .conicweb import (
    ConicSystem,
    InCircle,
    InConic,
    InverseQuadratic,
    Quadratic,
    QuadricFactor,
)
from .dualize import CoTrivial, Rational, Trivial
from .poly import HPoly, RatMap, implicitize, reduce_map, _monomials
from .seeding import stable_rng


@dataclass(frozen=True)
class RunConfig:
    """One invocation's knobs; identical config + inputs => identical bytes."""

    mode: str = "exact"
    seed: int = 0
    tolerance: float = 1e-9
    degree_max: int = 3
    input: Optional[str] = None
    output: Optional[str] = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            mode=getattr(args, "mode", "exact"),
            seed=getattr(args, "seed", 0),
            tolerance=getattr(args, "tolerance", 1e-9),
            degree_max=getattr(args, "degree", 3),
            input=getattr(args, "infile", None),
            output=getattr(args, "out", None),
        )


def _emit(report: dict, out_path: Optional[str]) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_map(path: str) -> RatMap:
    return RatMap.from_json(_load_json(path))


# ---------------------------------------------------------------------------
# seeded generation
# ---------------------------------------------------------------------------

_GEN_KINDS = {
    "linear-rp3": (1, 3),
    "quadratic-rp3": (2, 3),
    "cubic-rp3": (3, 3),
    "quadratic-rp2": (2, 2),
}


def generate_map(seed: int, degree: int, target_dim: int) -> RatMap:
    """Random integer-coefficient map, rejection-sampled so that removing
    common factors preserves the requested degree."""
    rng = stable_rng(seed, f"gen:{degree}:{target_dim}")
    monos = _monomials(3, degree)
    while True:
        comps = []
        for _ in range(target_dim + 1):
            terms = {m: Fraction(rng.randint(-9, 9)) for m in monos}
            comps.append(HPoly(3, degree, {m: c for m, c in terms.items() if c}))
        if all(c.is_zero for c in comps):
            continue
        m = reduce_map(comps)
        if m.degree == degree:
            return m


# ---------------------------------------------------------------------------
# verdict serialization
# ---------------------------------------------------------------------------


def _classify_report(verdict) -> tuple[dict, int]:
    if isinstance(verdict, Trivial):
        return {"class": "Trivial", "witness": list(verdict.hyperplane.covector), "degree": None}, 0
    if isinstance(verdict, CoTrivial):
        return {"class": "CoTrivial", "witness": list(verdict.center.coords), "degree": None}, 0
    if isinstance(verdict, Rational):
        return {"class": "Rational", "witness": None, "degree": verdict.degree}, 0
    return {"class": "Indeterminate", "witness": None, "degree": None, "reason": verdict.reason}, 2


def _web_report(verdict) -> tuple[dict, int]:
    if isinstance(verdict, InConic):
        return {"case": "InConic", "witness": list(verdict.member.coords), "diagnostics": None}, 0
    if isinstance(verdict, InverseQuadratic):
        return {"case": "InverseQuadratic", "witness": verdict.witness.to_json(), "diagnostics": None}, 0
    if isinstance(verdict, Quadratic):
        return {"case": "Quadratic", "witness": verdict.map.to_json(), "diagnostics": None}, 0
    if isinstance(verdict, QuadricFactor):
        return (
            {
                "case": "QuadricFactor",
                "witness": {
                    "quadric": verdict.quadric.to_json(),
                    "system_map": verdict.system_map.to_json(),
                    "composite": verdict.composite.to_json(),
                },
                "diagnostics": None,
            },
            0,
        )
    return {"case": "Unresolved", "witness": None, "diagnostics": verdict.reason}, 2


# ---------------------------------------------------------------------------
# curve emission for external plotting
# ---------------------------------------------------------------------------


def _emit_curves(path: str, F: RatMap, seed: int, curves: int = 8, samples: int = 33) -> None:
    """Sampled polylines of image curves of seeded lines, as plain CSV."""
    rng = stable_rng(seed, "emit_curves")
    n1 = len(F.components)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("curve,param," + ",".join(f"y{i}" for i in range(n1)) + "\n")
        written = 0
        guard = 0
        while written < curves and guard < 10 * curves:
            guard += 1
            cov = tuple(rng.randint(-5, 5) for _ in range(3))
            if cov == (0, 0, 0):
                continue
            from .projcore import PLine2
            from .poly import line_base_points

            p0, p1 = line_base_points(PLine2.of(cov))
            rows = []
            for k in range(samples):
                t = Fraction(-2) + Fraction(4 * k, samples - 1)
                w = [a + t * b for a, b in zip(p0, p1)]
                img = F.evaluate(w)
                if img is None:
                    continue
                scale = max(abs(float(x)) for x in img) or 1.0
                rows.append((float(t), [float(x) / scale for x in img]))
            if len(rows) < samples // 2:
                continue
            for t, ys in rows:
                fh.write(f"{written},{t!r}," + ",".join(repr(y) for y in ys) + "\n")
            written += 1


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_dualize(args) -> int:
    cfg = RunConfig.from_args(args)
    F = _load_map(cfg.input)
    try:
        Fh = dualize.dual_map(F, seed=cfg.seed)
    except (dualize.EverywhereDegenerate, dualize.SectionCollapse, dualize.NotPlanar) as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, cfg.output)
        return 2
    if args.emit_curves:
        _emit_curves(args.emit_curves, F, cfg.seed)
    _emit({"dual": Fh.to_json(), "degree": Fh.degree}, cfg.output)
    return 0


def _cmd_classify(args) -> int:
    cfg = RunConfig.from_args(args)
    F = _load_map(cfg.input)
    report, code = _classify_report(dualize.classify(F, seed=cfg.seed))
    _emit(report, cfg.output)
    return code


def _cmd_fit(args) -> int:
    # CSV cells (including decimals) are exact rationals; the fit is exact
    cfg = RunConfig.from_args(args)
    source = jetplan.read_csv_grid(cfg.input, mode="exact")
    try:
        model = ratfit.fit_map(source, cfg.degree_max, seed=cfg.seed)
    except (ratfit.DegreeTooLow, ratfit.AmbiguousFit, ratfit.NormalizationFailure,
            ratfit.ChartOverflow) as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, cfg.output)
        return 2
    residuals = _fit_residuals(source, model)
    _emit({"map": model.to_json(), "residuals": residuals}, cfg.output)
    return 0


def _fit_residuals(source: jetplan.GridMapSource, model: RatMap) -> dict:
    """Worst scaled cross-product residual between samples and the model.

    Exact grids get an exact residual (0 when the fit is exact); float grids
    are scored in float."""
    exact = source.mode == "exact"
    worst = Fraction(0) if exact else 0.0
    checked = 0
    for v in source.v_axis:
        for u in source.u_axis:
            y = source.evaluate(u, v)
            if y is None:
                continue
            m = model.evaluate([Fraction(1), Fraction(u), Fraction(v)])
            if m is None:
                continue
            if not exact:
                y = [float(x) for x in y]
                m = [float(x) for x in m]
            ny = max(abs(x) for x in y) or (Fraction(1) if exact else 1.0)
            nm = max(abs(x) for x in m) or (Fraction(1) if exact else 1.0)
            n1 = len(y)
            for i in range(n1):
                for j in range(i + 1, n1):
                    r = abs((y[i] * m[j] - y[j] * m[i]) / (ny * nm))
                    worst = max(worst, r)
            checked += 1
    return {"max_cross_residual": float(worst), "nodes_checked": checked}


def _cmd_web_classify(args) -> int:
    cfg = RunConfig.from_args(args)
    f = _load_map(cfg.input)
    web = ConicSystem.from_json(_load_json(args.web))
    try:
        verdict = conicweb.classify_web(f, web, seed=cfg.seed)
    except conicweb.NotALinesToCurvesMap as exc:
        _emit({"case": "NotALinesToCurvesMap", "witness": None, "diagnostics": str(exc)}, cfg.output)
        return 2
    report, code = _web_report(verdict)
    if args.emit_curves:
        _emit_curves(args.emit_curves, f, cfg.seed)
    _emit(report, cfg.output)
    return code


def _cmd_implicitize(args) -> int:
    cfg = RunConfig.from_args(args)
    F = _load_map(cfg.input)
    result = implicitize(F, args.kmax)
    if result is None:
        _emit({"degree": None, "relation": None}, cfg.output)
        return 0
    k, rel = result
    _emit({"degree": k, "relation": rel.to_json()}, cfg.output)
    return 0


def _cmd_khovanskii(args) -> int:
    cfg = RunConfig.from_args(args)
    source = jetplan.read_csv_grid(cfg.input, mode=cfg.mode)
    try:
        verdict = conicweb.khovanskii_classify(source, seed=cfg.seed)
    except (conicweb.NotOnSphere, conicweb.DegreeAnomaly, conicweb.TooFewSamples,
            ratfit.DegreeTooLow) as exc:
        _emit({"case": type(exc).__name__, "witness": None, "diagnostics": str(exc)}, cfg.output)
        return 2
    if isinstance(verdict, InCircle):
        _emit({"case": "InCircle", "witness": list(verdict.plane.covector), "diagnostics": None}, cfg.output)
        return 0
    if isinstance(verdict, CoTrivial):
        _emit({"case": "CoTrivial", "witness": list(verdict.center.coords), "diagnostics": None}, cfg.output)
        return 0
    _emit({"case": "Quadratic", "witness": verdict.map.to_json(), "diagnostics": None}, cfg.output)
    return 0


def _cmd_gen(args) -> int:
    cfg = RunConfig.from_args(args)
    if args.kind:
        degree, target_dim = _GEN_KINDS[args.kind]
    else:
        degree, target_dim = args.degree, args.target_dim
    m = generate_map(cfg.seed, degree, target_dim)
    _emit(m.to_json(), cfg.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarize",
        description="exact projective geometry: duals, planarization classes, conic webs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_in=True):
        if needs_in:
            p.add_argument("--in", dest="infile", required=True, help="input file")
        p.add_argument("--out", dest="out", default=None, help="write the JSON report here")
        p.add_argument("--seed", type=int, default=0, help="seed for all validation draws")
        p.add_argument("--mode", choices=("exact", "float"), default="exact")

    p = sub.add_parser("dualize", help="dual planarization of a rational map")
    common(p)
    p.add_argument("--emit-curves", default=None, help="CSV of sampled image polylines")
    p.set_defaults(fn=_cmd_dualize)

    p = sub.add_parser("classify", help="trivial/co-trivial/rational trichotomy")
    common(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("fit", help="reconstruct a rational map from a CSV grid")
    common(p)
    p.add_argument("--degree", type=int, default=3, help="degree bound")
    p.set_defaults(fn=_cmd_fit)

    p = sub.add_parser("web-classify", help="classify a lines-to-web-conics map")
    common(p)
    p.add_argument("--web", required=True, help="conic system JSON")
    p.add_argument("--emit-curves", default=None)
    p.set_defaults(fn=_cmd_web_classify)

    p = sub.add_parser("implicitize", help="lowest-degree image relation of a map")
    common(p)
    p.add_argument("--kmax", type=int, default=4)
    p.set_defaults(fn=_cmd_implicitize)

    p = sub.add_parser("khovanskii", help="classify a sphere-valued lines-to-circles grid")
    common(p)
    p.set_defaults(fn=_cmd_khovanskii)

    p = sub.add_parser("gen", help="seeded random map generation")
    common(p, needs_in=False)
    p.add_argument("--kind", choices=sorted(_GEN_KINDS), default=None)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--target-dim", type=int, default=3)
    p.set_defaults(fn=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.fn(args)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"planarize: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

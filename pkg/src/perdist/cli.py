"""Command-line entry point: ``perdist <subcommand> ...``.

Exit codes: 0 success, 1 a verdict was false or inconclusive under ``--strict``
(or an acceptance criterion failed), 2 usage or input-format errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .cones import LatticeCone, count_growth_fit, disjoint_after_negation, intersection_count, uniform_directions
from .distributions import ClosedFormSpec, KINDS, LocalizationWindow, from_closed_form
from .traces import Verdict


class UsageError(Exception):
    pass


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected integers, got {text!r}")
    return tuple(int(v) for v in vals)


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ------------------------------------------------------------------------------------
# subcommands

def cmd_corpus(args) -> int:
    if args.kind == "tensor":
        if not args.factors:
            raise UsageError("tensor needs --factors, e.g. square_wave,constant")
        factors = tuple(ClosedFormSpec(k.strip()) for k in args.factors.split(","))
        spec = ClosedFormSpec("tensor", factors=factors)
    elif args.kind == "harmonic":
        if args.index is None:
            raise UsageError("harmonic needs --index")
        spec = ClosedFormSpec("harmonic", index=_ints(args.index))
    elif args.kind == "cone_supported":
        if args.cone is None:
            raise UsageError("cone_supported needs --cone")
        spec = ClosedFormSpec("cone_supported", cone=io.read_cone(args.cone), inside_exp=args.inside_exp,
                              outside_exp=args.outside_exp, phase_seed=args.phase_seed)
    else:
        spec = ClosedFormSpec(args.kind, dim=args.dim)
    io.write_field(from_closed_form(spec, args.radius), args.output)
    return 0


def cmd_product(args) -> int:
    from .product import cauchy_product
    f1, f2 = io.read_field(args.first), io.read_field(args.second)
    if f1.dim != f2.dim:
        raise UsageError(f"dimension mismatch: {f1.dim} vs {f2.dim}")
    io.write_field(cauchy_product(f1, f2, args.method), args.output)
    return 0


def cmd_compat(args, strict: bool) -> int:
    from .compat import check_compatibility
    f1, f2 = io.read_field(args.first), io.read_field(args.second)
    cones1 = [io.read_cone(p) for p in args.cones1]
    cones2 = [io.read_cone(p) for p in args.cones2]
    try:
        rep = check_compatibility(f1, cones1, f2, cones2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _outdir(args.output)
    io.write_json(rep.to_dict(), out / "report.json")
    for tag, profs in (("f1", rep.profiles1), ("f2", rep.profiles2)):
        for i, p in enumerate(profs):
            if p.alpha_trace is not None:
                io.write_trace(p.alpha_trace, out / f"{tag}_cone{i}_inside.csv")
            if p.beta_trace is not None:
                io.write_trace(p.beta_trace, out / f"{tag}_cone{i}_outside.csv")
    print(f"verdict {str(rep.verdict).lower()}" + (f", tau {rep.tau:g}" if rep.tau is not None else ""))
    for msg in rep.diagnostics:
        print(f"  {msg}")
    return 1 if strict and not rep.verdict else 0


def cmd_cone_count(args, strict: bool) -> int:
    c1, c2 = io.read_cone(args.first), io.read_cone(args.second)
    if c1.dim != c2.dim:
        raise UsageError("cone dimension mismatch")
    if not disjoint_after_negation(c1, c2):
        print("cones intersect after negation; counts are unbounded")
        return 1 if strict else 0
    if args.points:
        pts = [_ints(p) for p in args.points.split(";") if p.strip()]
        if any(len(p) != c1.dim for p in pts):
            raise UsageError(f"points must have {c1.dim} coordinates")
        rows = [(np.array(p), intersection_count(c1, c2, p)) for p in pts]
        gamma = None
    else:
        fit = count_growth_fit(c1, c2, uniform_directions(c1.dim, args.directions), tuple(args.radii))
        rows = list(zip(fit.points, fit.counts))
        gamma = fit.gamma
    header = ",".join(f"n{i + 1}" for i in range(c1.dim)) + ",norm,count"
    lines = [header] + [",".join(str(int(x)) for x in n) + f",{io.fmt(np.linalg.norm(n))},{int(c)}"
                        for n, c in rows]
    Path(args.output).write_text("\n".join(lines) + "\n")
    if gamma is not None:
        print(f"gamma_hat {gamma:.4f}")
    return 0


def _window(args, x0) -> LocalizationWindow:
    return LocalizationWindow(x0, args.width, args.plateau, args.order)


def cmd_wavefront(args, strict: bool) -> int:
    from .wavefront import wavefront_scan
    f = io.read_field(args.field)
    x0 = _floats(args.x0)
    if len(x0) != f.dim:
        raise UsageError(f"--x0 needs {f.dim} coordinates")
    radius = args.radius if args.radius is not None else f.radius // 2
    if radius > f.radius:
        raise UsageError(f"--radius {radius} exceeds the field radius {f.radius}")
    try:
        rep = wavefront_scan(f, x0, args.s, args.directions, args.aperture_deg, _window(args, x0), radius,
                             thresholds=args.thresholds)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _outdir(args.output)
    io.write_json(rep.to_dict(), out / "report.json")
    (out / "directions.csv").write_text(rep.to_csv())
    for i, r in enumerate(rep.directions):
        io.write_trace(r.trace, out / f"trace_{i:03d}.csv")
    print(f"{len(rep.non_regular)} of {len(rep.directions)} directions non-regular at s={args.s:g}")
    for arc in rep.cover:
        print(f"  cover: direction {arc['direction']}, half-angle {arc['half_angle_deg']:g} deg")
    inconclusive = any(r.verdicts[rep.s] is Verdict.INCONCLUSIVE for r in rep.directions)
    return 1 if strict and inconclusive else 0


def cmd_si_product(args, strict: bool) -> int:
    from .shiftinv import ShiftInvariantElement, si_product
    if len(args.gen1) != len(args.coef1) or len(args.gen2) != len(args.coef2):
        raise UsageError("each generator file needs a matching coefficient file")

    def element(gens, coefs, s):
        fields = [io.read_field(p) for p in coefs]
        if any(c.dim != 1 for c in fields):
            raise UsageError("shift-invariant coefficients must be one-dimensional")
        return ShiftInvariantElement([io.read_generator(p, s) for p in gens], fields, s)

    try:
        e1 = element(args.gen1, args.coef1, args.s1)
        e2 = element(args.gen2, args.coef2, args.s2)
        prod = si_product(e1, e2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _outdir(args.output)
    manifest = {"s": prod.s, "generators": []}
    for i, (g, c) in enumerate(zip(prod.generators, prod.coefficients)):
        gname, cname = f"generator_{i}.csv", f"coeffs_{i}.json"
        io.write_generator(g, out / gname)
        io.write_field(c, out / cname)
        manifest["generators"].append({"label": g.label, "samples": gname, "coefficients": cname})
    io.write_json(manifest, out / "element.json")
    print(f"product element with {len(prod.generators)} generators, s = {prod.s:g}")
    return 0


def cmd_acceptance(args) -> int:
    from .acceptance import run_all
    only = set(args.only) if args.only else None
    results = run_all(seed=args.seed, only=only, echo=print)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


# ------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perdist", allow_abbrev=False, description="Periodic distributions as Fourier coefficient fields.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    p.add_argument("--strict", action="store_true", help="exit 1 when a verdict is false or inconclusive")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("corpus", help="write a closed-form coefficient field")
    c.add_argument("--kind", required=True, choices=KINDS)
    c.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    c.add_argument("--radius", type=int, required=True)
    c.add_argument("--index", help="harmonic multi-index, e.g. 2,-1")
    c.add_argument("--factors", help="tensor factor kinds, e.g. square_wave,constant")
    c.add_argument("--cone", help="cone JSON for cone_supported")
    c.add_argument("--inside-exp", type=float, default=0.0)
    c.add_argument("--outside-exp", type=float, default=0.0)
    c.add_argument("--phase-seed", type=int, default=None)
    c.add_argument("-o", "--output", required=True)

    c = sub.add_parser("product", help="Cauchy product of two coefficient files")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--method", choices=("fft", "direct"), default="fft")
    c.add_argument("-o", "--output", required=True)

    c = sub.add_parser("compat-check", help="check compatible coefficient estimates")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--cones1", nargs="+", required=True)
    c.add_argument("--cones2", nargs="+", required=True)
    c.add_argument("-o", "--output", required=True, help="output directory")

    c = sub.add_parser("cone-count", help="lattice counts of cone intersections")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--points", help="explicit points 'x,y;x,y'")
    c.add_argument("--radii", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    c.add_argument("--directions", type=int, default=16)
    c.add_argument("-o", "--output", required=True)

    c = sub.add_parser("wavefront", help="direction scan of localized coefficient decay")
    c.add_argument("field")
    c.add_argument("--x0", required=True)
    c.add_argument("--s", type=float, required=True)
    c.add_argument("--directions", type=int, default=16)
    c.add_argument("--aperture-deg", type=float, default=20.0)
    c.add_argument("--radius", type=int, default=None)
    c.add_argument("--width", type=float, default=0.9)
    c.add_argument("--plateau", type=float, default=0.3)
    c.add_argument("--order", type=int, default=8)
    c.add_argument("--thresholds", action="store_true", help="also bisect s* per direction")
    c.add_argument("-o", "--output", required=True, help="output directory")

    c = sub.add_parser("si-product", help="product of two shift-invariant elements")
    c.add_argument("--gen1", nargs="+", required=True)
    c.add_argument("--coef1", nargs="+", required=True)
    c.add_argument("--s1", type=float, default=0.0)
    c.add_argument("--gen2", nargs="+", required=True)
    c.add_argument("--coef2", nargs="+", required=True)
    c.add_argument("--s2", type=float, default=0.0)
    c.add_argument("-o", "--output", required=True, help="output directory")

    c = sub.add_parser("acceptance", help="run the acceptance suite")
    c.add_argument("--only", type=int, nargs="+", choices=range(1, 9))
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        if args.command == "corpus":
            return cmd_corpus(args)
        if args.command == "product":
            return cmd_product(args)
        if args.command == "compat-check":
            return cmd_compat(args, args.strict)
        if args.command == "cone-count":
            return cmd_cone_count(args, args.strict)
        if args.command == "wavefront":
            return cmd_wavefront(args, args.strict)
        if args.command == "si-product":
            return cmd_si_product(args, args.strict)
        return cmd_acceptance(args)
    except io.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

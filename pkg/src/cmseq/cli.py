"""Command-line front end.

Exit codes: 0 success / verified, 1 mathematical violation found (witness in
the output), 2 usage or numerical failure.  Exact rationals are written as
``"num/den"`` strings (integers as ``"n"``), floats as JSON numbers and
complex values as ``{"re": .., "im": ..}``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import canonical, densities, fusscatalan, genfun, hausdorff, seqcore, spectra
from .config import load_defaults
from .seqcore import EXACT, FLOAT, DiscreteMeasure, Sequence

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ parsing

def parse_scalar(text: str, mode: str):
    text = text.strip()
    if mode == FLOAT:
        try:
            return float(Fraction(text)) if "/" in text else float(text)
        except ValueError:
            raise UsageError(f"cannot parse {text!r} as a number")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(
            f"exact mode accepts rationals such as 3/2, 0.25 or 1e-3; got {text!r}. "
            "Use --precision float for irrational or transcendental values.")


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a complex number (use e.g. 0.1+0.2j)")


def read_terms(args) -> Sequence:
    mode = args.precision
    if args.terms is not None and args.file is not None:
        raise UsageError("give either --terms or --file, not both")
    if args.terms is not None:
        items = [s for s in args.terms.split(",") if s.strip()]
    elif args.file is not None:
        with open(args.file) as fh:
            items = [line.split(",")[0] for line in fh
                     if line.strip() and not line.lstrip().startswith("#")]
    else:
        raise UsageError("a sequence is required: --terms a,b,c or --file path")
    if not items:
        raise UsageError("empty sequence")
    return Sequence(tuple(parse_scalar(s, mode) for s in items), mode)


# ------------------------------------------------------------ serialisation

def encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Sequence):
        return [encode(t) for t in obj.terms]
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return encode(obj.to_dict())
    if hasattr(obj, "item"):
        return encode(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def decode_scalar(value):
    """Inverse of :func:`encode` for scalars."""
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return complex(value["re"], value["im"])
    return value


def emit(obj, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(encode(obj)) + "\n")
    elif fmt == "csv":
        if isinstance(obj, str):
            out.write(obj)
        elif isinstance(obj, (list, tuple, Sequence)):
            for v in (obj.terms if isinstance(obj, Sequence) else obj):
                out.write(f"{encode(v)}\n")
        else:
            out.write(json.dumps(encode(obj)) + "\n")
    else:
        enc = encode(obj)
        if isinstance(enc, list) and not any(isinstance(v, (list, dict)) for v in enc):
            out.write(" ".join(str(v) for v in enc) + "\n")
        elif isinstance(enc, (list, dict)):
            out.write(json.dumps(enc, indent=2) + "\n")
        else:
            out.write(f"{enc}\n")


# ------------------------------------------------------------------ commands

def _report_exit(report) -> int:
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_check(args, out):
    c = read_terms(args)
    fn = {"check-cm": seqcore.check_completely_monotone,
          "check-alt": seqcore.check_completely_alternating,
          "convex": seqcore.check_convex_moments,
          "concave": seqcore.check_concave_moments}[args.command]
    rep = fn(c, args.tol)
    emit(rep, args.format, out)
    return _report_exit(rep)


def cmd_check_dilated(args, out):
    c = read_terms(args)
    rep = seqcore.check_dilated_hausdorff(c, parse_scalar(args.tau, args.precision), args.tol)
    emit(rep, args.format, out)
    return _report_exit(rep)


def cmd_leading_diff(args, out):
    emit(seqcore.leading_differences(read_terms(args)), args.format, out)
    return EXIT_OK


def cmd_dilate(args, out):
    c = read_terms(args)
    b = seqcore.dilate_compound(c, parse_scalar(args.p, args.precision), args.tail_tol, args.decay)
    emit(b, args.format, out)
    return EXIT_OK


def _parse_atoms(text: str, mode: str) -> DiscreteMeasure:
    atoms = []
    for item in text.split(","):
        loc, _, mass = item.partition(":")
        if not mass:
            raise UsageError("atoms are written location:mass, e.g. 0:1/2,1:1/2")
        atoms.append((parse_scalar(loc, mode), parse_scalar(mass, mode)))
    tau = max(max(a for a, _ in atoms), 1)
    return DiscreteMeasure(tuple(atoms), tau=tau)


def cmd_compound(args, out):
    c = read_terms(args)
    if (args.atoms is None) == (args.outer is None):
        raise UsageError("give exactly one of --atoms (exchangeable mixing) or --outer (composition)")
    if args.atoms is not None:
        nu = _parse_atoms(args.atoms, args.precision)
        res = seqcore.exchangeable_compound(c, nu, args.tail_tol, args.decay)
    else:
        outer = Sequence(tuple(parse_scalar(s, args.precision) for s in args.outer.split(",")),
                         args.precision)
        res = seqcore.compound_compose(outer, c)
    emit(res, args.format, out)
    return EXIT_OK


def _params(args):
    return fusscatalan.FcParams(parse_scalar(args.p, args.precision),
                                parse_scalar(args.r, args.precision))


def cmd_fc(args, out):
    emit(fusscatalan.fc_sequence(_params(args), args.count - 1), args.format, out)
    return EXIT_OK


def cmd_binomial(args, out):
    emit(fusscatalan.binomial_sequence(_params(args), args.count - 1), args.format, out)
    return EXIT_OK


def cmd_fc_canonical(args, out):
    emit(fusscatalan.fc_canonical_sequence(parse_scalar(args.p, args.precision), args.count - 1),
         args.format, out)
    return EXIT_OK


def cmd_canonical(args, out):
    emit(canonical.canonical_from_moments(read_terms(args)), args.format, out)
    return EXIT_OK


def cmd_convpow(args, out):
    el = canonical.conv_group_power(read_terms(args), parse_scalar(args.r, args.precision))
    emit(el.terms, args.format, out)
    return EXIT_OK


def cmd_grouplaw(args, out):
    c = read_terms(args)
    ok = canonical.group_law_check(c, parse_scalar(args.r, args.precision),
                                   parse_scalar(args.s, args.precision))
    emit({"group_law": ok}, args.format, out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_bp_eval(args, out):
    z = parse_complex(args.z)
    p = float(Fraction(args.p))
    if args.r is None:
        val = genfun.eval_Bp(p, z, args.newton_tol)
        B = val
    else:
        val = genfun.eval_Bpr(p, float(Fraction(args.r)), z, args.newton_tol)
        B = genfun.eval_Bp(p, z, args.newton_tol)
    res = abs(B - 1 - z * B ** p) if p != 1 else abs(B * (1 - z) - 1)
    emit({"z": z, "value": val, "residual": res}, args.format, out)
    return EXIT_OK


def cmd_epr_eval(args, out):
    z = parse_complex(args.z)
    val = genfun.eval_Epr(float(Fraction(args.p)), float(Fraction(args.r)), z, args.newton_tol)
    emit({"z": z, "value": val}, args.format, out)
    return EXIT_OK


def _genfun_from_args(args) -> genfun.GenFun:
    p = float(Fraction(args.p))
    r = float(Fraction(args.r)) if args.r is not None else 1.0
    kind = args.kind
    if kind == "B":
        return genfun.GenFun.fc_B(p)
    if kind == "Bpr":
        return genfun.GenFun.fc_Bpr(p, r)
    if kind == "Epr":
        return genfun.GenFun.fc_Epr(p, r)
    if kind == "zBpr":
        return genfun.GenFun.fc_zBpr(p, r)
    raise UsageError(f"unknown generating function {kind!r}")


def cmd_pick_scan(args, out):
    f = _genfun_from_args(args)
    if args.arc is not None:
        region = genfun.Arc(args.arc)
        rep = genfun.pick_scan(f, region, args.nx, 1, args.tol)
    else:
        if args.rect is None:
            region = genfun.standard_rect(f.p)
        else:
            vals = [float(v) for v in args.rect.split(",")]
            if len(vals) != 4:
                raise UsageError("--rect takes re0,re1,im0,im1")
            region = genfun.Rect(*vals)
        rep = genfun.pick_scan(f, region, args.nx, args.ny, args.tol)
    d = rep.to_dict()
    if args.max_listed is not None:
        d["violations"] = d["violations"][:args.max_listed]
        d["violation_count"] = len(rep.violations)
    emit(d, args.format, out)
    return _report_exit(rep)


def cmd_atom_mass(args, out):
    if args.kind == "series":
        c = read_terms(args)
        f = genfun.GenFun.truncated_series(c, 1 / float(Fraction(args.tau)))
    else:
        f = _genfun_from_args(args)
    if args.side == "right":
        tau = float(Fraction(args.tau)) if args.tau else 1 / f.cut
        est, err = genfun.atom_mass_right(f, tau)
    else:
        est, err = genfun.atom_mass_left(f)
    emit({"side": args.side, "mass": est, "error": err}, args.format, out)
    return EXIT_OK


def cmd_density_moment(args, out):
    if args.csv:
        spec = densities.DensitySpec.from_csv(args.csv)
    else:
        spec = densities.DensitySpec(args.kind, p=float(Fraction(args.p)))
    vals = [densities.density_moment(spec, n, args.n_quad) for n in range(args.n + 1)] \
        if args.all else densities.density_moment(spec, args.n, args.n_quad)
    emit(vals, args.format, out)
    return EXIT_OK


def cmd_w2(args, out):
    emit(densities.w2(float(Fraction(args.t))), args.format, out)
    return EXIT_OK


def cmd_wp(args, out):
    emit(densities.w_p(float(Fraction(args.p)), float(Fraction(args.t)), args.wp_tol),
         args.format, out)
    return EXIT_OK


def cmd_binom_integral(args, out):
    emit(densities.binom_integral(float(Fraction(args.r)), args.k, args.n_quad),
         args.format, out)
    return EXIT_OK


def cmd_reconstruct(args, out):
    c = read_terms(args)
    n = args.order if args.order is not None else min(c.N, load_defaults().reconstruct_order)
    try:
        est = hausdorff.reconstruct_cdf(c, n, parse_scalar(args.tau, args.precision))
    except hausdorff.NotAMomentSequence as exc:
        n_, m, v = exc.witness
        emit({"error": str(exc), "witness": {"n": n_, "m": m, "value": v}}, "json", out)
        return EXIT_VIOLATION
    if args.format == "csv":
        emit(est.to_csv(), "csv", out)
    else:
        emit({"order": est.order, "tau": est.tau, "x": list(est.grid), "cdf": list(est.cdf)},
             args.format, out)
    return EXIT_OK


def cmd_spectra(args, out):
    cfg = spectra.SpectraConfig(args.m, args.N, args.n_max, args.trials, args.seed)
    est = spectra.sample_product_moments(cfg)
    flagged = spectra.compare_to_fc(est, args.rel_tol)
    d = json.loads(spectra.to_json(cfg, est))
    d["flagged"] = [e.n for e in flagged]
    emit(d, args.format, out)
    return EXIT_VIOLATION if flagged else EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    dflt = load_defaults()
    parser = argparse.ArgumentParser(
        prog="cmseq", description="Completely monotone sequences and Hausdorff moments.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=[EXACT, FLOAT], default=dflt.precision)
    common.add_argument("--format", choices=["json", "csv", "plain"], default="json")
    seq = argparse.ArgumentParser(add_help=False)
    seq.add_argument("--terms", help="comma-separated values, rationals as a/b")
    seq.add_argument("--file", help="CSV file, one value per line")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, parents=(), help=None):
        sp = sub.add_parser(name, parents=[common, *parents], help=help)
        sp.set_defaults(func=fn)
        return sp

    for name in ("check-cm", "check-alt", "convex", "concave"):
        sp = add(name, cmd_check, [seq])
        sp.add_argument("--tol", type=float, default=dflt.float_tol)
    sp = add("check-dilated", cmd_check_dilated, [seq])
    sp.add_argument("--tau", required=True)
    sp.add_argument("--tol", type=float, default=dflt.float_tol)
    add("leading-diff", cmd_leading_diff, [seq])
    sp = add("dilate", cmd_dilate, [seq])
    sp.add_argument("--p", required=True)
    sp.add_argument("--tail-tol", type=float, default=dflt.tail_tol)
    sp.add_argument("--decay", type=float, default=None,
                    help="assert |c_j| <= |c_N| decay^(j-N) beyond the prefix (0: finite support)")
    sp = add("compound", cmd_compound, [seq])
    sp.add_argument("--atoms", help="mixing measure as loc:mass,... (exchangeable compounding)")
    sp.add_argument("--outer", help="outer sequence b for composition G(F(z))")
    sp.add_argument("--tail-tol", type=float, default=dflt.tail_tol)
    sp.add_argument("--decay", type=float, default=None)
    for name, fn in (("fc", cmd_fc), ("binomial", cmd_binomial)):
        sp = add(name, fn)
        sp.add_argument("--p", required=True)
        sp.add_argument("--r", default="1")
        sp.add_argument("--count", type=int, default=10)
    sp = add("fc-canonical", cmd_fc_canonical)
    sp.add_argument("--p", required=True)
    sp.add_argument("--count", type=int, default=10)
    add("canonical", cmd_canonical, [seq])
    sp = add("convpow", cmd_convpow, [seq])
    sp.add_argument("--r", required=True)
    sp = add("grouplaw", cmd_grouplaw, [seq])
    sp.add_argument("--r", required=True)
    sp.add_argument("--s", required=True)
    sp = add("bp-eval", cmd_bp_eval)
    sp.add_argument("--p", required=True)
    sp.add_argument("--r", default=None)
    sp.add_argument("--z", required=True)
    sp.add_argument("--newton-tol", type=float, default=dflt.newton_tol)
    sp = add("epr-eval", cmd_epr_eval)
    sp.add_argument("--p", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--newton-tol", type=float, default=dflt.newton_tol)
    sp = add("pick-scan", cmd_pick_scan)
    sp.add_argument("--kind", choices=["B", "Bpr", "Epr", "zBpr"], default="B")
    sp.add_argument("--p", default="2")
    sp.add_argument("--r", default=None)
    sp.add_argument("--rect", help="re0,re1,im0,im1 (default: standard rectangle)")
    sp.add_argument("--arc", type=float, default=None, help="scan |z| = radius instead")
    sp.add_argument("--nx", type=int, default=dflt.scan_nx)
    sp.add_argument("--ny", type=int, default=dflt.scan_ny)
    sp.add_argument("--tol", type=float, default=dflt.pick_tol)
    sp.add_argument("--max-listed", type=int, default=None)
    sp = add("atom-mass", cmd_atom_mass)
    sp.add_argument("--kind", choices=["B", "Bpr", "Epr", "series"], default="B")
    sp.add_argument("--side", choices=["left", "right"], default="right")
    sp.add_argument("--p", default="2")
    sp.add_argument("--r", default=None)
    sp.add_argument("--tau", default=None)
    sp.add_argument("--terms")
    sp.add_argument("--file")
    sp = add("density-moment", cmd_density_moment)
    sp.add_argument("--kind", default="marchenko_pastur",
                    choices=["marchenko_pastur", "mu_pp", "w2_closed", "wp_inverse",
                             "arcsine_binomial"])
    sp.add_argument("--p", default="2")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--all", action="store_true", help="emit moments 0..n")
    sp.add_argument("--csv", help="custom density from a two-column t,w(t) file")
    sp.add_argument("--n-quad", type=int, default=dflt.n_quad)
    sp = add("w2", cmd_w2)
    sp.add_argument("--t", required=True)
    sp = add("wp", cmd_wp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--t", required=True)
    sp.add_argument("--wp-tol", type=float, default=dflt.wp_tol)
    sp = add("binom-integral", cmd_binom_integral)
    sp.add_argument("--r", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n-quad", type=int, default=dflt.n_quad)
    sp = add("reconstruct", cmd_reconstruct, [seq])
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--tau", default="1")
    sp = add("spectra", cmd_spectra)
    sp.add_argument("--m", type=int, default=dflt.spectra_m)
    sp.add_argument("--N", type=int, default=dflt.spectra_N)
    sp.add_argument("--n-max", type=int, default=dflt.spectra_n_max)
    sp.add_argument("--trials", type=int, default=dflt.spectra_trials)
    sp.add_argument("--seed", type=int, default=dflt.spectra_seed)
    sp.add_argument("--rel-tol", type=float, default=dflt.spectra_rel_tol)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        parser = build_parser()
    except ValueError as exc:
        sys.stderr.write(f"cmseq: {exc}\n")
        return EXIT_ERROR
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, ValueError, IndexError, ArithmeticError, RuntimeError,
            NotImplementedError, OSError) as exc:
        sys.stderr.write(f"cmseq {args.command}: {exc}\n")
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

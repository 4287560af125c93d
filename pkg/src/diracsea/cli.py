"""Command line front end: every computation as a subcommand.

Exit codes: 0 success, 1 usage error, 2 domain error (degenerate masses,
infeasible axial vector, wrong generation count), 3 numerical failure
(quadrature, fit, branch handling).  All output is deterministic for a given
flag set and seed; floats are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import axial as axial_mod
from . import chains, kernels, regularization as reg
from .errors import DomainError, NumericalFailure
from .spectra import MassSpectrum, log_constants, solve_mixing

FLOAT_FMT = "{:.12g}"


def _fmt(x) -> str:
    if x is None:
        return ""
    return FLOAT_FMT.format(x)


def parse_masses(text: str):
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mass list {text!r}")
    return vals


def parse_range(text: str):
    """lo:hi:n with n >= 1 and inclusive endpoints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:n, got {text!r}")
    lo, hi = float(parts[0]), float(parts[1])
    n = int(parts[2])
    if n < 1:
        raise argparse.ArgumentTypeError("range needs n >= 1")
    return np.linspace(lo, hi, n)


def parse_vector(text: str):
    vals = tuple(float(x) for x in text.split(","))
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("expected four components t,x,y,z")
    return vals


def _matrix_json(M: np.ndarray) -> dict:
    return {
        "rows": M.shape[0],
        "cols": M.shape[1],
        "data": [[float(v.real), float(v.imag)] for v in M.ravel()],
    }


def _print_json(obj, out):
    json.dump(obj, out, indent=None, separators=(",", ":"))
    out.write("\n")


def cmd_mixing(args, out):
    spec = MassSpectrum(args.masses)
    mix = solve_mixing(spec)
    logs = log_constants(spec, mix)
    _print_json({"d": list(mix.d), "s3": logs.s3,
                 "sigma0": logs.sigma0, "sigma2": logs.sigma2}, out)
    return 0


def cmd_constants(args, out):
    spec = MassSpectrum(args.masses)
    model = reg.model_from_name(args.reg)
    if args.show_fractions:
        from .fraction_algebra import encode_basic_fractions
        for i, frac_sum in enumerate(encode_basic_fractions()):
            print(f"c{i}: {frac_sum.render()}", file=sys.stderr)
    eps_grid = np.geomspace(args.eps_min, args.eps_max, args.eps_points)
    r0, r2, r3 = reg.basic_ratios(model, eps_grid=eps_grid)
    fc = reg.assemble_field_constants(spec, r0, r2, r3)
    _print_json({"r0": fc.r0, "r2": fc.r2, "r3": fc.r3,
                 "sigma0": fc.sigma0, "sigma2": fc.sigma2,
                 "C0": fc.C0, "M2": fc.M2, "e2": fc.e2,
                 "M": fc.M, "e": fc.e}, out)
    return 0


def cmd_scan(args, out):
    model = reg.model_from_name(args.reg)
    rows, _ = reg.scan(model, args.m2, args.m3)
    out.write("m2_over_m1,m3_over_m1,e,M_over_m1\n")
    for row in rows:
        out.write(f"{_fmt(row.ratio2)},{_fmt(row.ratio3)},"
                  f"{_fmt(row.e)},{_fmt(row.M_over_m1)}\n")
    return 0


def cmd_kernel(args, out):
    spec = MassSpectrum(args.masses)
    header = {"closed": "q2,value", "quad": "q2,value",
              "both": "q2,value,value_quad,abs_diff"}[args.method]
    out.write(header + "\n")
    if args.method in ("closed", "quad"):
        for pt in kernels.kernel_points(spec, args.p, args.q2, args.method):
            out.write(f"{_fmt(pt.q2)},{_fmt(pt.value)}\n")
    else:
        closed = kernels.kernel_points(spec, args.p, args.q2, "closed")
        quadr = kernels.kernel_points(spec, args.p, args.q2, "quad")
        for pc, pq in zip(closed, quadr):
            out.write(f"{_fmt(pc.q2)},{_fmt(pc.value)},{_fmt(pq.value)},"
                      f"{_fmt(abs(pc.value - pq.value))}\n")
    return 0


def cmd_uehling(args, out):
    spec = MassSpectrum(args.masses)
    prof = kernels.static_profile(spec, args.Z, args.e2, args.r)
    out.write("r,coulomb,correction\n")
    for r, coul, corr in zip(prof.r, prof.coulomb, prof.correction):
        out.write(f"{_fmt(r)},{_fmt(coul)},{_fmt(corr)}\n")
    return 0


def cmd_axial(args, out):
    spec = MassSpectrum(args.masses)
    sol = axial_mod.construct(spec, args.u)
    _print_json({"case": sol.case, "feasible": True,
                 "residuals": {k: float(v) for k, v in sol.residuals.items()},
                 "U": _matrix_json(sol.U)}, out)
    return 0


def cmd_smax(args, out):
    spec = MassSpectrum(args.masses)
    _print_json({"smax": axial_mod.smax(spec),
                 "bound": axial_mod.feasibility_bound(spec)}, out)
    return 0


def cmd_chain(args, out):
    if args.chain_cmd != "selftest":
        raise argparse.ArgumentTypeError("unknown chain subcommand")
    worst = chains.selftest(trials=args.trials, seed=args.seed)
    thresholds = {"pairing": 1e-9, "same_spectrum": 1e-9, "projectors": 1e-11,
                  "adjoint_swap": 1e-11, "chiral_moduli": 1e-12, "q_factor": 1e-14}
    all_ok = True
    for name, value in worst.items():
        ok = value <= thresholds[name]
        all_ok = all_ok and ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: worst residual "
                  f"{FLOAT_FMT.format(value)} (tol {thresholds[name]:g})\n")
    out.write(("OK" if all_ok else "FAILED") + "\n")
    return 0 if all_ok else 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diracsea",
                                description="continuum-limit Dirac sea calculator")
    p.add_argument("--seed", type=int, default=0, help="master seed for random suites")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("mixing", help="generation mixing coefficients and log constants")
    sp.add_argument("--masses", type=parse_masses, required=True)
    sp.set_defaults(func=cmd_mixing)

    sp = sub.add_parser("constants", help="regularization ratios and field constants")
    sp.add_argument("--masses", type=parse_masses, required=True)
    sp.add_argument("--reg", choices=["exp", "cutoff"], required=True)
    sp.add_argument("--eps-min", type=float, default=1e-6)
    sp.add_argument("--eps-max", type=float, default=1e-4)
    sp.add_argument("--eps-points", type=int, default=8)
    sp.add_argument("--show-fractions", action="store_true",
                    help="print the encoded basic fractions to stderr")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("scan", help="coupling/mass surface over mass ratios")
    sp.add_argument("--reg", choices=["exp", "cutoff"], required=True)
    sp.add_argument("--m2", type=parse_range, required=True, metavar="lo:hi:n")
    sp.add_argument("--m3", type=parse_range, required=True, metavar="lo:hi:n")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("kernel", help="vacuum polarization kernels")
    sp.add_argument("--masses", type=parse_masses, required=True)
    sp.add_argument("--p", type=int, choices=[0, 2], required=True)
    sp.add_argument("--q2", type=parse_range, required=True, metavar="lo:hi:n")
    sp.add_argument("--method", choices=["closed", "quad", "both"], default="closed")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("uehling", help="static Coulomb correction profile")
    sp.add_argument("--masses", type=parse_masses, required=True)
    sp.add_argument("--Z", type=float, required=True)
    sp.add_argument("--e2", type=float, required=True)
    sp.add_argument("--r", type=parse_range, required=True, metavar="lo:hi:n")
    sp.set_defaults(func=cmd_uehling)

    sp = sub.add_parser("axial", help="construct the local axial transformation")
    sp.add_argument("--masses", type=parse_masses, required=True)
    sp.add_argument("--u", type=parse_vector, required=True, metavar="t,x,y,z")
    sp.set_defaults(func=cmd_axial)

    sp = sub.add_parser("smax", help="axial feasibility functional")
    sp.add_argument("--masses", type=parse_masses, required=True)
    sp.set_defaults(func=cmd_smax)

    sp = sub.add_parser("chain", help="closed-chain spectral checks")
    chain_sub = sp.add_subparsers(dest="chain_cmd", required=True)
    st = chain_sub.add_parser("selftest")
    st.add_argument("--trials", type=int, default=1000)
    st.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_chain)

    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())

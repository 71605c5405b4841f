"""Command-line surface: every pipeline behind one executable.

Subcommands: solve, scan, eigenfunction, sweep-lambda, swp, project,
discont, fd, validate.  Results go to a JSON document (stdout or
--out); curve data goes to CSV via --csv.  Numeric output uses repr
round-tripping and a fixed field order, so identical configurations
produce byte-identical documents.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 numerical
failure.
"""

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import DomainError, TrapwellError, ValidationError
from .well import (ELECTRON_MASS_KG, WellSpec, nondimensionalize, well_from_ev,
                   zone_of)

_USAGE_EXIT = 1
_VALIDATION_EXIT = 2
_NUMERICAL_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.stderr.write("known flags:\n")
        for action in self._actions:
            if action.option_strings:
                sys.stderr.write("  " + ", ".join(action.option_strings) + "\n")
        raise SystemExit(_USAGE_EXIT)


def _add_well_flags(p):
    p.add_argument("--v1", type=float, help="nondimensional outer depth v1")
    p.add_argument("--v2", type=float, help="nondimensional outer depth v2")
    p.add_argument("--lambda", dest="lam", type=float, help="ramp ratio l/L")
    p.add_argument("--V1-eV", dest="v1_ev", type=float, help="dimensional depth V1 in eV")
    p.add_argument("--V2-eV", dest="v2_ev", type=float, help="dimensional depth V2 in eV")
    p.add_argument("--L-angstrom", dest="l_half", type=float, help="half width L in Angstrom")
    p.add_argument("--l-angstrom", dest="l_ramp", type=float, help="ramp width l in Angstrom")
    p.add_argument("--mass", default="electron",
                   help="'electron' or a particle mass in kg")
    p.add_argument("--out", help="write the JSON document here instead of stdout")
    p.add_argument("--csv", help="write curve data as CSV here")


def _tolerance(value):
    x = float(value)
    if not (1e-14 <= x <= 1e-3):
        raise argparse.ArgumentTypeError("tolerances must lie in [1e-14, 1e-3]")
    return x


def _mass_kg(spec):
    if spec == "electron":
        return ELECTRON_MASS_KG
    return float(spec)


def _resolve_well(args):
    """WellSpec from either input group; mirrors v1 < v2 wells."""
    nond = [args.v1, args.v2, args.lam]
    dim = [args.v1_ev, args.v2_ev, args.l_half, args.l_ramp]
    have_nond = all(v is not None for v in nond)
    have_dim = all(v is not None for v in dim)
    if any(v is not None for v in nond) and any(v is not None for v in dim):
        raise ValidationError("give either the nondimensional triplet or the "
                              "dimensional flags, not both")
    if have_nond:
        v1, v2, lam = args.v1, args.v2, args.lam
        meta = {}
    elif have_dim:
        hi, lo = max(args.v1_ev, args.v2_ev), min(args.v1_ev, args.v2_ev)
        dw = well_from_ev(hi, lo, args.l_half, args.l_ramp, _mass_kg(args.mass))
        w0 = nondimensionalize(dw)
        # undo the sort so the mirroring bookkeeping below sees the raw order
        v1 = w0.v1 if args.v1_ev >= args.v2_ev else w0.v2
        v2 = w0.v2 if args.v1_ev >= args.v2_ev else w0.v1
        lam = w0.lam
        meta = {"nondimensionalized_from_eV": [args.v1_ev, args.v2_ev]}
    else:
        raise ValidationError("exactly one of the nondimensional "
                              "(--v1 --v2 --lambda) or dimensional "
                              "(--V1-eV --V2-eV --L-angstrom --l-angstrom) "
                              "input groups is required")
    mirrored = v1 < v2
    if mirrored:
        v1, v2 = v2, v1
    meta["mirrored"] = mirrored
    return WellSpec(v1=v1, v2=v2, lam=lam), meta


def _meta(args, extra=None):
    meta = {"version": __version__,
            "flags": sorted(f"{k}={v}" for k, v in sorted(vars(args).items())
                            if k not in ("func",) and v is not None)}
    threads = os.environ.get("TRAPWELL_THREADS")
    if threads:
        meta["threads_cap"] = threads
    if extra:
        meta.update(extra)
    return meta


def _emit(doc, args):
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow(["" if (isinstance(v, float) and not math.isfinite(v))
                         else (repr(v) if isinstance(v, float) else v) for v in row])


def _records_json(records):
    return [{"n": r.index_n, "beta": r.beta, "residual": r.residual,
             "parity": r.parity, "newton_iterations": r.newton_iterations,
             "threshold": r.threshold} for r in records]


def _cmd_solve(args):
    from .spectrum import absence_condition, find_eigenvalues, theta
    w, wmeta = _resolve_well(args)
    if w.lam == 0:
        raise ValidationError("lambda = 0 is the exact square well; use the "
                              "'swp' subcommand")
    records = find_eigenvalues(w, residual_tol=args.tol)
    doc = {"well": w.to_dict(),
           "eigenvalues": _records_json(records),
           "diagnostics": {"theta_at_v2": theta(w, w.v2 * (1 - 1e-12)),
                           "absence_condition": absence_condition(w)},
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_scan(args):
    from .spectrum import scan_curves
    w, wmeta = _resolve_well(args)
    curves = scan_curves(w, grid_points=args.points)
    if args.csv:
        rows = zip(curves.beta_over_v2, curves.d_raw, curves.d_circ,
                   curves.d_star, curves.theta)
        _write_csv(args.csv, ["beta_over_v2", "d_raw", "d_circ", "d_star", "theta"],
                   [[float(a), float(b), float(c), float(d), float(e)]
                    for a, b, c, d, e in rows])
    doc = {"well": w.to_dict(),
           "eigenvalues": [],
           "diagnostics": {"points": int(curves.beta_over_v2.size),
                           "theta_end": float(curves.theta[-1])},
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_eigenfunction(args):
    from .eigenfunction import (build_solution, eval_d2phi, eval_dphi, eval_phi,
                                junction_mismatches)
    from .spectrum import find_eigenvalues
    w, wmeta = _resolve_well(args)
    records = find_eigenvalues(w)
    if not records:
        raise ValidationError("well has no bound states")
    if not (1 <= args.state <= len(records)):
        raise ValidationError(f"state must lie in 1..{len(records)}")
    rec = records[args.state - 1]
    sol = build_solution(w, rec)
    mism = junction_mismatches(sol)
    if args.csv:
        span = (1.0 + w.lam) + 8.0 / math.sqrt(min(sol.k1, sol.k2))
        xs = np.linspace(-span, span, args.samples)
        if wmeta.get("mirrored"):
            phi = eval_phi(sol, -xs)
            dphi = -eval_dphi(sol, -xs)
            d2phi = eval_d2phi(sol, -xs)
            zones = [zone_of(w, -x) for x in xs]
        else:
            phi = eval_phi(sol, xs)
            dphi = eval_dphi(sol, xs)
            d2phi = eval_d2phi(sol, xs)
            zones = [zone_of(w, x) for x in xs]
        _write_csv(args.csv, ["xi", "phi", "dphi", "d2phi", "zone"],
                   [[float(x), float(p), float(dp), float(d2), z]
                    for x, p, dp, d2, z in zip(xs, phi, dphi, d2phi, zones)])
    doc = {"well": w.to_dict(),
           "eigenvalues": _records_json([rec]),
           "diagnostics": {"junction_mismatch": mism,
                           "coefficients": {"c0": sol.coeffs.c0, "d0": sol.coeffs.d0,
                                            "a0": sol.coeffs.a0, "b0": sol.coeffs.b0,
                                            "b1p": sol.coeffs.b1p, "b2p": sol.coeffs.b2p,
                                            "bt1": sol.coeffs.bt1, "bt2": sol.coeffs.bt2}},
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_sweep(args):
    from .swlimit import lambda_sweep
    w, wmeta = _resolve_well(args)
    lambdas = [float(t) for t in args.lambdas.split(",")]
    rows = lambda_sweep(w.v1, w.v2, lambdas)
    if args.csv:
        _write_csv(args.csv,
                   ["lambda", "n", "beta_twp", "beta_swp", "abs_dev",
                    "d2jump_left", "d2jump_right"],
                   [[r.lam, r.n, r.beta_twp, r.beta_swp, r.abs_dev,
                     r.d2jump_left, r.d2jump_right] for r in rows])
    doc = {"well": {"v1": w.v1, "v2": w.v2},
           "eigenvalues": [],
           "diagnostics": {"rows": [
               {"lambda": r.lam, "n": r.n, "beta_twp": r.beta_twp,
                "beta_swp": r.beta_swp, "abs_dev": r.abs_dev,
                "d2jump_left": r.d2jump_left, "d2jump_right": r.d2jump_right,
                "error": r.error} for r in rows]},
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_swp(args):
    from .swlimit import swp_eigenvalues, swp_exists, swp_solution
    w, wmeta = _resolve_well(args)
    records = swp_eigenvalues(w.v1, w.v2)
    sols = [swp_solution(w.v1, w.v2, r) for r in records if r.beta < w.v2]
    doc = {"well": {"v1": w.v1, "v2": w.v2, "lambda": 0.0},
           "eigenvalues": _records_json(records),
           "diagnostics": {"exists": swp_exists(w.v1, w.v2),
                           "d2_jumps": [{"n": s.record.index_n,
                                         "left": s.d2_jump_left,
                                         "right": s.d2_jump_right} for s in sols]},
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_project(args):
    from .eigenfunction import eigenbasis
    from .swlimit import swp_eigenvalues, swp_solution
    from .wavepacket import evolve, project_triangular, triangular_coefficients
    w, wmeta = _resolve_well(args)
    if w.lam > 0:
        basis = eigenbasis(w)
    else:
        basis = [swp_solution(w.v1, w.v2, r) for r in swp_eigenvalues(w.v1, w.v2)]
    if args.initial != "triangular":
        raise ValidationError("only the built-in 'triangular' initial function "
                              "is available from the command line")
    proj = project_triangular(basis)
    closed = triangular_coefficients(basis)
    if args.csv:
        _write_csv(args.csv, ["n", "c_n", "P_n"],
                   [[i + 1, float(c), float(p)]
                    for i, (c, p) in enumerate(zip(proj.coefficients,
                                                   proj.probabilities))])
    diag = {"probability_sum": proj.probability_sum,
            "reconstruction_error": proj.reconstruction_error,
            "closed_form_max_dev": float(np.max(np.abs(closed - proj.coefficients)))}
    if args.tau is not None:
        span = 1.0 + w.lam + 4.0
        xs = np.linspace(-span, span, 801)
        state = evolve(proj, basis, args.tau, xs)
        diag["norm_at_tau"] = state.norm
        if args.evolve_csv:
            _write_csv(args.evolve_csv, ["xi", "re_psi", "im_psi", "abs2_psi"],
                       [[float(x), float(p.real), float(p.imag),
                         float(p.real ** 2 + p.imag ** 2)]
                        for x, p in zip(xs, state.psi)])
    doc = {"well": w.to_dict(),
           "eigenvalues": [],
           "coefficients": [float(c) for c in proj.coefficients],
           "probabilities": [float(p) for p in proj.probabilities],
           "diagnostics": diag,
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_discont(args):
    from .discontinuity import build_discontinuous, continuous_counterpart, overlap
    from .swlimit import swp_eigenvalues, swp_solution
    w, wmeta = _resolve_well(args)
    records = swp_eigenvalues(w.v1, w.v2)
    if not records:
        raise ValidationError("well has no bound states")
    if not (1 <= args.state <= len(records)):
        raise ValidationError(f"state must lie in 1..{len(records)}")
    rec = records[args.state - 1]
    cont = swp_solution(w.v1, w.v2, rec)
    disc = build_discontinuous(w.v1, w.v2, rec, args.jump_left, args.jump_right)
    both = overlap(continuous_counterpart(cont), disc)
    if args.csv:
        span = 1.0 + 6.0 / math.sqrt(min(disc.k1, disc.k2))
        xs = np.linspace(-span, span, 801)
        pc = cont.phi(xs)
        pd = disc.phi(xs)
        _write_csv(args.csv,
                   ["xi", "phi_continuous", "phi_discontinuous",
                    "phi2_continuous", "phi2_discontinuous"],
                   [[float(x), float(a), float(b), float(a * a), float(b * b)]
                    for x, a, b in zip(xs, pc, pd)])
    doc = {"well": {"v1": w.v1, "v2": w.v2, "lambda": 0.0},
           "eigenvalues": _records_json([rec]),
           "diagnostics": {"jumps": [disc.jump_left, disc.jump_right],
                           "derivative_jumps": [disc.djump_left, disc.djump_right],
                           "d2_jumps": [disc.d2jump_left, disc.d2jump_right],
                           "self_overlap": overlap(disc, disc).integral,
                           "overlap_with_continuous": {"integral": both.integral,
                                                       "t1": both.t1, "t2": both.t2}},
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_fd(args):
    from .fdsolver import build_grid, fd_eigenvalues
    from .spectrum import find_eigenvalues
    w, wmeta = _resolve_well(args)
    grid = build_grid(w, points_per_zone=args.points_per_zone,
                      decay_margin=args.decay_margin)
    pairs = fd_eigenvalues(w, grid, order=args.order)
    diag = {"points": int(grid.points.size),
            "ramp_collapsed": grid.ramp_collapsed,
            "cut_left": grid.cut_left, "cut_right": grid.cut_right}
    if args.compare and w.lam > 0:
        ana = find_eigenvalues(w)
        diag["analytic_relative_deviation"] = [
            abs(b - r.beta) / r.beta for (b, _), r in zip(pairs, ana)]
    doc = {"well": w.to_dict(),
           "eigenvalues": [{"n": i + 1, "beta": float(b)}
                           for i, (b, _) in enumerate(pairs)],
           "diagnostics": diag,
           "meta": _meta(args, wmeta)}
    _emit(doc, args)
    return 0


def _cmd_validate(args):
    from .fdsolver import build_grid, fd_eigenvalues
    from .spectrum import find_eigenvalues
    from .swlimit import swp_eigenvalues
    checks = []

    def check(name, ok, detail=""):
        checks.append((name, bool(ok)))
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))

    w = WellSpec(1.0, 0.5, 1.0)
    recs = find_eigenvalues(w)
    check("single-eigenvalue well has one state", len(recs) == 1)
    if recs:
        check("beta = 0.31447 within 1e-5", abs(recs[0].beta - 0.31447) <= 1e-5,
              f"beta={recs[0].beta:.7f}")
        grid = build_grid(w, points_per_zone=201)
        fd = fd_eigenvalues(w, grid, order=6)
        check("finite-difference solver agrees",
              len(fd) == 1 and abs(fd[0][0] - recs[0].beta) <= 1e-5)
    counts = [(WellSpec(26.2468, 26.2468, 1e-9), 4),
              (WellSpec(225.0, 225.0, 1e-9), 10),
              (WellSpec(10.0, 10.0, 0.5), 3),
              (WellSpec(1.0, 0.15, 1.0), 0)]
    for wspec, expected in counts:
        n = len(find_eigenvalues(wspec))
        check(f"state count {expected} for (v1={wspec.v1:g}, v2={wspec.v2:g}, "
              f"lambda={wspec.lam:g})", n == expected, f"found {n}")
    reed = swp_eigenvalues(26.2468, 26.2468)
    twp = find_eigenvalues(WellSpec(26.2468, 26.2468, 1e-9))
    ok = len(reed) == len(twp) and all(
        abs(a.beta - b.beta) / b.beta <= 1e-6 for a, b in zip(twp, reed))
    check("virtual square well matches the closed-form spectrum", ok)
    failures = sum(1 for _, ok in checks if not ok)
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return 0 if failures == 0 else _NUMERICAL_EXIT


def build_parser():
    parser = _Parser(prog="trapwell",
                     description="Bound states of trapezoidal and square wells")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="eigenvalues of a trapezoidal well")
    _add_well_flags(p)
    p.add_argument("--tol", type=_tolerance, default=1e-10,
                   help="eigenvalue residual tolerance, within [1e-14, 1e-3]")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("scan", help="D, D°, D*, θ curves over (0, v2)")
    _add_well_flags(p)
    p.add_argument("--points", type=int, default=512)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("eigenfunction", help="sample one eigenfunction")
    _add_well_flags(p)
    p.add_argument("--state", type=int, default=1)
    p.add_argument("--samples", type=int, default=1001)
    p.set_defaults(func=_cmd_eigenfunction)

    p = sub.add_parser("sweep-lambda", help="trapezoid-to-square-well convergence")
    _add_well_flags(p)
    p.add_argument("--lambdas", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6",
                   help="descending comma-separated list")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("swp", help="closed-form square-well spectrum")
    _add_well_flags(p)
    p.set_defaults(func=_cmd_swp)

    p = sub.add_parser("project", help="expand an initial wavefunction")
    _add_well_flags(p)
    p.add_argument("--initial", default="triangular")
    p.add_argument("--tau", type=float, default=None,
                   help="also evolve to this nondimensional time")
    p.add_argument("--evolve-csv", dest="evolve_csv",
                   help="CSV path for the evolved wavefunction samples")
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("discont", help="square-well eigenfunction with jumps")
    _add_well_flags(p)
    p.add_argument("--state", type=int, default=1)
    p.add_argument("--jump-left", dest="jump_left", type=float, default=0.0)
    p.add_argument("--jump-right", dest="jump_right", type=float, default=0.0)
    p.set_defaults(func=_cmd_discont)

    p = sub.add_parser("fd", help="finite-difference cross-check solver")
    _add_well_flags(p)
    p.add_argument("--points-per-zone", dest="points_per_zone", type=int, default=501)
    p.add_argument("--order", type=int, default=6, choices=(2, 4, 6))
    p.add_argument("--decay-margin", dest="decay_margin", type=float, default=40.0)
    p.add_argument("--compare", action="store_true",
                   help="also report deviation from the analytic solver")
    p.set_defaults(func=_cmd_fd)

    p = sub.add_parser("validate", help="run the built-in reference fixtures")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else _USAGE_EXIT
    try:
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return _VALIDATION_EXIT
    except TrapwellError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return _NUMERICAL_EXIT


if __name__ == "__main__":
    raise SystemExit(main())

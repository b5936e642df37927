"""Command line interface.

analyze    full finite-radius report for a built-in scenario or file inputs
indicator  exact asymptotic coefficients and certificates for a catalogue
check      randomized cross-verification suites

Exit codes for analyze: 0 all rows certified and invariants hold,
1 an invariant is violated, 2 some rows are uncertified.  Unreadable
or malformed input files exit 1 with a one-line diagnostic and no
partial output; bad invocations exit 2.

CURVEDIST_WORKERS (default 1) sets the number of radii analyzed
concurrently by analyze; output order does not depend on it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter

import sympy as sp

from . import fileio
from .indicator import (
    asymptotic_certificate,
    characteristic_coefficient,
    maximal_admissible_sum,
    sector_decomposition,
    special_basis_profile,
)
from .nevanlinna import (
    QuadratureSpec,
    RadialGrid,
    cartan_subreport,
    smt_report,
)
from .scenarios import BUILTIN, get_builtin


def _fixed(x, nd=6):
    return ("%%.%df" % nd) % float(x)


def _analyze(args):
    if args.scenario:
        sc = get_builtin(args.scenario)
        curve, system = sc.curve, sc.system
        grid = sc.grid
        quad = sc.quad
        admissible = sc.admissible_sets
    else:
        if not (args.curve and args.planes):
            print("analyze: need --scenario or both --curve and --planes",
                  file=sys.stderr)
            return 2
        curve = fileio.load_curve(args.curve)
        system = fileio.load_planes(args.planes, dim=curve.n + 1)
        grid = RadialGrid.log_spaced(args.rmin or 2.0, args.rmax or 50.0,
                                     args.radii or 8)
        quad = QuadratureSpec(tol=args.tol or 1e-3, prec=args.prec or 30)
        admissible = {}
    if args.rmin and args.rmax and args.radii:
        grid = RadialGrid.log_spaced(args.rmin, args.rmax, args.radii)
    if args.tol or args.prec:
        quad = QuadratureSpec(tol=args.tol or quad.tol,
                              prec=args.prec or quad.prec)
    print("curve: %s   system: %s   planes: %d   tol: %g   prec: %d"
          % (curve.label, system.name, len(system), quad.tol, quad.prec))
    try:
        workers = max(1, int(os.environ.get("CURVEDIST_WORKERS", "1")))
    except ValueError:
        workers = 1
    report = smt_report(curve, system, grid, quad, workers=workers)
    print("%-10s %-12s %-12s %-12s %s" % ("r", "T", "S_thm1", "S/T", "status"))
    for row in report.rows:
        print("%-10.5g %-12.6g %-12.6g %-12.6g %s"
              % (row.r_used, row.T, row.S_thm1,
                 row.S_thm1 / row.T if row.T else float("nan"), row.status))
    for name, names in admissible.items():
        sub = cartan_subreport(report, names)
        top = sub[-1]
        print("admissible subset %-8s sum m/T at r=%.4g: %.6g   "
              "S_cartan: %.6g" % (name, top["r"], top["ratio"],
                                  top["S_cartan"]))
    if report.invariant_violations:
        for v in report.invariant_violations:
            print("invariant violation: %s" % v)
    if args.out:
        fileio.write_csv(report, args.out)
        print("wrote %s" % args.out)
    if args.json:
        fileio.write_json(report, args.json)
        print("wrote %s" % args.json)
    if report.invariant_violations:
        return 1
    if any(not row.certified for row in report.rows):
        return 2
    return 0


def _indicator(args):
    if args.family in BUILTIN:
        sc = get_builtin(args.family)
        family = sc.family
        h_w = sc.h_wronskian
        jumps = sc.jumps
        dependent = sc.dependent_sets
        if family is None:
            print("scenario %s has no indicator catalogue" % args.family,
                  file=sys.stderr)
            return 2
    else:
        family, h_w, jumps, dependent = fileio.load_family(args.family)
    names = family.names()
    print("family: %s   members: %s   order: %s"
          % (args.family, " ".join(names), family.rho))
    env = family.upper_envelope()
    decomp = sector_decomposition(family)
    best, selection = maximal_admissible_sum(family, dependent)
    t_coeff = characteristic_coefficient(env)
    print("characteristic coefficient: %s = %s"
          % (t_coeff, _fixed(sp.N(t_coeff, 15))))
    print("maximal admissible proximity sum bound: %s = %s"
          % (best, _fixed(sp.N(best, 15))))
    counts = Counter(selection)
    print("  attained by: %s" % ", ".join(
        "%s x%d" % (nm, counts[nm]) for nm in sorted(counts)
    ))
    if jumps is None:
        print("no dimension jumps declared: skipping basis certificates")
        return 0
    profile = special_basis_profile(decomp, jumps, sum(jumps))
    cert = asymptotic_certificate(profile, h_w, dict(family.members))
    print("flat proximity coefficients: %s" % ", ".join(
        "m_%d: %s" % (k + 1, c) for k, c in enumerate(cert.mk_coeffs)
    ))
    print("member proximity coefficients:")
    for nm in names:
        c = cert.m_coeffs[nm]
        print("  %-4s %s = %s" % (nm, c, _fixed(sp.N(c, 15))))
    print("counting coefficient of the Wronskian: %s" % cert.N1_coeff)
    print("balance residual (sum m_k + N1 - dim*T): %s [%s]"
          % (cert.balance_residual,
             "exact zero" if cert.balance_holds else "NONZERO"))
    print("sector identity residuals [%s]:" % (
        "exact zero" if cert.lemma_identity_holds else "NONZERO"))
    if args.certify:
        for lo, hi, ra, rb in cert.lemma_sector_residuals:
            print("  sector (%s, %s): (%s, %s)" % (lo, hi, ra, rb))
        for sec in decomp.sectors:
            layers = " < ".join(
                "{%s}" % ",".join(g) for _, g in sec.groups
            )
            print("  ordering on (%s, %s): %s" % (sec.lo, sec.hi, layers))
    if not (cert.balance_holds and cert.lemma_identity_holds):
        return 1
    return 0


def _check(args):
    from .checks import run_all

    ok, rows, failure = run_all(seed=args.seed, samples=args.samples)
    print("%-26s %-28s %-14s %s" % ("suite", "case", "worst", "ok"))
    for rec in rows:
        worst = rec.get("min_ratio", rec.get("max_residual"))
        print("%-26s %-28s %-14.6g %s"
              % (rec["suite"], rec["case"], worst,
                 "ok" if rec["ok"] else "FAIL"))
    if failure is not None:
        with open(args.replay, "w") as fh:
            json.dump(failure, fh, sort_keys=True, indent=1)
        print("failing case written to %s" % args.replay)
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="curvedist",
        description="value distribution of holomorphic curves: finite-radius "
                    "reports, exact asymptotic certificates, cross checks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="finite-radius report")
    pa.add_argument("--scenario", choices=sorted(BUILTIN))
    pa.add_argument("--curve", help="curve JSON file")
    pa.add_argument("--planes", help="hyperplane system JSON file")
    pa.add_argument("--rmin", type=float)
    pa.add_argument("--rmax", type=float)
    pa.add_argument("--radii", type=int, help="number of grid radii")
    pa.add_argument("--tol", type=float)
    pa.add_argument("--prec", type=int)
    pa.add_argument("--out", help="CSV report path")
    pa.add_argument("--json", help="JSON report path")
    pa.set_defaults(fn=_analyze)

    pi = sub.add_parser("indicator", help="exact asymptotic certificates")
    pi.add_argument("--family", required=True,
                    help="airy, exp123, or a family JSON file")
    pi.add_argument("--certify", action="store_true",
                    help="print per-sector identity residuals and orderings")
    pi.set_defaults(fn=_indicator)

    pc = sub.add_parser("check", help="randomized cross-verification")
    pc.add_argument("--seed", type=int, default=1)
    pc.add_argument("--samples", type=int, default=10_000)
    pc.add_argument("--replay", default="check-failure.json")
    pc.set_defaults(fn=_check)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, RuntimeError) as exc:
        # bad file contents, unreadable paths, precision exhaustion: a
        # diagnostic and exit 1, before any output file is written
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

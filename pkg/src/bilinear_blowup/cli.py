"""Command-line interface.

Subcommands: exponent-map, derive, lemma-suite, blowup, selftest.
Exit codes: 0 pass, 1 check failure, 2 contradiction / invalid case,
3 configuration or certification error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .bumps import BumpCertificationError, make_phi, make_phi_tilde
from .derivation import Conclusion, derive_necessity, replay_trace, trace_to_json, trace_to_text
from .exponents import (
    ExponentTriple,
    base_order,
    classify_region,
    inv_exponent,
    rational_grid,
)
from .harness import (
    CONSISTENT,
    ConfigError,
    ExperimentConfig,
    emit_report,
    parse_config_file,
    run_blowup_experiment,
    run_lemma_suite,
)

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONTRADICTION = 2
EXIT_CONFIG = 3


def _cmd_exponent_map(args) -> int:
    limit = Fraction(3, 2) if args.family == "J" else Fraction(1)
    axis = rational_grid(limit, args.grid)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write("inv_p1,inv_p2,region,on_boundary,order\n")
        for x in axis:
            for y in axis:
                region = classify_region((x, y), args.family)
                order = base_order((x, y), args.n, args.family)
                out.write(
                    f"{x.numerator}/{x.denominator},{y.numerator}/{y.denominator},"
                    f"{region.family}{region.index},{int(region.on_boundary)},"
                    f"{order.numerator}/{order.denominator}\n"
                )
    finally:
        if args.out:
            out.close()
    return EXIT_PASS


def _cmd_derive(args) -> int:
    triple = ExponentTriple(
        inv_exponent(args.p1), inv_exponent(args.p2), inv_exponent(args.p)
    )
    trace = derive_necessity(triple, Fraction(args.rho), args.n)
    replay_trace(trace)
    print(trace_to_json(trace) if args.json else trace_to_text(trace))
    if trace.conclusion is Conclusion.CONTRADICTION:
        return EXIT_CONTRADICTION
    if trace.conclusion is Conclusion.FORCES_EQUALITY and trace.satisfied:
        return EXIT_PASS
    return EXIT_CHECK_FAILURE


def _write_reports(report, out_dir, fmt):
    import os

    os.makedirs(out_dir, exist_ok=True)
    if fmt in ("csv", "all"):
        emit_report(report, "csv", os.path.join(out_dir, "report.csv"))
    if fmt in ("json", "all"):
        emit_report(report, "json", os.path.join(out_dir, "report.json"))
    if fmt in ("plotdata", "all"):
        emit_report(report, "plotdata", os.path.join(out_dir, "plotdata"))


def _cmd_lemma_suite(args) -> int:
    config = parse_config_file(args.config)
    report = run_lemma_suite(config)
    for line in report.summary_lines():
        print(line)
    if config.out_dir:
        _write_reports(report, config.out_dir, "all")
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILURE


def _cmd_blowup(args) -> int:
    config = ExperimentConfig(
        inv_p1=inv_exponent(args.p1),
        inv_p2=inv_exponent(args.p2),
        inv_p=inv_exponent(args.p),
        rho=Fraction(args.rho),
        n=args.n,
        a1=args.a1,
        a2=args.a2,
        epsilon=args.eps,
        j_values=tuple(range(args.jmin, args.jmax + 1)),
        seed=args.seed,
    )
    report = run_blowup_experiment(config)
    for line in report.summary_lines():
        print(line)
    if args.out:
        _write_reports(report, args.out, args.format)
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILURE


def _cmd_selftest(args) -> int:
    from .counterexample import (
        CounterexampleParams,
        DyadicBand,
        build_Dj,
        choose_c,
        build_sigma,
        closed_form_T,
        compute_dk,
    )
    from .operators import FrequencySamples, apply_bilinear
    from .sampling import PeriodicSampling, UniformGrid, trig_lattice_direct
    from .wainger import WaingerParams, WaingerFunction, coefficient_values, fhat_values, lattice_keys

    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name} {detail}")
        failures += 0 if ok else 1

    try:
        phi = make_phi(1)
        check("phi lower bound", phi.min_abs_on_cube(1.0, 2001) >= 1.05)
        drift = phi.refinement_check()
        check("phi quadrature refinement", drift["sample_drift"] < 1e-8, f"drift {drift['sample_drift']:.2e}")
        phi_tilde = make_phi_tilde(1)
        check("plateau value at 0", abs(phi_tilde.axis_profile(0.0) - 1.0) < 1e-15)
    except BumpCertificationError as exc:
        print(f"certification error: {exc}")
        return EXIT_CONFIG

    # FFT fast path against the direct lattice sum
    keys = lattice_keys(64, 1)
    coeffs = coefficient_values(keys, 0.5, 0.8, 0.25)
    sampling = PeriodicSampling.for_radius(65, 8.0)
    fast = sampling.lattice_values(keys, coeffs)
    direct = trig_lattice_direct(keys, coeffs, sampling.u_points[:, None])
    rel = float(np.max(np.abs(fast - direct)) / np.max(np.abs(direct)))
    check("fft lattice evaluation", rel < 1e-10, f"rel {rel:.2e}")

    # closed form vs brute-force quadrature at stage j=4
    params = CounterexampleParams(
        Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)
    )
    j, seed = 4, 11
    band = DyadicBand(j, 0.5, 1)
    pairs = build_Dj(band)
    sigma = build_sigma(params, band, choose_c(seed, params.a1, params.a2, pairs), phi, pairs)
    radius = 16
    w1 = WaingerParams(params.a1, params.b1, 0.25, radius, j, 0.5, 1)
    w2 = WaingerParams(params.a2, params.b2, 0.25, radius, j, 0.5, 1)
    k = lattice_keys(radius, 1)
    f1 = WaingerFunction(w1, k, coefficient_values(k, w1.a, w1.b, w1.t), phi_tilde, 0.0)
    f2 = WaingerFunction(w2, k, coefficient_values(k, w2.a, w2.b, w2.t), phi_tilde, 0.0)
    scale = sigma.scale
    lo, hi = sigma.support_radius()
    grid = UniformGrid.centered(hi * 1.02, 3072)
    s1 = FrequencySamples(grid, fhat_values(f1, grid.axes[0]))
    s2 = FrequencySamples(grid, fhat_values(f2, grid.axes[0]))
    x = np.linspace(-1.5, 1.5, 129)
    brute = apply_bilinear(sigma, s1, s2, x)
    d_map = compute_dk(params, band, 0.25)
    closed = closed_form_T(params, j, d_map, seed, x, phi)
    rel = float(np.max(np.abs(brute - closed)) / np.max(np.abs(closed)))
    check("closed form vs quadrature", rel < 1e-6, f"rel {rel:.2e}")

    return EXIT_PASS if failures == 0 else EXIT_CHECK_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilinear-blowup",
        description="critical-order bilinear symbol classes: exponent maps, "
        "derivations, and blow-up experiments",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponent-map", help="CSV of regions and critical orders")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--family", choices=("J", "I"), default="J")
    p.add_argument("--grid", type=int, default=101, help="points per axis")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_exponent_map)

    p = sub.add_parser("derive", help="derive the forced exponent identity")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--rho", default="1/2")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("lemma-suite", help="run the component check suite")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_lemma_suite)

    p = sub.add_parser("blowup", help="run a blow-up scaling experiment")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--rho", default="1/2")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--a1", type=float, default=None)
    p.add_argument("--a2", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--jmin", type=int, default=4)
    p.add_argument("--jmax", type=int, default=9)
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json", "plotdata", "all"), default="all")
    p.set_defaults(func=_cmd_blowup)

    p = sub.add_parser("selftest", help="bump certification and oracle cross-checks")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, BumpCertificationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``python3 -m lieburgers <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments, modified, stability, symmetry
from .exact import CbkdvCoefficients, ShockSolution
from .schemes import OmegaClosure, SchemeId

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP = 0, 2, 3
SCHEME_CHOICES = [s.value for s in SchemeId]


def _cmd_run(args):
    try:
        config = experiments.load_config(args.config)
    except experiments.ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    series = experiments.run_frame_experiment(config)
    print(f"h={config.h!r} tau={config.tau!r} nu={config.nu!r} "
          f"CFL={config.cfl!r} Re_h={config.re_h!r} steps={config.n_steps}")
    for s in series:
        final = f"{s.errors[-1]:.6e}" if s.errors else "-"
        tail = f"  blow-up in step {s.blowup_step}" if s.blew_up else ""
        print(f"{s.scheme_id.value:>5} {s.frame}  eps={s.eps:<5g} final L2 error {final}{tail}")
    output = args.output or config.output
    if output:
        output = Path(output)
        if not output.is_absolute() and args.output is None:
            output = Path(args.config).resolve().parent / output
        for path in experiments.write_csv(series, output, config.merged):
            print(f"wrote {path}")
        meta = experiments.write_metadata(series, output.with_suffix(".meta.json"))
        print(f"wrote {meta}")
    if args.strict and any(s.blew_up for s in series):
        return EXIT_BLOWUP
    return EXIT_OK


def _cmd_stability(args):
    report = stability.check_conditions(args.scheme, (args.cfl, args.s), args.omega_tau)
    print(report)
    theta = np.linspace(0, 2 * np.pi, stability.N_THETA)
    gain = np.max(stability.amplification_factor(args.scheme, (args.cfl, args.s),
                                                 theta, args.omega_tau))
    print(f"  max |G| over {stability.N_THETA} phases: {gain:.12f}")
    return EXIT_OK


def _cmd_scan(args):
    cfl = np.linspace(args.cfl_max / args.n, args.cfl_max, args.n)
    s = np.linspace(args.s_max / args.n, args.s_max, args.n)
    omega = "cancel" if args.omega_tau == "cancel" else float(args.omega_tau)
    scan = stability.scan_stability(args.scheme, cfl, s, omega)
    print(f"{args.scheme}: rows S = {s[0]:g}..{s[-1]:g}, columns CFL = {cfl[0]:g}..{cfl[-1]:g}")
    print("# both stable, . both unstable, E empirical only, P conditions only")
    print(scan.render())
    print(f"mismatched cells: {int(scan.mismatch.sum())}; "
          f"within one cell: {scan.agrees_within_one_cell()}; "
          f"conditions inside empirical region: {scan.predicted_contained()}")
    return EXIT_OK


def _cmd_verify(args):
    if args.equation == "burgers":
        equation, gens = "burgers", symmetry.BURGERS_GENERATORS
        expected = {g.name: True for g in gens}
    else:
        equation = CbkdvCoefficients(*args.coefficients)
        gens = (symmetry.L1, symmetry.L2, symmetry.L3, symmetry.L4, symmetry.L5)
        expected = {g.name: g in symmetry.CBKDV_GENERATORS for g in gens}
    print(f"{'generator':<10} {'max |res|/scale':>16} {'||res||/||scale||':>18}  verdict")
    ok = True
    for gen in gens:
        res = symmetry.pde_invariance_residual(gen, equation, args.jets, args.seed)
        verdict = "symmetry" if res.is_symmetry() else (
            "broken" if res.is_broken() else "inconclusive")
        ok &= (verdict == "symmetry") == expected[gen.name]
        print(f"{gen.name:<10} {res.max_ratio:16.3e} {res.rms_ratio:18.3e}  {verdict}")
    print("all verdicts as expected" if ok else "UNEXPECTED verdicts")
    return EXIT_OK


def _cmd_orders(args):
    omega = OmegaClosure.parse(args.omega)
    sol = ShockSolution(0.5, 0.5, 0.1)
    orders = modified.scheme_orders(args.scheme, sol, omega=omega)
    print(f"{args.scheme}: order in tau {orders.tau:.3f}, order in h {orders.h:.3f}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lieburgers",
        description="Finite-difference schemes for Burgers' equation and their symmetries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a frame-change experiment from a config file")
    p.add_argument("config")
    p.add_argument("--strict", action="store_true",
                   help="exit with status 3 if any run blows up")
    p.add_argument("--output", help="override the config's output path")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("stability", help="check von Neumann conditions at one point")
    p.add_argument("scheme", choices=SCHEME_CHOICES)
    p.add_argument("--cfl", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--omega-tau", type=float, default=0.0)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("scan", help="map empirical stability against the conditions")
    p.add_argument("scheme", choices=SCHEME_CHOICES)
    p.add_argument("--cfl-max", type=float, default=1.2)
    p.add_argument("--s-max", type=float, default=0.8)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--omega-tau", default="0",
                   help="a number, or 'cancel' for CFL^2/2")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("verify-symmetries", help="test the invariance criterion")
    p.add_argument("--equation", choices=["burgers", "cbkdv"], default="burgers")
    p.add_argument("--coefficients", type=float, nargs=4, default=[1.3, 0.7, 0.2, 0.4],
                   metavar=("ALPHA", "BETA", "MU", "S"))
    p.add_argument("--jets", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("orders", help="measure truncation orders on the exact shock")
    p.add_argument("scheme", choices=SCHEME_CHOICES)
    p.add_argument("--omega", default="cancel")
    p.set_defaults(func=_cmd_orders)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``zetawalk <command> [options]``.

Exit codes: 0 success, 2 usage or precondition failure, 3 numerical
convergence failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
import warnings

from . import monte_carlo as mc
from . import second_order as so
from .cauchy_walk import RngStreamKey, generate_walk, write_walk_csv
from .errors import ConvergenceError, ZetaWalkError
from .records import RunManifest, now_iso, resolve_output, write_rows
from .zeta_eval import ZetaEvalConfig, truncated_zeta, zeta_critical, zeta_em_oracle

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3


def fmt_complex(z: complex) -> str:
    return f"{z.real:.15g}{z.imag:+.15g}i"


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seeds(text: str) -> list[int]:
    """``"20"`` means seeds 0..19; ``"3,8,11"`` is an explicit list."""
    if "," in text:
        return _int_list(text)
    try:
        count = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--seeds takes a count or a list, got {text!r}")
    if count < 1:
        raise argparse.ArgumentTypeError("--seeds count must be >= 1")
    return list(range(count))


def _finish(manifest: RunManifest, out, started: float) -> None:
    manifest.finished = now_iso()
    manifest.wall_time = time.perf_counter() - started
    path = manifest.write_beside(out)
    print(f"wrote {out}")
    print(f"wrote {path}")


# -- commands --------------------------------------------------------------------


def cmd_eval(args) -> int:
    cfg = ZetaEvalConfig(sigma=args.sigma, t_cap=args.t_cap)
    if args.x is not None:
        value = truncated_zeta(args.sigma, args.t, args.x)
        label = f"truncated (x={args.x:g})"
    else:
        value = zeta_critical(args.t, cfg)
        label = "truncated (adaptive x)"
    print(f"{label}: {fmt_complex(value)}")
    if args.oracle:
        ref = zeta_em_oracle(args.sigma, args.t)
        print(f"oracle: {fmt_complex(ref)}")
        print(f"oracle modulus: {abs(ref):.6e}")
        print(f"gap: {abs(value - ref):.6e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter()
    manifest = RunManifest("verify", vars_for(args), args.seed, now_iso())
    rep = mc.verify_second_order(
        args.n, args.m, args.sigma, args.x, args.replicates, args.seed,
        threshold=args.threshold, workers=args.workers,
    )
    print(f"query n={args.n} m={args.m} sigma={args.sigma} x={args.x:g} R={args.replicates}")
    if rep.quadrature_fallback:
        print("reference: quadrature fallback (m = n + 1, sigma = 1/2)")
    print(f"{'block':<9} {'exact':>14} {'estimate':>14} {'stderr':>11} {'z':>8} {'z_imag':>8}")
    for b in rep.blocks:
        print(
            f"{b.name:<9} {b.exact:>14.8g} {b.estimate.real:>14.8g} "
            f"{b.stderr_re:>11.4g} {b.z:>8.3f} {b.z_imag:>8.3f}"
        )
    print(f"z = {rep.z_score:.3f}, threshold {rep.threshold:g}: {'PASS' if rep.passed else 'FAIL'}")
    out = resolve_output(args.out, f"verify_n{args.n}_m{args.m}.csv")
    write_rows(rep.rows(), out)
    manifest.outputs = [str(out)]
    _finish(manifest, out, started)
    return EXIT_OK


def cmd_constants(args) -> int:
    if not (args.c or args.kn or args.phi_scan):
        args.c = True
    if args.c:
        c = so.constant_C()
        rows = [
            ("euler_const", c.euler_const),
            ("integral_0_1", c.integral_0_1),
            ("integral_1_inf", c.integral_1_inf),
            ("c_eq222", c.c_eq222),
            ("c_theorem1", c.c_theorem1),
            ("kn_offset", c.kn_offset),
        ]
        for name, value in rows:
            print(f"{name:<16} {value:+.16f}")
        diff = c.c_eq222 - c.c_theorem1
        print(f"check: c_eq222 - c_theorem1 = {diff!r} ({'ok' if diff == 1.0 else 'MISMATCH'})")
        print(f"quadrature abserr {c.quad_abserr:.3e}")
    if args.kn:
        print(f"{'n':>8} {'K_n':>20} {'K_n - log n':>20}")
        for n in args.kn:
            k = so.compute_Kn(n)
            print(f"{n:>8} {k:>20.15f} {k - math.log(n):>20.15f}")
    if args.phi_scan:
        alpha, res = so.phi_scan(args.phi_lo, args.phi_hi, args.phi_points)
        print(f"phi identity: max |residual| = {res:.3e} at alpha = {alpha:.6g}")
        phi0 = so.phi_funcs(1e-4)[0]
        print(f"phi(1e-4) = {phi0:.15f} (1/12 = {1 / 12:.15f})")
    return EXIT_OK


TRAJECTORY_COLUMNS = [
    "seed", "replicate_index", "n", "s_n", "zeta_re", "zeta_im",
    "running_sum_re", "running_sum_im", "normalized_stat", "capped",
]


def cmd_trajectory(args) -> int:
    started = time.perf_counter()
    if args.b <= 2:
        print(f"warning: b = {args.b} <= 2 lies outside the regime b > 2", file=sys.stderr)
    cfg = ZetaEvalConfig(t_cap=args.t_cap)
    manifest = RunManifest("trajectory", vars_for(args), args.seeds[0], now_iso())
    rows = []
    capped = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for seed in args.seeds:
            run = mc.theorem2_run(args.N, args.b, seed, cfg, workers=args.workers)
            rows.extend(r.as_row() for r in run.records)
            capped += run.capped_count
    total = args.N * len(args.seeds)
    manifest.capped_fraction = capped / total
    out = resolve_output(args.out, "trajectory.csv")
    write_rows(rows, out)
    manifest.outputs = [str(out)]
    print(f"{len(args.seeds)} trajectories, N={args.N}, b={args.b}: "
          f"capped {capped}/{total} = {manifest.capped_fraction:.3g}")
    if args.sup:
        if args.sup_replicates < 20:
            raise mc.DomainError("--sup-replicates must be >= 20")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            curve = mc.ensemble_sup_curve(
                args.b, args.sup_N or [args.N], args.sup_replicates, args.seeds[0], cfg,
                workers=args.workers,
            )
        sup_rows = [vars(c).copy() for c in curve]
        sup_out = out.with_name(out.stem + "_sup" + out.suffix)
        write_rows(sup_rows, sup_out)
        manifest.outputs.append(str(sup_out))
        for c in curve:
            print(f"E sup^2 up to N={c.N}: {c.estimate:.6g} +- {c.stderr:.3g}")
    _finish(manifest, out, started)
    return EXIT_OK


def cmd_walk(args) -> int:
    started = time.perf_counter()
    manifest = RunManifest("walk", vars_for(args), args.seed, now_iso())
    walk = generate_walk(args.N, RngStreamKey(args.seed, args.replicate))
    out = resolve_output(args.out, f"walk_s{args.seed}_r{args.replicate}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_walk_csv(walk, out)
    manifest.outputs = [str(out)]
    _finish(manifest, out, started)
    return EXIT_OK


def vars_for(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetawalk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate zeta(sigma + i t)")
    e.add_argument("--t", type=float, required=True)
    e.add_argument("--sigma", type=float, default=0.5)
    e.add_argument("--x", type=float, default=None, help="fixed truncation point")
    e.add_argument("--oracle", action="store_true", help="also print the reference value")
    e.add_argument("--t-cap", type=float, default=1e9)
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="Monte Carlo check of the second moments")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--x", type=float, default=100.0)
    v.add_argument("--sigma", type=float, default=0.5)
    v.add_argument("--replicates", type=int, default=200_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threshold", type=float, default=mc.DEFAULT_THRESHOLD)
    v.add_argument("--workers", type=int, default=None)
    v.add_argument("--out", default=None, help="CSV or .json path")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="constant C, K_n table, phi identity scan")
    c.add_argument("--c", action="store_true")
    c.add_argument("--kn", type=_int_list, default=None, metavar="N1,N2,...")
    c.add_argument("--phi-scan", action="store_true")
    c.add_argument("--phi-lo", type=float, default=0.01)
    c.add_argument("--phi-hi", type=float, default=50.0)
    c.add_argument("--phi-points", type=int, default=2001)
    c.set_defaults(func=cmd_constants)

    t = sub.add_parser("trajectory", help="simulate partial sums of zeta along walks")
    t.add_argument("--N", type=int, default=10_000)
    t.add_argument("--b", type=float, default=2.5)
    t.add_argument("--seeds", type=_seeds, default=[0], help="count or comma list")
    t.add_argument("--t-cap", type=float, default=1e9)
    t.add_argument("--sup", action="store_true", help="also estimate E sup^2")
    t.add_argument("--sup-N", type=_int_list, default=None, metavar="N1,N2,...")
    t.add_argument("--sup-replicates", type=int, default=20)
    t.add_argument("--workers", type=int, default=None)
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_trajectory)

    w = sub.add_parser("walk", help="write one Cauchy walk as CSV")
    w.add_argument("--N", type=int, required=True)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--replicate", type=int, default=0)
    w.add_argument("--out", default=None)
    w.set_defaults(func=cmd_walk)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ZetaWalkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

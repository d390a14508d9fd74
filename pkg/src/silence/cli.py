"""Command-line entry point: ``silence {center,families,bound,simulate}``."""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from . import bounds
from ._io import json_text, write_text
from .centering import best_estimate, brute_force_optimal, iterate_centering
from .density import Density, DistortionKind, Interval, density_from_config
from .errors import InfeasibleError, SilenceError
from .heuristics import DEFAULT_ETAS, family_sweep
from .simulator import simulate

log = logging.getLogger("silence")

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2, 3


class ConfigError(SilenceError):
    pass


def _load_density(text: str) -> Density:
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read density file: {exc}") from None
    return density_from_config(text)


def _eta(value: float) -> float:
    if not 0.0 < value < 1.0:
        raise ConfigError(f"--eta must lie in (0, 1), got {value}")
    return value


def _etas(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--eta expects comma-separated numbers, got {text!r}") from None
    if not vals:
        raise ConfigError("--eta list is empty")
    return [_eta(v) for v in vals]


def _positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be positive, got {value}")


def _kind(text: str) -> DistortionKind:
    return DistortionKind(text)


def _outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def cmd_center(args) -> int:
    d = _load_density(args.density)
    eta = _eta(args.eta)
    _positive("--tol", args.tol)
    if args.max_iter < 1:
        raise ConfigError("--max-iter must be at least 1")
    kind = _kind(args.distortion)
    if args.start_lo is not None or args.start_hi is not None:
        if args.start_lo is None or args.start_hi is None:
            raise ConfigError("--start-lo and --start-hi go together")
        if args.start_lo > args.start_hi:
            raise ConfigError("--start-lo exceeds --start-hi")
        start = Interval(args.start_lo, args.start_hi)
    else:
        start = Interval(d.quantile_or_edge(0.5 * (1.0 - eta)), d.quantile_or_edge(0.5 * (1.0 + eta)))
    trace = iterate_centering(d, start, eta, kind, tol=args.tol, max_iter=args.max_iter)
    fin = trace.final
    summary = {
        "density": d.kind,
        "eta": eta,
        "distortion": kind.value,
        "lo": fin.interval.lo,
        "hi": fin.interval.hi,
        "estimate": fin.estimate,
        "mass": fin.mass,
        "cond_distortion": fin.cond_distortion,
        "iterations": trace.iterations,
        "converged": trace.converged,
        "fixed_point_gap": trace.fixed_point_gap,
    }
    out = _outdir(args.out)
    write_text(os.path.join(out, "center_trace.csv"), trace.to_csv())
    text = json_text(summary)
    write_text(os.path.join(out, "center_summary.json"), text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_families(args) -> int:
    d = _load_density(args.density)
    etas = _etas(args.eta) if args.eta else list(DEFAULT_ETAS)
    if args.grid < 2:
        raise ConfigError("--grid must be at least 2")
    sweep = family_sweep(d, etas, grid=args.grid)
    out = _outdir(args.out)
    write_text(os.path.join(out, "families.csv"), sweep.rows_csv())
    write_text(os.path.join(out, "family_curves.csv"), sweep.curves_csv())
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.k_min < 0 or args.k_max < args.k_min:
        raise ConfigError("need 0 <= --k-min <= --k-max")
    if args.k_steps < 1:
        raise ConfigError("--k-steps must be at least 1")
    curves = bounds.fig6_sweep(bounds.default_k_grid(args.k_min, args.k_max, args.k_steps))
    out = _outdir(args.out)
    write_text(os.path.join(out, "fig6.csv"), bounds.fig6_csv(curves))
    if args.ratio_check:
        ratio = bounds.matched_rate_ratio(curves[bounds.CurveSource.EXACT_GAUSSIAN])
        print(f"max ExactGaussian/Periodic distortion over rate in [0.3, 0.9]: {ratio:.15g}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    d = _load_density(args.density)
    if args.ticks < 1:
        raise ConfigError("--ticks must be at least 1")
    kind = _kind(args.distortion)
    if args.lo is not None or args.hi is not None:
        if args.lo is None or args.hi is None or args.lo > args.hi:
            raise ConfigError("--lo and --hi must both be given with lo <= hi")
        silence = Interval(args.lo, args.hi)
    elif args.k is not None:
        if args.k < 0:
            raise ConfigError("--k must be non-negative")
        silence = Interval(d.mode - args.k, d.mode + args.k)
    elif args.eta is not None:
        silence = brute_force_optimal(d, _eta(args.eta), kind).interval
    else:
        raise ConfigError("give the silence interval via --lo/--hi, --k or --eta")
    if args.estimate is not None:
        estimate = args.estimate
    elif d.mass(silence) > 0.0:
        estimate = best_estimate(d, silence, kind)
    else:
        estimate = silence.midpoint
    report = simulate(d, silence, estimate, args.ticks, args.seed)
    out = _outdir(args.out)
    text = report.to_json()
    write_text(os.path.join(out, "simulate.json"), text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="silence", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, density=True):
        if density:
            sp.add_argument("--density", required=True,
                            help='JSON like {"kind":"gaussian","params":{"mu":0,"sigma":1}} or @file')
        sp.add_argument("--out", default=".", help="output directory")

    c = sub.add_parser("center", help="iterate centering from a start interval")
    common(c)
    c.add_argument("--eta", type=float, required=True)
    c.add_argument("--distortion", choices=["mse", "mae"], default="mse")
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--max-iter", type=int, default=200)
    c.add_argument("--start-lo", type=float)
    c.add_argument("--start-hi", type=float)
    c.set_defaults(func=cmd_center)

    f = sub.add_parser("families", help="compare heuristic interval families")
    common(f)
    f.add_argument("--eta", help="comma-separated masses (default 0.2,0.4,0.6,0.8)")
    f.add_argument("--grid", type=int, default=101)
    f.set_defaults(func=cmd_families)

    b = sub.add_parser("bound", help="Gauss-inequality bound and exact trade-off curves")
    common(b, density=False)
    b.add_argument("--k-min", type=float, default=0.0)
    b.add_argument("--k-max", type=float, default=4.0)
    b.add_argument("--k-steps", type=int, default=401)
    b.add_argument("--ratio-check", action="store_true")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("simulate", help="Monte-Carlo check of a silence interval")
    common(s)
    s.add_argument("--distortion", choices=["mse", "mae"], default="mse")
    s.add_argument("--lo", type=float)
    s.add_argument("--hi", type=float)
    s.add_argument("--k", type=float)
    s.add_argument("--eta", type=float)
    s.add_argument("--estimate", type=float)
    s.add_argument("--ticks", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SilenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end. Every subcommand writes a CSV file and prints a summary.

    pearle sweep --seed 9875 --out sweep.csv
    pearle density --out density.csv
    pearle appendix --mu constant --out h.csv
    pearle caricature --seed 1234 --out points.csv
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
import tempfile

import numpy as np

from . import appendix, caricature, density
from .estimators import Convention, SweepConfig, run_sweep
from .model import MAX_SEED, Outcome, make_rng

log = logging.getLogger("pearle")

CLASS_NAMES = {
    int(Outcome.UP): "up",
    int(Outcome.DOWN): "down",
    int(Outcome.NO_DETECTION): "undetected",
}


def fmt(value) -> str:
    """9 significant digits, locale independent."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def write_csv(path: str, header, rows) -> None:
    """Write atomically: a temp file in the target directory is renamed into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".pearle-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([c if isinstance(c, str) else fmt(c) for c in row])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- argument types -----------------------------------------------------------


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= v <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64 - 1]")
    return v


def _step(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}")
    if not 0.0 < v <= 360.0 or abs(round(360.0 / v) * v - 360.0) > 1e-9:
        raise argparse.ArgumentTypeError(f"must be in (0, 360] and divide 360, got {text}")
    return v


def _finite(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


# -- subcommands --------------------------------------------------------------


def cmd_sweep(args) -> int:
    config = SweepConfig(
        pairs=args.pairs,
        seed=args.seed,
        beta_deg=args.beta_deg,
        step_deg=args.step_deg,
        convention=Convention(args.convention),
        fresh_per_angle=args.fresh_per_angle,
    )
    log.info("sweep: %d angles x %d pairs", config.n_steps, config.pairs)
    result = run_sweep(config, backend=args.backend)
    rows = (
        (r.angle_deg, r.n_detected, r.n_pairs, r.correlation, r.target, r.detection_rate, r.stderr_bound)
        for r in result.records
    )
    header = ("angle_deg", "n_detected", "n_pairs", "correlation", "target", "detection_rate", "stderr_bound")
    write_csv(args.out, header, rows)
    print(f"max_abs_deviation: {fmt(result.max_abs_deviation())}")
    return 0


def cmd_density(args) -> int:
    curves = density.density_curves(args.grid_intervals)
    r = curves["f_R"].grid
    rows = zip(r, curves["f_R"].values, curves["f_uniform_ball"].values, curves["f_pearle_combined"].values)
    write_csv(args.out, ("r", "f_R", "f_uniform_ball", "f_pearle_combined"), rows)
    lower, upper = density.riemann_bounds(args.grid_intervals)
    print(f"riemann_lower: {fmt(lower)}")
    print(f"riemann_upper: {fmt(upper)}")
    print(f"pearle_combined_integral: {fmt(density.pearle_combined_integral())}")
    return 0


def cmd_appendix(args) -> int:
    grid = appendix.Grid(args.grid, args.eps)
    trim = grid.default_trim() if args.trim is None else args.trim
    if grid.n < trim + 3:
        raise _UsageError(f"--trim {trim} needs --grid >= {trim + 3}")
    spec = appendix.MuSpec(args.mu)
    h = appendix.candidate_density(spec, grid, trim, rule=args.rule, backend=args.backend)
    s = h.x
    if spec is appendix.MuSpec.CONSTANT:
        ref = appendix.reference_s_density(s)
        write_csv(args.out, ("s", "h_normalized", "reference"), zip(s, h.values, ref))
    else:
        write_csv(args.out, ("s", "h_normalized"), zip(s, h.values))
    pos = appendix.assess_positivity(h)
    print(f"min: {fmt(pos.min)}")
    print(f"max: {fmt(pos.max)}")
    print(f"has_negative: {fmt(pos.has_negative)}")
    print(f"negative_fraction: {fmt(pos.negative_fraction)}")
    if spec is appendix.MuSpec.CONSTANT:
        keep = s <= 0.95
        dist = float(np.max(np.abs(h.values - ref)[keep])) if keep.any() else math.nan
        print(f"sup_distance_to_reference_s_le_0.95: {fmt(dist)}")
    return 0


def cmd_caricature(args) -> int:
    rng = make_rng(args.seed)
    x, y, codes = caricature.sample_points(rng, args.points)
    rows = []
    for name, (bx, by) in caricature.boundary_curves().items():
        rows.extend(("boundary", name, xi, yi, "") for xi, yi in zip(bx, by))
    rows.extend(("point", "", xi, yi, CLASS_NAMES[int(c)]) for xi, yi, c in zip(x, y, codes))
    write_csv(args.out, ("kind", "branch", "x", "y", "class"), rows)
    frac = float(np.mean(codes == int(Outcome.NO_DETECTION)))
    print(f"undetected_fraction: {fmt(frac)}")
    return 0


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pearle", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument(
        "--backend", choices=("auto", "numba", "numpy"), default="auto",
        help="kernel implementation (auto honours PEARLE_DISABLE_NUMBA)",
    )

    p = sub.add_parser("sweep", parents=[backend], help="correlation and detection-rate sweep")
    p.add_argument("--pairs", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--beta-deg", type=_finite, default=0.0)
    p.add_argument("--step-deg", type=_step, default=1.0)
    p.add_argument("--convention", choices=[c.value for c in Convention], default="outcomes")
    p.add_argument("--fresh-per-angle", action="store_true")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("density", help="densities of R and the Riemann bounds")
    p.add_argument("--grid-intervals", type=_positive_int, default=1000)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("appendix", parents=[backend], help="candidate density of S from mu")
    p.add_argument("--mu", choices=[m.value for m in appendix.MuSpec], default="constant")
    p.add_argument("--grid", type=_positive_int, default=appendix.DEFAULT_N)
    p.add_argument("--trim", type=_nonneg_int, default=None, help="default: grid // 100")
    p.add_argument("--eps", type=_finite, default=appendix.DEFAULT_EPS)
    p.add_argument("--rule", choices=appendix.RULES, default="corrected")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_appendix)

    p = sub.add_parser("caricature", help="2D caricature point cloud and boundaries")
    p.add_argument("--points", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=1234)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_caricature)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"pearle {args.command}: error: --out {args.out!r}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"pearle {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

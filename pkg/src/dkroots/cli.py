"""Command line entry point: ``dkroots {solve,bounds,experiment,plot}``.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from collections import defaultdict

from . import experiments as ex
from .bounds import ALL_METHODS, BoundMethod, PowerIterConfig, PowerIterationError, all_bounds
from .poly import PolynomialError, RealPolynomial
from .solver import NumericalError, SolverConfig, solve
from .svgplot import line_chart

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

SCENARIOS = ("radius-comparison", "wilkinson", "wilkinson-perturbed", "clustered", "random")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_coeffs(text: str) -> RealPolynomial:
    """Parse ``"1,-5,6"``; the leading coefficient must be exactly 1."""
    tokens = [t.strip() for t in text.split(",")]
    values = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise UsageError(f"malformed coefficient {tok!r}") from None
        if not math.isfinite(v):
            raise UsageError(f"coefficient {tok!r} is not finite")
        values.append(v)
    if len(values) < 2:
        raise UsageError("need at least two coefficients (degree >= 1)")
    if values[0] != 1.0:
        raise UsageError(f"leading coefficient must be 1, got {tokens[0]!r}")
    try:
        return RealPolynomial(values)
    except PolynomialError as exc:
        raise UsageError(str(exc)) from None


def read_polynomial_file(path: str) -> list[RealPolynomial]:
    """One polynomial per line; blank lines and ``#`` comments are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    polys = [parse_coeffs(line) for line in lines if line.strip() and not line.lstrip().startswith("#")]
    if not polys:
        raise UsageError(f"{path}: no polynomial found")
    return polys


def _poly_from(args) -> RealPolynomial:
    if args.coeffs is not None and args.file is not None:
        raise UsageError("give either --coeffs or --file, not both")
    if args.coeffs is not None:
        return parse_coeffs(args.coeffs)
    if args.file is not None:
        return read_polynomial_file(args.file)[0]
    raise UsageError("one of --coeffs or --file is required")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DK_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DK_SEED must be an integer, got {env!r}") from None


def _bound(name):
    try:
        return BoundMethod.parse(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bound_list(text):
    return tuple(_bound(t) for t in text.split(",") if t.strip())


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(cast):
    def parse(text):
        # "LO:HI"; a negative LO such as "-15:15" is fine since the split is on ':'
        parts = text.split(":")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
        try:
            lo, hi = cast(parts[0]), cast(parts[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return lo, hi

    return parse


def _solver_cfg(args) -> SolverConfig:
    kw = {}
    if args.eps1 is not None:
        kw["eps1"] = args.eps1
    if args.eps2 is not None:
        kw["eps2"] = args.eps2
    if args.max_iter is not None:
        kw["max_iter"] = args.max_iter
    if getattr(args, "no_scaling", False):
        kw["enable_scaling"] = False
    if getattr(args, "history", None) or getattr(args, "record_history", False):
        kw["record_history"] = True
    try:
        return SolverConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_solve(args, out) -> int:
    p = _poly_from(args)
    cfg = _solver_cfg(args)
    try:
        res = solve(p, args.bound, cfg, PowerIterConfig(seed=_seed(args)))
    except (NumericalError, PowerIterationError) as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    json.dump(res.to_dict(), out, indent=2)
    out.write("\n")
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    p = _poly_from(args)
    try:
        results = all_bounds(p, PowerIterConfig(seed=_seed(args)))
    except PowerIterationError as exc:
        print(f"bounds failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    w = csv.DictWriter(out, fieldnames=["method", "radius", "r0", "power_iters", "fallback"], lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.as_row())
    return EXIT_OK


def _run_scenario(args):
    seed = _seed(args)
    cfg = _solver_cfg(args)
    if args.scenario == "radius-comparison":
        (lo, hi) = args.deg_range or (3, 50)
        return ex.run_radius_comparison(
            args.count if args.count is not None else 50, lo, hi,
            args.coeff_range or (-15.0, 15.0), seed, bounds=args.bounds or ALL_METHODS,
        )
    bounds = args.bounds or ALL_METHODS
    if args.scenario == "wilkinson":
        return ex.run_wilkinson_suite(args.n_list or [5, 10, 15, 20], bounds, cfg, seed)
    if args.scenario == "wilkinson-perturbed":
        eps = args.perturb if args.perturb is not None else 2.0**-23
        recs = []
        for n in args.n_list or [20]:
            k = args.perturb_power if args.perturb_power is not None else n - 1
            if not 0 <= k <= n - 1:
                raise UsageError(f"--perturb-power must be between 0 and {n - 1}")
            recs.extend(ex.run_perturbed_wilkinson(n, eps, k, b, cfg, seed) for b in bounds)
        return recs
    if args.scenario == "clustered":
        spacing = args.spacing if args.spacing is not None else 0.001
        if not spacing > 0:
            raise UsageError("--spacing must be positive")
        return ex.run_clustered_suite(args.n_list or [10, 20, 30], spacing, bounds, cfg, seed)
    return ex.run_random_suite(
        args.n_list or [20, 60, 100, 140], args.coeff_range or (-15.0, 15.0),
        args.bounds or (BoundMethod.LAMBDA_MAX,), cfg, seed,
    )


def cmd_experiment(args, out) -> int:
    records = _run_scenario(args)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            ex.write_csv(records, fh)
    else:
        ex.write_csv(records, out)
    if args.history:
        with open(args.history, "w", encoding="utf-8", newline="") as fh:
            ex.write_history_csv(records, fh)
    print(f"{args.scenario}: {ex.summarize(records)}", file=sys.stderr)
    return EXIT_OK


def _read_rows(path, required):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for col in required:
                if col not in header:
                    raise UsageError(f"{path}: missing column {col!r}")
            rows = list(reader)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise UsageError(f"{path}: no data rows")
    return rows


def _float(row, col):
    try:
        return float(row[col])
    except (TypeError, ValueError):
        raise UsageError(f"non-numeric {col!r} value {row[col]!r}") from None


def radius_series(rows):
    series = defaultdict(list)
    for i, row in enumerate(rows):
        series[row["bound"]].append((_float(row, "degree"), i, _float(row, "radius")))
    ordered = {}
    for name in sorted(series, key=_bound_order):
        ordered[name] = [(x, y) for x, _, y in sorted(series[name])]
    return ordered


def convergence_series(rows):
    series = defaultdict(list)
    for row in rows:
        key = f"{row['scenario']} n={row['degree']} {row['bound']}"
        series[key].append((_float(row, "iteration"), _float(row, "max_step")))
    return {k: sorted(v) for k, v in series.items()}


def _bound_order(name):
    names = [m.value for m in ALL_METHODS]
    return (names.index(name), name) if name in names else (len(names), name)


def cmd_plot(args, out) -> int:
    if args.kind == "radius":
        rows = _read_rows(args.input, ("degree", "bound", "radius"))
        svg = line_chart(radius_series(rows), "Initial radius by bound", "degree", "radius")
    else:
        rows = _read_rows(args.input, ex.HISTORY_COLUMNS)
        svg = line_chart(convergence_series(rows), "Convergence history", "iteration", "max step", log_y=True)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
    return EXIT_OK


def _add_poly_args(sp):
    sp.add_argument("--coeffs", help='comma-separated coefficients, descending powers, e.g. "1,-5,6"')
    sp.add_argument("--file", help="polynomial file (first polynomial is used)")
    sp.add_argument("--seed", type=int, help="power-iteration seed (default: $DK_SEED or 0)")


def _add_solver_args(sp):
    sp.add_argument("--eps1", type=float, help="step tolerance")
    sp.add_argument("--eps2", type=float, help="residual tolerance")
    sp.add_argument("--max-iter", type=int, help="iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dkroots", description="Durand-Kerner root finding with selectable initial bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="find all roots of one polynomial, JSON output")
    _add_poly_args(sp)
    sp.add_argument("--bound", type=_bound, default=BoundMethod.LAMBDA_MAX, help="initial radius strategy")
    _add_solver_args(sp)
    sp.add_argument("--no-scaling", action="store_true", help="never rescale the variable")
    sp.add_argument("--record-history", action="store_true", help="include per-iteration max step")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bounds", help="all five radii for one polynomial, CSV output")
    _add_poly_args(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("experiment", help="run a benchmark scenario, CSV output")
    sp.add_argument("--scenario", required=True, choices=SCENARIOS)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.add_argument("--history", help="also write per-iteration steps to this CSV")
    sp.add_argument("--count", type=int)
    sp.add_argument("--deg-range", type=_range(int))
    sp.add_argument("--coeff-range", type=_range(float))
    sp.add_argument("--n-list", type=_int_list)
    sp.add_argument("--spacing", type=float)
    sp.add_argument("--perturb", type=float, help="amount subtracted from one coefficient")
    sp.add_argument("--perturb-power", type=int, help="power of x that is perturbed (default n-1)")
    sp.add_argument("--bounds", type=_bound_list, help="comma-separated bound names")
    _add_solver_args(sp)
    sp.add_argument("--no-scaling", action="store_true")
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("plot", help="render an SVG chart from experiment CSV")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--kind", required=True, choices=("radius", "convergence"))
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_plot)
    return parser


_RANGE_FLAGS = ("--deg-range", "--coeff-range")


def _join_range_values(argv):
    # argparse reads "-15:15" as an option; glue it onto its flag.
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _join_range_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"dkroots: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    fokas-richards solve       --config example1 --output theta.csv --plot fig.svg
    fokas-richards compare     --config example2 --oracle series
    fokas-richards convergence --config example1 --t 2400 --Ns 10,50,250

Exit status: 0 success, 1 usage or configuration error, 2 numerical failure,
3 comparison gate exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from contextlib import contextmanager

import numpy as np

from . import config as config_mod
from .errors import FokasError, InvalidParameterError, NumericalError
from .oracle import FdConfig, build_series, cn_solve, sample_grid, series_theta, truncation_study
from .solver import FokasSolver
from .spectral import IntegrandContext

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_GATE = 0, 1, 2, 3

log = logging.getLogger("fokas_richards")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and np.isnan(v)):
        return ""
    return format(float(v), ".17g")


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_rows(path, header, rows):
    with _open_out(path) as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _solver(cfg) -> FokasSolver:
    ctx = IntegrandContext.from_params(cfg.soil, cfg.scenario)
    return FokasSolver(ctx, cfg.strategy, cfg.contour, cfg.tol.quad, cfg.tol.tail, cfg.tol.t_min)


def _grid_x(cfg) -> np.ndarray:
    return np.linspace(0.0, cfg.scenario.L, cfg.grid.nx)


def cmd_solve(cfg, output=None, plot=None, strict=False) -> int:
    if not cfg.grid.times_s:
        print("no output requested: grid.times_s is empty", file=sys.stderr)
        return EXIT_USAGE
    solver = _solver(cfg)
    grid = solver.solve_grid(_grid_x(cfg), cfg.grid.times_s, strict=strict)
    rows = []
    for j, t in enumerate(grid.ts):
        for i, x in enumerate(grid.xs):
            rows.append((x, t, grid.theta[i, j], grid.w[i, j], grid.wx[i, j], grid.quad_err[i, j]))
    _write_rows(output or cfg.output.csv, ["x_m", "t_s", "theta", "w", "wx", "quad_err"], rows)
    if grid.diagnostics["failures"]:
        print(f"{len(grid.diagnostics['failures'])} cell(s) failed; left empty", file=sys.stderr)
    plot = plot or cfg.output.plot
    if plot:
        from .plotting import profile_and_heatmap

        for p in profile_and_heatmap(grid, plot, cfg.output.plot_format):
            log.info("wrote %s", p)
    return EXIT_OK


def cmd_compare(cfg, oracle: str, output=None, plot=None, strict=False) -> int:
    times = [t for t in cfg.grid.times_s if t >= cfg.gate.t_from_s]
    if not times:
        print(f"no output requested: no grid time >= {cfg.gate.t_from_s:g} s", file=sys.stderr)
        return EXIT_USAGE
    solver = _solver(cfg)
    ctx = solver.ctx
    xs = _grid_x(cfg)
    fk = solver.solve_grid(xs, times, strict=strict)
    if oracle == "cn":
        fd = cn_solve(ctx, FdConfig(nx=cfg.oracle.fd_nx, dt=cfg.oracle.fd_dt), times)
        ref = sample_grid(fd, xs, ctx).theta
    else:
        series = build_series(ctx, cfg.oracle.series_N)
        ref = np.column_stack([series_theta(ctx, series, xs, t) for t in times])
    diff = np.abs(fk.theta - ref)
    rows = []
    for j, t in enumerate(times):
        for i, x in enumerate(xs):
            rows.append((x, t, fk.theta[i, j], ref[i, j], diff[i, j]))
    _write_rows(output or cfg.output.csv,
                ["x_m", "t_s", "theta_fokas", "theta_oracle", "abs_diff"], rows)
    max_d = float(np.nanmax(diff))
    mean_d = float(np.nanmean(diff))
    passed = max_d <= cfg.gate.max_theta_diff and not np.isnan(diff).any()
    print(f"oracle={oracle} max_abs_diff={max_d:.3e} mean_abs_diff={mean_d:.3e} "
          f"gate={cfg.gate.max_theta_diff:.1e} {'PASS' if passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_GATE


def cmd_convergence(cfg, t=None, Ns=None, output=None, plot=None) -> int:
    t = cfg.convergence.t_s if t is None else t
    Ns = list(cfg.convergence.Ns if Ns is None else Ns)
    if not t >= 60.0:
        print("convergence study needs t >= 60 s (series is Gibbs-dominated near t = 0)",
              file=sys.stderr)
        return EXIT_USAGE
    if not Ns or any(n < 0 for n in Ns):
        print("no output requested: Ns must be a non-empty list of counts >= 0", file=sys.stderr)
        return EXIT_USAGE
    solver = _solver(cfg)
    rows = truncation_study(solver.ctx, t, Ns, solver, xs=_grid_x(cfg))
    _write_rows(output or cfg.output.csv, ["N", "max_abs_err"], rows)
    plot = plot or cfg.output.plot
    if plot:
        from .plotting import convergence_plot

        convergence_plot([r for r in rows if r[0] > 0], plot, cfg.output.plot_format)
    return EXIT_OK


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fokas-richards", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", required=True,
                       help="JSON config file, or a bundled name: example1, example2")
        p.add_argument("--output", help="CSV path ('-' or omitted: stdout unless set in config)")
        p.add_argument("--plot", help="base path for static figures")
        p.add_argument("--save-config", help="write the effective config (defaults filled) here")

    p = sub.add_parser("solve", help="theta(x, t) on the configured grid")
    common(p)
    p.add_argument("--strict", action="store_true", help="abort on the first failing cell")

    p = sub.add_parser("compare", help="difference against an independent oracle")
    common(p)
    p.add_argument("--oracle", choices=("cn", "series"), default="cn")
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("convergence", help="series truncation error against the contour solution")
    common(p)
    p.add_argument("--t", type=float, help="time in seconds (default from config)")
    p.add_argument("--Ns", type=_int_list, help="comma-separated term counts")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_mod.load(args.config)
        if args.save_config:
            config_mod.dump(cfg, args.save_config)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "solve":
                return cmd_solve(cfg, args.output, args.plot, args.strict)
            if args.command == "compare":
                return cmd_compare(cfg, args.oracle, args.output, args.plot, args.strict)
            return cmd_convergence(cfg, args.t, args.Ns, args.output, args.plot)
    except InvalidParameterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, FokasError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Batch front-end: evaluate symbols, run verification suites, export tables.

Exit codes: 0 on success, 1 when a suite tolerance fails, 2 on bad
configuration or arguments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .report import ConfigError, RunConfig, format_number, records_to_csv, report_paths, write_report
from .symbols import COEFF_BINOMIAL, COEFF_PAPER_PRINTED, SymbolSpec, symbol_value
from .verify import SUITES, gevrey_scan, run_suite

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2

TABLE_HEADER = ["alpha", "abs_alpha", "s", "r", "rho", "lhs", "bound_core", "c_emp"]


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--format", choices=["csv", "json"], help="report format")
    common.add_argument("--out", help="output path for the report")
    common.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    parser = argparse.ArgumentParser(
        prog="hermite-weyl",
        description="Weyl symbols of the Hermite functional calculus: "
        "evaluation, verification suites and derivative tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common],
                            help="evaluate a symbol family on rho or phase points")
    p_eval.add_argument("--family", required=True,
                        choices=["heat", "inverse-power", "conformal-inverse",
                                 "closed-even", "projection"])
    p_eval.add_argument("--s", type=float, help="order for the power families")
    p_eval.add_argument("--t", type=float, help="time for the heat family")
    p_eval.add_argument("--k", type=int, help="projection index")
    p_eval.add_argument("--m", type=int, help="half-dimension for closed-even")
    p_eval.add_argument("--coeff-family", default=COEFF_BINOMIAL,
                        choices=[COEFF_BINOMIAL, COEFF_PAPER_PRINTED])
    p_eval.add_argument("--n", type=int, help="dimension (overrides config)")
    p_eval.add_argument("--rho", help="comma-separated list of radial values")
    p_eval.add_argument("--point", action="append", default=[],
                        help="phase point, 2n comma-separated coordinates (x then xi); repeatable")

    p_verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p_verify.add_argument("suite", choices=list(SUITES))

    p_table = sub.add_parser("table", parents=[common], help="derivative-estimate ladder as CSV")
    p_table.add_argument("--s", type=float, default=1.0)
    p_table.add_argument("--r", type=float, default=1.0)
    p_table.add_argument("--alpha-max", type=int, default=6)
    p_table.add_argument("--rho", default="1,4,16")
    p_table.add_argument("--n", type=int, help="dimension (overrides config)")
    return parser


def _load_config(args) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.format:
        config = RunConfig(**{**config.snapshot(), "format": args.format})
    return config


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {what} list {text!r}") from exc


def _eval_spec(args, n: int) -> tuple[SymbolSpec, float]:
    family = args.family
    if family == "heat":
        if args.t is None:
            raise ConfigError("heat family requires --t")
        return SymbolSpec.heat(args.t, n), args.t
    if family == "inverse-power":
        if args.s is None:
            raise ConfigError("inverse-power family requires --s")
        return SymbolSpec.inverse_power(args.s, n), args.s
    if family == "conformal-inverse":
        if args.s is None:
            raise ConfigError("conformal-inverse family requires --s")
        return SymbolSpec.conformal_inverse(args.s, n), args.s
    if family == "projection":
        if args.k is None:
            raise ConfigError("projection family requires --k")
        return SymbolSpec.projection(args.k, n), float(args.k)
    if family == "closed-even":
        m = args.m if args.m is not None else (n // 2 if n % 2 == 0 else None)
        if m is None:
            raise ConfigError("closed-even family requires --m or an even --n")
        return SymbolSpec.closed_even(m, args.coeff_family), float(m)
    raise ConfigError(f"unknown family {family!r}")


def cmd_eval(args, config: RunConfig) -> int:
    n = args.n if args.n is not None else config.n
    spec, param = _eval_spec(args, n)
    q = config.quadrature()

    rhos: list[float] = []
    if args.rho:
        rhos.extend(_parse_floats(args.rho, "rho"))
    for point in args.point:
        coords = _parse_floats(point, "point")
        if len(coords) != 2 * n:
            raise ConfigError(f"phase point needs {2 * n} coordinates, got {len(coords)}")
        rhos.append(sum(c * c for c in coords))
    if not rhos:
        raise ConfigError("eval requires --rho or --point")

    records = [
        {"family": spec.family, "param": param, "n": n, "rho": rho,
         "value": symbol_value(spec, rho, q)}
        for rho in rhos
    ]
    body = records_to_csv(records, ["family", "param", "n", "rho", "value"])
    sys.stdout.write(body)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        if config.format == "json":
            write_report(out, "eval", config, records, {}, True,
                         ["family", "param", "n", "rho", "value"])
        else:
            out.write_text(body)
    return EXIT_OK


def cmd_verify(args, config: RunConfig) -> int:
    q = config.quadrature()
    grid = config.grid() if args.suite == "spectral" else None
    result = run_suite(args.suite, grid=grid, q=q)
    report_file, figure_file = report_paths(config, args.suite, args.out)
    write_report(report_file, args.suite, config, result.records, result.summary, result.passed)
    if not args.no_figures:
        from .plots import render_suite_figure

        render_suite_figure(args.suite, result.records, result.summary, figure_file)
    status = "pass" if result.passed else "FAIL"
    sys.stdout.write(f"suite {args.suite}: {status} ({len(result.records)} records) -> {report_file}\n")
    for key, val in sorted(result.summary.items()):
        sys.stdout.write(f"  {key} = {format_number(val)}\n")
    return EXIT_OK if result.passed else EXIT_TOLERANCE


def cmd_table(args, config: RunConfig) -> int:
    n = args.n if args.n is not None else config.n
    q = config.quadrature()
    rho_grid = _parse_floats(args.rho, "rho")
    if not rho_grid:
        raise ConfigError("table requires a non-empty --rho list")
    report = gevrey_scan(args.s, args.r, args.alpha_max, rho_grid, n, q)
    records = [
        {
            "alpha": f"{rec.alpha[0]};{rec.alpha[1]}",
            "abs_alpha": sum(rec.alpha),
            "s": args.s,
            "r": args.r,
            "rho": rec.rho,
            "lhs": rec.lhs,
            "bound_core": rec.bound_core,
            "c_emp": rec.c_emp,
        }
        for rec in report.records
    ]
    body = records_to_csv(records, TABLE_HEADER)
    sys.stdout.write(body)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        if config.format == "json":
            write_report(out, "table", config, records, {"max_c_emp": report.max_c_emp},
                         True, TABLE_HEADER)
        else:
            out.write_text(body)
        if not args.no_figures:
            from .plots import render_table_figure

            render_table_figure(records, out.with_suffix(".png"))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "eval":
            return cmd_eval(args, config)
        if args.command == "verify":
            return cmd_verify(args, config)
        if args.command == "table":
            return cmd_table(args, config)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

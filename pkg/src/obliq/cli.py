"""``obliq`` command line: fit CSV data, run simulations, rebuild tables.

Exit codes: 0 success, 1 internal failure, 2 input error, 3 degenerate data.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import reports
from .errors import DegenerateSample, ObliqError
from .estimators import Method, estimate_all
from .measurement_error import madansky_variances
from .simulation import SimulationConfig, parse_ratio, run_kappa_misspecification, run_study
from .stats import Diagnostics, summarize, validate
from .tables import build_table

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3

FIT_COLUMNS = ["method", "beta1", "beta0", "lambda", "theta_deg",
               "sigma_delta_sq", "sigma_tau_sq", "kappa_tilde", "notes"]
SIM_COLUMNS = ["estimator", "mean_slope", "percent_bias", "mse", "mse_e3",
               "mean_lambda", "mean_theta_deg", "n_ok"]

CONFIG_KEYS = {"distribution", "mu_x", "sigma_x", "beta0", "beta1", "sigma_delta",
               "sigma_tau", "n", "replications", "seed", "assumed_kappas",
               "estimators"}

FATAL_FLAGS = (Diagnostics.NO_X_VARIATION | Diagnostics.NO_Y_VARIATION
               | Diagnostics.HORIZONTAL_UNDEFINED)


class InputError(Exception):
    """Malformed user input; reported with exit code 2."""


def read_xy_csv(path) -> tuple[list[float], list[float]]:
    """Read a two-column ``x,y`` CSV, skipping blank and ``#`` comment lines."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    xs, ys = [], []
    header = None
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in row]
            if header is None:
                if [c.lower() for c in cells] != ["x", "y"]:
                    raise InputError(f"line {lineno}: expected header 'x,y', got {row}")
                header = cells
                continue
            if len(cells) != 2:
                raise InputError(f"line {lineno}: expected 2 fields, got {len(cells)}")
            try:
                x, y = float(cells[0]), float(cells[1])
            except ValueError:
                raise InputError(f"line {lineno}: non-numeric value in {row}") from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InputError(f"line {lineno}: non-finite value in {row}")
            xs.append(x)
            ys.append(y)
    if header is None:
        raise InputError(f"{path}: no 'x,y' header found")
    if len(xs) < 3:
        raise InputError(f"{path}: need at least 3 data rows, got {len(xs)}")
    return xs, ys


def _fit_rows(stats, kappa):
    rows = []
    for fit in estimate_all(stats, assumed_kappa=kappa):
        try:
            ev = madansky_variances(fit.beta1, stats)
            var = (ev.sigma_delta_sq, ev.sigma_tau_sq, ev.kappa_tilde)
        except ObliqError:
            var = (math.nan,) * 3
        rows.append({
            "method": fit.method.value, "beta1": fit.beta1, "beta0": fit.beta0,
            "lambda": fit.lam, "theta_deg": fit.theta_deg,
            "sigma_delta_sq": var[0], "sigma_tau_sq": var[1], "kappa_tilde": var[2],
            "notes": ";".join(fit.notes),
        })
    return rows


def cmd_fit(args) -> int:
    xs, ys = read_xy_csv(args.data)
    try:
        stats = summarize((xs, ys))
    except DegenerateSample as exc:
        raise InputError(str(exc)) from exc
    flags = validate(stats)
    path = reports.write(Path(args.out) / "fit", _fit_rows(stats, args.kappa),
                         FIT_COLUMNS, args.format, title=f"fit of {args.data}")
    _announce(args, path)
    if flags & FATAL_FLAGS:
        print(f"degenerate data: {flags}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def _parse_value(key: str, text: str):
    try:
        if key == "distribution":
            return text.lower()
        if key in ("n", "replications"):
            return int(text)
        if key == "seed":
            return int(text, 0)
        if key == "assumed_kappas":
            return tuple(parse_ratio(t) for t in text.split(",") if t.strip())
        if key == "estimators":
            return tuple(Method(t.strip().lower()) for t in text.split(",") if t.strip())
        return float(text)
    except ValueError as exc:
        raise InputError(f"config key {key!r}: invalid value {text!r}") from exc


def load_config(path) -> dict:
    """Parse a flat ``key = value`` file (``#`` starts a comment)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise InputError(f"line {lineno}: unknown config key {key!r}")
        values[key] = _parse_value(key, raw)
    for key in ("sigma_delta", "sigma_tau"):
        if key not in values:
            raise InputError(f"config key {key!r} is required")
        if not values[key] > 0:
            raise InputError(f"config key {key!r}: must be positive")
    return values


def _seed(args, configured: int | None) -> int:
    if args.seed is not None:
        return args.seed
    if configured is not None:
        return configured
    env = os.environ.get("OBLIQ_SEED")
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise InputError(f"OBLIQ_SEED is not an integer: {env!r}") from None
    return 0


def cmd_simulate(args) -> int:
    values = load_config(args.config)
    values["seed"] = _seed(args, values.get("seed"))
    try:
        config = SimulationConfig(**values)
    except ValueError as exc:
        raise InputError(f"config: {exc}") from exc
    out = Path(args.out)
    report = run_study(config, workers=args.workers)
    _announce(args, reports.write(out / "simulation", report.as_rows(), SIM_COLUMNS,
                                  args.format, title="simulation study"))
    meta = out / "simulation_meta.json"
    meta.write_text(json.dumps(report.metadata(), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    _announce(args, meta)
    if config.assumed_kappas:
        grid = run_kappa_misspecification(config, workers=args.workers)
        rows = []
        for i, kappa in enumerate(grid.assumed_kappas):
            for j, (dv, tv) in enumerate(grid.columns):
                rows.append({"assumed_kappa": kappa, "sigma_delta_sq": dv,
                             "sigma_tau_sq": tv,
                             "percent_bias": float(grid.percent_bias[i, j])})
        _announce(args, reports.write(
            out / "kappa_misspecification", rows,
            ["assumed_kappa", "sigma_delta_sq", "sigma_tau_sq", "percent_bias"],
            args.format, title="likelihood slope bias under assumed ratios"))
    return EXIT_OK


def _table_ids(given: list[str]) -> list[int]:
    ids = []
    for part in ",".join(given).split(","):
        part = part.strip()
        if not part:
            continue
        if part == "all":
            ids.extend(range(1, 9))
            continue
        try:
            k = int(part)
        except ValueError:
            raise InputError(f"unknown table id {part!r}") from None
        if not 1 <= k <= 8:
            raise InputError(f"unknown table id {k}")
        ids.append(k)
    if not ids:
        raise InputError("no table ids given")
    return sorted(set(ids))


def cmd_tables(args) -> int:
    ids = _table_ids(args.ids)
    seed = args.seed
    if seed is None and os.environ.get("OBLIQ_SEED"):
        seed = _seed(args, None)
    for k in ids:
        table = build_table(k, replications=args.replications, seed=seed)
        path = reports.write(Path(args.out) / f"table{k}", table.rows, table.columns,
                             args.format, title=f"Table {k}: {table.title}")
        _announce(args, path)
    return EXIT_OK


def _announce(args, path) -> None:
    if not args.quiet:
        print(path)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obliq", description="Slope estimators for errors-in-variables lines.")
    parser.add_argument("-q", "--quiet", action="store_true",
                        help="do not list written files")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=sorted(reports.FORMATS), default="csv")

    p = sub.add_parser("fit", help="fit every estimator to an x,y CSV file")
    p.add_argument("data")
    p.add_argument("--kappa", type=float, default=None,
                   help="assumed error-variance ratio for the likelihood slope")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="run a Monte Carlo study from a config file")
    p.add_argument("config")
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tables", help="regenerate published tables 1-8")
    p.add_argument("ids", nargs="+", help="table ids, e.g. '1,2,4' or 'all'")
    p.add_argument("--seed", type=_u64, default=None,
                   help="override the built-in seeds of tables 5-8")
    p.add_argument("--replications", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"obliq: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"obliq: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

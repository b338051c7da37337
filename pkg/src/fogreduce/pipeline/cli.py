"""
Command-line entry point.

Subcommands::

    fogreduce synth --days 30 --cadence-minutes 30 --profile both --seed 42 --out data.csv
    fogreduce run --input data.csv [--config pipeline.cfg] --out-dir results/
    fogreduce fog --input data.csv --out-dir reduced/
    fogreduce reconstruct --reduced reduced/reduced.csv --method pchip --grid-step 1800 --out rec.csv
    fogreduce report --raw data.csv --reconstructed rec.csv --reduced reduced/reduced.csv

Exit status is 0 on success, 1 for bad input and 2 for internal errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import InputError, InvalidParameters
from ..interpolate import reconstruct
from ..metrics import evaluate
from ..types import Interpolant
from .io import (
    ingest_csv,
    load_config,
    read_long_csv,
    read_reduced_csv,
    write_input_csv,
    write_long_csv,
    write_rows_to,
)
from .node import run_fog_node, run_pipeline
from .preprocess import clean, preprocess
from .report import (
    METRICS_HEADER,
    emit_report,
    metrics_rows,
    write_events,
    write_messages,
    write_metrics,
)
from .synth import Profile, generate_synthetic

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _config_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline configuration (overrides --config)")
    g.add_argument("--config", type=Path, help="key=value configuration file")
    g.add_argument("--batch-minutes", type=int)
    g.add_argument("--outlier-weight", type=float)
    g.add_argument("--trend-delta", type=float)
    g.add_argument("--extraction-method")
    g.add_argument("--paa-frames", type=int)
    g.add_argument("--sax-alphabet", type=int)
    g.add_argument("--breakpoint-mode")
    g.add_argument("--interpolant")
    g.add_argument("--day-boundary")
    g.add_argument("--bytes-per-point", type=int)


_CONFIG_KEYS = (
    "batch_minutes", "outlier_weight", "trend_delta", "extraction_method", "paa_frames",
    "sax_alphabet", "breakpoint_mode", "interpolant", "day_boundary", "bytes_per_point",
)


def _config(args):
    return load_config(args.config, {k: getattr(args, k) for k in _CONFIG_KEYS})


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fogreduce", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="ingest, reduce, reconstruct and score")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1, help="variables processed in parallel")
    _config_args(p)

    p = sub.add_parser("synth", help="write a deterministic synthetic input CSV")
    p.add_argument("--days", type=int, default=30)
    p.add_argument("--cadence-minutes", type=int, default=30)
    p.add_argument(
        "--profile",
        default="both",
        help="soil_temperature, solar_radiation or both (default)",
    )
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("fog", help="run only the fog node; write reduced points and events")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out-dir", type=Path, required=True)
    _config_args(p)

    p = sub.add_parser("reconstruct", help="interpolate reduced points onto a uniform grid")
    p.add_argument("--reduced", type=Path, required=True)
    p.add_argument("--method", default="pchip", help="linear, spline or pchip")
    p.add_argument("--grid-step", type=int, default=1800, help="grid spacing in seconds")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("report", help="score reconstructed series against raw input")
    p.add_argument("--raw", type=Path, required=True)
    p.add_argument("--reconstructed", type=Path, required=True)
    p.add_argument("--reduced", type=Path, required=True)
    p.add_argument("--method", help="label for the metrics rows (default: configured interpolant)")
    p.add_argument("--out", type=Path, help="metrics CSV path (default: stdout)")
    _config_args(p)
    return parser


def _cmd_run(args) -> int:
    config = _config(args)
    series = ingest_csv(args.input)
    report = run_pipeline(series, config, jobs=max(1, args.jobs))
    emit_report(report, args.out_dir)
    print(
        f"{len(series)} variable(s): {report.total_raw_samples} raw samples, "
        f"{report.total_upstream_points} upstream points, {report.total_events} events"
    )
    return EXIT_OK


def _cmd_synth(args) -> int:
    if args.profile.lower() == "both":
        profiles = list(Profile)
    else:
        profiles = [Profile.parse(args.profile)]
    series = [generate_synthetic(args.days, args.cadence_minutes, p, args.seed) for p in profiles]
    write_input_csv(args.out, series)
    return EXIT_OK


def _cmd_fog(args) -> int:
    config = _config(args)
    series = ingest_csv(args.input)
    outputs = [run_fog_node(clean(series[v], config), config) for v in sorted(series)]
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    write_long_csv(out / "reduced.csv", [o.reduced for o in outputs])
    write_events(out / "events.csv", [e for o in outputs for e in o.events])
    write_messages(out / "messages.csv", [m for o in outputs for m in o.messages])
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    method = Interpolant.parse(args.method)
    if args.grid_step < 1:
        raise InvalidParameters("--grid-step must be positive")
    reduced = read_reduced_csv(args.reduced)
    rebuilt = [reconstruct(reduced[v], args.grid_step, method) for v in sorted(reduced)]
    write_long_csv(args.out, rebuilt)
    return EXIT_OK


def _cmd_report(args) -> int:
    config = _config(args)
    method = Interpolant.parse(args.method).value if args.method else config.interpolant.value
    raw = ingest_csv(args.raw)
    rebuilt = read_long_csv(args.reconstructed)
    reduced = read_reduced_csv(args.reduced)
    reports = []
    for v in sorted(rebuilt):
        if v not in raw or v not in reduced:
            raise InvalidParameters(f"variable {v!r} missing from raw or reduced input")
        reports.append(evaluate(preprocess(raw[v], config), rebuilt[v], len(reduced[v]), method))
    if args.out:
        write_metrics(args.out, reports)
    else:
        write_rows_to(sys.stdout, METRICS_HEADER, metrics_rows(reports))
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "synth": _cmd_synth,
    "fog": _cmd_fog,
    "reconstruct": _cmd_reconstruct,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    try:
        return _COMMANDS[args.command](args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

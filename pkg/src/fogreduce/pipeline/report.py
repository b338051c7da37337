"""Write run results to disk: JSON summary plus CSV tables."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any, Iterable

from ..types import Event, GofReport
from .io import format_number, format_timestamp, write_long_csv, write_rows
from .node import RunReport, UpstreamMessage

METRICS_HEADER = [
    "variable", "method", "raw_count", "reduced_count", "reduction_ratio", "sse", "r_square", "rmse",
]
EVENTS_HEADER = ["variable", "timestamp", "kind", "observed", "band_low", "band_high"]
HISTOGRAM_HEADER = ["variable", "raw_count", "batched_count", "reduced_count"]
MESSAGES_HEADER = ["emitted_at", "variable", "kind", "payload_point_count"]


def safe_name(variable: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", variable) or "_"


def _json_number(x: float) -> float | None:
    return x if math.isfinite(x) else None


def metrics_rows(reports: Iterable[GofReport]):
    for r in reports:
        yield [
            r.variable, r.method, r.raw_count, r.reduced_count,
            r.reduction_ratio, r.sse, r.r_square, r.rmse,
        ]


def write_metrics(path, reports: Iterable[GofReport]) -> Path:
    return write_rows(path, METRICS_HEADER, metrics_rows(reports))


def write_events(path, events: Iterable[Event]) -> Path:
    ordered = sorted(events, key=lambda e: (e.variable, e.timestamp, e.kind.value, e.observed))
    rows = (
        [e.variable, format_timestamp(e.timestamp), e.kind.value, e.observed, e.band_low, e.band_high]
        for e in ordered
    )
    return write_rows(path, EVENTS_HEADER, rows)


def write_messages(path, messages: Iterable[UpstreamMessage]) -> Path:
    rows = (
        [format_timestamp(m.emitted_at), m.variable, m.kind.value, m.payload_point_count]
        for m in messages
    )
    return write_rows(path, MESSAGES_HEADER, rows)


def report_dict(report: RunReport) -> dict[str, Any]:
    return {
        "config": dict(report.config_echo),
        "totals": {
            "raw_samples": report.total_raw_samples,
            "upstream_points": report.total_upstream_points,
            "events": report.total_events,
            "raw_bytes": report.raw_bytes,
            "upstream_bytes": report.upstream_bytes,
        },
        "variables": [
            {
                "variable": v.variable,
                "unit": v.unit,
                "raw_samples": v.raw_samples,
                "scoring_samples": v.scoring_samples,
                "reduced_points": v.reduced_points,
                "upstream_points": v.upstream_points,
                "untransmitted_samples": v.raw_samples - v.upstream_points,
                "events": v.events,
                "messages": v.messages,
            }
            for v in report.variables
        ],
        "metrics": [
            {k: (_json_number(v) if isinstance(v, float) else v) for k, v in r.as_dict().items()}
            for r in report.reports
        ],
        "events": [
            {
                "variable": e.variable,
                "timestamp": format_timestamp(e.timestamp),
                "kind": e.kind.value,
                "observed": _json_number(e.observed),
                "band_low": _json_number(e.band_low),
                "band_high": _json_number(e.band_high),
            }
            for e in report.events
        ],
    }


def emit_report(report: RunReport, out_dir) -> list[Path]:
    """
    Write ``report.json``, ``metrics.csv``, ``events.csv``, ``reduction_histogram.csv``
    and one ``reconstructed_<variable>.csv`` per variable.

    Output is UTF-8 with LF line endings and stable ordering, so identical runs
    produce byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []

    json_path = out / "report.json"
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report_dict(report), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    paths.append(json_path)

    paths.append(write_metrics(out / "metrics.csv", report.reports))
    paths.append(write_events(out / "events.csv", report.events))
    paths.append(
        write_rows(
            out / "reduction_histogram.csv",
            HISTOGRAM_HEADER,
            ([v.variable, v.raw_samples, v.scoring_samples, v.reduced_points] for v in report.variables),
        )
    )
    for variable in sorted(report.reconstructions):
        series = report.reconstructions[variable]
        paths.append(write_long_csv(out / f"reconstructed_{safe_name(variable)}.csv", [series]))
    return paths


__all__ = [
    "emit_report",
    "format_number",
    "report_dict",
    "write_events",
    "write_messages",
    "write_metrics",
]

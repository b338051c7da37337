"""CSV and config-file I/O for the pipeline CLI."""

from __future__ import annotations

import calendar
import csv
import math
import re
import time
from dataclasses import fields
from pathlib import Path
from typing import Any, Iterable, Mapping, TextIO

import numpy as np

from ..errors import DuplicateTimestamp, EmptyFile, InvalidConfig, ParseError
from ..types import PipelineConfig, ReducedSeries, TimeSeries
from .synth import UNITS

INPUT_HEADER = ["timestamp", "sensor_id", "variable", "value"]
LONG_HEADER = ["timestamp", "variable", "value"]

_TS_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$")
_NUM_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_DEFAULT_UNITS = {p.value: u for p, u in UNITS.items()}


def parse_timestamp(text: str) -> int:
    if not _TS_RE.match(text):
        raise ValueError(f"timestamp {text!r} is not YYYY-MM-DDThh:mm:ssZ")
    return calendar.timegm(time.strptime(text, "%Y-%m-%dT%H:%M:%SZ"))


def format_timestamp(seconds: int) -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(int(seconds)))


def parse_value(text: str) -> float:
    if not _NUM_RE.match(text):
        raise ValueError(f"value {text!r} is not a decimal number")
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"value {text!r} overflows")
    return value


def format_number(x: Any) -> str:
    """Shortest round-tripping text; integral floats lose their ``.0``."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    text = repr(x)
    return text[:-2] if text.endswith(".0") else text


def _rows(path: Path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            yield reader.line_num, row


def _read_long(path: Path, header: list[str]) -> Iterable[tuple[int, list[str]]]:
    """Yield ``(line, row)`` for data rows after checking the header; blank lines are skipped."""
    path = Path(path)
    if path.stat().st_size == 0:
        raise EmptyFile(f"{path} is empty")
    rows = _rows(path)
    try:
        line, first = next(rows)
    except StopIteration:
        raise EmptyFile(f"{path} is empty") from None
    if first != header:
        raise ParseError(line, f"expected header {','.join(header)}, got {','.join(first)}")
    any_data = False
    for line, row in rows:
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(line, f"expected {len(header)} fields, got {len(row)}")
        any_data = True
        yield line, row
    if not any_data:
        raise EmptyFile(f"{path} has a header but no data rows")


def _group(records, *, duplicates: str = "error") -> dict[str, tuple[np.ndarray, np.ndarray]]:
    by_var: dict[str, list[tuple[int, float]]] = {}
    for var, ts, value in records:
        by_var.setdefault(var, []).append((ts, value))
    out = {}
    for var in sorted(by_var):
        pts = sorted(by_var[var], key=lambda p: p[0])
        ts = np.array([p[0] for p in pts], dtype=np.int64)
        vs = np.array([p[1] for p in pts], dtype=np.float64)
        dup = np.flatnonzero(np.diff(ts) == 0)
        if dup.size and duplicates == "error":
            raise DuplicateTimestamp(var, int(ts[dup[0]]))
        out[var] = (ts, vs)
    return out


def ingest_csv(path) -> dict[str, TimeSeries]:
    """
    Read field measurements (``timestamp,sensor_id,variable,value``) into one series per variable.

    Raises
    ------
    EmptyFile
        If the file has no data rows.
    ParseError
        On a malformed header, row, timestamp or value (carries the line number).
    DuplicateTimestamp
        If a variable has two rows with the same timestamp.
    """
    records = []
    for line, (ts_text, _sensor, variable, value_text) in _read_long(path, INPUT_HEADER):
        try:
            ts = parse_timestamp(ts_text)
            value = parse_value(value_text)
        except ValueError as exc:
            raise ParseError(line, str(exc)) from None
        if not variable:
            raise ParseError(line, "empty variable name")
        records.append((variable, ts, value))
    return {
        var: TimeSeries(var, ts, vs, _DEFAULT_UNITS.get(var, ""))
        for var, (ts, vs) in _group(records).items()
    }


def read_long_csv(path) -> dict[str, TimeSeries]:
    """Read a ``timestamp,variable,value`` file as written by :func:`write_long_csv`."""
    records = []
    for line, (ts_text, variable, value_text) in _read_long(path, LONG_HEADER):
        try:
            records.append((variable, parse_timestamp(ts_text), parse_value(value_text)))
        except ValueError as exc:
            raise ParseError(line, str(exc)) from None
    return {
        var: TimeSeries(var, ts, vs, _DEFAULT_UNITS.get(var, ""))
        for var, (ts, vs) in _group(records).items()
    }


def read_reduced_csv(path, method="trend_change") -> dict[str, ReducedSeries]:
    """Reduced points in long format; repeated timestamps are allowed (daily extrema)."""
    records = []
    for line, (ts_text, variable, value_text) in _read_long(path, LONG_HEADER):
        try:
            records.append((variable, parse_timestamp(ts_text), parse_value(value_text)))
        except ValueError as exc:
            raise ParseError(line, str(exc)) from None
    grouped = _group(records, duplicates="keep")
    out = {}
    for var, (ts, vs) in grouped.items():
        m = "daily_extrema" if np.any(np.diff(ts) == 0) else method
        out[var] = ReducedSeries(var, m, ts, vs)
    return out


def write_rows_to(fh: TextIO, header: list[str], rows: Iterable[Iterable[Any]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([c if isinstance(c, str) else format_number(c) for c in row])


def write_rows(path, header: list[str], rows: Iterable[Iterable[Any]]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_rows_to(fh, header, rows)
    return path


def write_long_csv(path, series: Iterable[TimeSeries | ReducedSeries]) -> Path:
    def rows():
        for s in series:
            for t, v in zip(s.timestamps, s.values):
                yield format_timestamp(t), s.variable, v

    return write_rows(path, LONG_HEADER, rows())


def write_input_csv(path, series: Iterable[TimeSeries], sensor_id: str = "synth-1") -> Path:
    def rows():
        for s in series:
            for t, v in zip(s.timestamps, s.values):
                yield format_timestamp(t), sensor_id, s.variable, v

    return write_rows(path, INPUT_HEADER, rows())


_CONFIG_FIELDS = {f.name: f for f in fields(PipelineConfig)}
_INT_FIELDS = {"batch_minutes", "paa_frames", "sax_alphabet", "bytes_per_point"}
_FLOAT_FIELDS = {"outlier_weight", "trend_delta"}


def coerce_config_values(raw: Mapping[str, str]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, text in raw.items():
        if key not in _CONFIG_FIELDS:
            raise InvalidConfig(f"unknown config key {key!r}")
        try:
            if key in _INT_FIELDS:
                out[key] = int(text)
            elif key in _FLOAT_FIELDS:
                out[key] = float(text)
            else:
                out[key] = text
        except ValueError:
            raise InvalidConfig(f"bad value for {key}: {text!r}") from None
    return out


def read_config_file(path) -> dict[str, Any]:
    """Parse flat ``key=value`` lines; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InvalidConfig(f"{path}:{lineno}: expected key=value")
            raw[key.strip()] = value.strip()
    return coerce_config_values(raw)


def load_config(path=None, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
    values: dict[str, Any] = read_config_file(path) if path else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return PipelineConfig(**values)

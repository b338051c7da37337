"""
Shared domain types and the pipeline configuration model.

Timestamps are integer seconds since the UNIX epoch (UTC). Values are plain
floats; units travel as inert string tags and are never converted.

All types are frozen. Array-backed types copy their inputs and mark the
copies read-only so instances can be shared freely between threads.
"""

from __future__ import annotations

import datetime as _dt
import enum
import math
from dataclasses import dataclass, field, fields
from typing import Any, Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    InvalidConfig,
    NonFiniteValue,
    NonMonotoneTimestamps,
    ShapeMismatch,
)

SECONDS_PER_DAY = 86_400


def _frozen_array(values: Iterable, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


class _NamedEnum(enum.Enum):
    """Enum parseable from loose spellings ("TrendChange", "trend_change", "trend-change")."""

    @classmethod
    def parse(cls, text: str | "_NamedEnum"):
        if isinstance(text, cls):
            return text
        key = str(text).replace("_", "").replace("-", "").lower()
        for member in cls:
            if member.name.replace("_", "").lower() == key or member.value.replace("_", "") == key:
                return member
        choices = ", ".join(m.value for m in cls)
        raise InvalidConfig(f"unknown {cls.__name__} {text!r}; expected one of: {choices}")


class EventKind(_NamedEnum):
    BAND_VIOLATION = "band_violation"
    SYMBOL_DEVIATION = "symbol_deviation"


class ExtractionMethod(_NamedEnum):
    DAILY_EXTREMA = "daily_extrema"
    TREND_CHANGE = "trend_change"
    PAA = "paa"
    SAX = "sax"


class BreakpointMode(_NamedEnum):
    GAUSSIAN = "gaussian"
    HISTOGRAM = "histogram"


class Interpolant(_NamedEnum):
    LINEAR = "linear"
    SPLINE = "spline"
    PCHIP = "pchip"


@dataclass(frozen=True)
class Sample:
    timestamp: int
    value: float


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """
    Ordered samples of one physical variable.

    Construction only checks that ``timestamps`` and ``values`` line up;
    ordering and finiteness are checked by :func:`validate_series`, which every
    pipeline entry point calls. ``tag`` names the producer of a derived series
    (e.g. the interpolant of a reconstruction) and is ignored by ``==``.
    """

    variable: str
    timestamps: np.ndarray
    values: np.ndarray
    unit: str = ""
    tag: str = ""

    def __post_init__(self):
        ts = _frozen_array(self.timestamps, np.int64)
        vs = _frozen_array(self.values, np.float64)
        if ts.shape != vs.shape:
            raise ShapeMismatch(
                f"{ts.size} timestamps vs {vs.size} values for {self.variable!r}"
            )
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vs)

    @classmethod
    def from_samples(cls, variable: str, samples: Iterable[Sample], unit: str = "") -> TimeSeries:
        samples = list(samples)
        return cls(
            variable,
            [s.timestamp for s in samples],
            [s.value for s in samples],
            unit,
        )

    @property
    def samples(self) -> tuple[Sample, ...]:
        return tuple(Sample(int(t), float(v)) for t, v in zip(self.timestamps, self.values))

    def __len__(self) -> int:
        return int(self.timestamps.size)

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.unit == other.unit
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def with_values(self, timestamps, values, tag: str | None = None) -> TimeSeries:
        return TimeSeries(
            self.variable, timestamps, values, self.unit, self.tag if tag is None else tag
        )


def validate_series(series: TimeSeries) -> TimeSeries:
    """Return ``series`` unchanged if timestamps strictly increase and all values are finite."""
    ts, vs = series.timestamps, series.values
    if ts.size > 1:
        bad = np.flatnonzero(np.diff(ts) <= 0)
        if bad.size:
            i = int(bad[0])
            raise NonMonotoneTimestamps(
                f"{series.variable!r}: timestamp {int(ts[i + 1])} at index {i + 1} "
                f"does not follow {int(ts[i])}"
            )
    nonfinite = np.flatnonzero(~np.isfinite(vs))
    if nonfinite.size:
        i = int(nonfinite[0])
        raise NonFiniteValue(f"{series.variable!r}: non-finite value at index {i}")
    return series


@dataclass(frozen=True)
class Batch:
    window_start: int
    window_end: int
    min: float
    max: float
    mean: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("batch count must be >= 1")
        if self.window_end <= self.window_start:
            raise ValueError("batch window_end must follow window_start")
        if not (self.min <= self.mean <= self.max):
            raise ValueError(f"batch violates min <= mean <= max: {self.min}, {self.mean}, {self.max}")

    @property
    def duration(self) -> int:
        return self.window_end - self.window_start


@dataclass(frozen=True)
class Event:
    variable: str
    timestamp: int
    observed: float
    band_low: float
    band_high: float
    kind: EventKind

    def __post_init__(self):
        if self.kind is EventKind.BAND_VIOLATION and self.band_low <= self.observed <= self.band_high:
            raise ValueError(
                f"band violation event with observed {self.observed} inside "
                f"[{self.band_low}, {self.band_high}]"
            )


@dataclass(frozen=True, eq=False)
class ReducedSeries:
    """
    The sparse point set a fog node transmits for one variable.

    Points are in non-decreasing timestamp order. Two points may share a
    timestamp only for daily extrema, where the minimum and maximum of a day
    can fall into the same batch.
    """

    variable: str
    method: ExtractionMethod
    timestamps: np.ndarray
    values: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "method", ExtractionMethod.parse(self.method))
        ts = _frozen_array(self.timestamps, np.int64)
        vs = _frozen_array(self.values, np.float64)
        if ts.shape != vs.shape:
            raise ShapeMismatch(f"{ts.size} timestamps vs {vs.size} values")
        steps = np.diff(ts)
        if np.any(steps < 0):
            raise NonMonotoneTimestamps("reduced points must be ordered by timestamp")
        if self.method is not ExtractionMethod.DAILY_EXTREMA and np.any(steps == 0):
            raise NonMonotoneTimestamps("duplicate timestamps in reduced points")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vs)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def points(self) -> tuple[Sample, ...]:
        return tuple(Sample(int(t), float(v)) for t, v in zip(self.timestamps, self.values))

    def __len__(self) -> int:
        return int(self.timestamps.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReducedSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.method is other.method
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.values, other.values)
            and dict(self.meta) == dict(other.meta)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class SaxWord:
    symbols: tuple[int, ...]
    alphabet_size: int
    frame_count: int
    breakpoints: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        if self.alphabet_size < 2:
            raise ValueError("alphabet_size must be >= 2")
        if len(self.breakpoints) != self.alphabet_size - 1:
            raise ValueError("need alphabet_size - 1 breakpoints")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.symbols) != self.frame_count:
            raise ValueError("symbol count must equal frame_count")
        if any(s < 0 or s >= self.alphabet_size for s in self.symbols):
            raise ValueError("symbol index outside alphabet")

    def __str__(self) -> str:
        return "".join(chr(ord("a") + s) for s in self.symbols)


@dataclass(frozen=True)
class GofReport:
    """Goodness-of-fit and reduction figures for one variable/interpolant pair.

    ``n_compared`` is the number of matched timestamps the errors were summed
    over; ``raw_count`` is the size of the scoring series.
    """

    variable: str
    method: str
    sse: float
    sst: float
    r_square: float
    rmse: float
    raw_count: int
    reduced_count: int
    reduction_ratio: float
    n_compared: int
    unit: str = ""

    def __post_init__(self):
        if self.sse < 0 or self.sst < 0 or self.rmse < 0:
            raise ValueError("sse, sst and rmse must be non-negative")
        if self.n_compared < 1:
            raise ValueError("n_compared must be >= 1")
        if self.reduction_ratio < 1:
            raise ValueError("reduction_ratio must be >= 1")
        if self.r_square > 1:
            raise ValueError("r_square cannot exceed 1")
        expected_rmse = math.sqrt(self.sse / self.n_compared)
        if not math.isclose(self.rmse, expected_rmse, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("rmse inconsistent with sse / n_compared")
        if self.sst > 0 and not math.isclose(
            self.r_square, 1.0 - self.sse / self.sst, rel_tol=1e-12, abs_tol=1e-15
        ):
            raise ValueError("r_square inconsistent with sse / sst")

    def as_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def parse_time_of_day(value: str | int | _dt.time) -> int:
    """Seconds after midnight for "HH:MM", "HH:MM:SS", a ``datetime.time`` or an int."""
    if isinstance(value, _dt.time):
        return value.hour * 3600 + value.minute * 60 + value.second
    if isinstance(value, int):
        seconds = value
    else:
        parts = str(value).strip().split(":")
        if len(parts) not in (2, 3) or not all(p.isdigit() for p in parts):
            raise InvalidConfig(f"bad time of day {value!r}; expected HH:MM")
        h, m, *rest = (int(p) for p in parts)
        s = rest[0] if rest else 0
        if h > 23 or m > 59 or s > 59:
            raise InvalidConfig(f"bad time of day {value!r}")
        seconds = h * 3600 + m * 60 + s
    if not 0 <= seconds < SECONDS_PER_DAY:
        raise InvalidConfig(f"time of day out of range: {value!r}")
    return seconds


def format_time_of_day(seconds: int) -> str:
    h, rem = divmod(seconds, 3600)
    m, s = divmod(rem, 60)
    return f"{h:02d}:{m:02d}" if s == 0 else f"{h:02d}:{m:02d}:{s:02d}"


@dataclass(frozen=True)
class PipelineConfig:
    batch_minutes: int = 30
    outlier_weight: float = 0.1
    trend_delta: float = 0.0
    extraction_method: ExtractionMethod = ExtractionMethod.TREND_CHANGE
    paa_frames: int = 8
    sax_alphabet: int = 4
    breakpoint_mode: BreakpointMode = BreakpointMode.GAUSSIAN
    interpolant: Interpolant = Interpolant.PCHIP
    day_boundary: int = 0
    bytes_per_point: int = 12

    def __post_init__(self):
        set_ = lambda name, v: object.__setattr__(self, name, v)  # noqa: E731
        set_("extraction_method", ExtractionMethod.parse(self.extraction_method))
        set_("breakpoint_mode", BreakpointMode.parse(self.breakpoint_mode))
        set_("interpolant", Interpolant.parse(self.interpolant))
        set_("day_boundary", parse_time_of_day(self.day_boundary))
        if int(self.batch_minutes) != self.batch_minutes or self.batch_minutes < 1:
            raise InvalidConfig("batch_minutes must be a positive integer")
        if SECONDS_PER_DAY % (int(self.batch_minutes) * 60):
            raise InvalidConfig("batch_minutes must divide 24 hours")
        if not (0.0 <= self.outlier_weight < 1.0):
            raise InvalidConfig("outlier_weight must lie in [0, 1)")
        if not (self.trend_delta >= 0.0 and math.isfinite(self.trend_delta)):
            raise InvalidConfig("trend_delta must be a finite non-negative number")
        if self.paa_frames < 1:
            raise InvalidConfig("paa_frames must be >= 1")
        if self.sax_alphabet < 2:
            raise InvalidConfig("sax_alphabet must be >= 2")
        if self.bytes_per_point < 1:
            raise InvalidConfig("bytes_per_point must be >= 1")
        set_("batch_minutes", int(self.batch_minutes))
        set_("outlier_weight", float(self.outlier_weight))
        set_("trend_delta", float(self.trend_delta))

    @property
    def batch_seconds(self) -> int:
        return self.batch_minutes * 60

    def echo(self) -> dict[str, Any]:
        """Plain, JSON-ready view with stable key order."""
        out: dict[str, Any] = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, enum.Enum):
                v = v.value
            elif f.name == "day_boundary":
                v = format_time_of_day(v)
            out[f.name] = v
        return out

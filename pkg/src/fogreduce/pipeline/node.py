"""
End-to-end simulation: fog node reduction, upstream message accounting and
cloud-side reconstruction with scoring.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple, Sequence

import numpy as np

from ..fog import (
    aggregate_batches,
    batch_means,
    check_outliers,
    detect_trend_changes,
    extract_daily_extrema,
    group_by_day,
)
from ..interpolate import reconstruct
from ..metrics import evaluate
from ..sax import (
    frame_bounds,
    paa_transform,
    sax_breakpoints,
    sax_levels,
    sax_symbolize,
    symbol_deviation_event,
    z_normalize,
)
from ..types import (
    SECONDS_PER_DAY,
    Batch,
    BreakpointMode,
    Event,
    ExtractionMethod,
    GofReport,
    Interpolant,
    PipelineConfig,
    ReducedSeries,
    SaxWord,
    TimeSeries,
    validate_series,
)
from .preprocess import average_to_batches, clean


class MessageKind(enum.Enum):
    EVENT = "event"
    REDUCED_BATCH_SET = "reduced_batch_set"
    SAX_WORD = "sax_word"


_KIND_ORDER = {MessageKind.EVENT: 0, MessageKind.REDUCED_BATCH_SET: 1, MessageKind.SAX_WORD: 2}


@dataclass(frozen=True)
class UpstreamMessage:
    kind: MessageKind
    variable: str
    payload_point_count: int
    emitted_at: int

    def __post_init__(self):
        if self.kind is MessageKind.EVENT and self.payload_point_count != 1:
            raise ValueError("an event message carries exactly one point")
        if self.payload_point_count < 1:
            raise ValueError("messages carry at least one point")


class NodeOutput(NamedTuple):
    reduced: ReducedSeries
    events: list[Event]
    messages: list[UpstreamMessage]


def _day_end(batch: Batch, day_boundary: int) -> int:
    day = (batch.window_start - day_boundary) // SECONDS_PER_DAY
    return int(day * SECONDS_PER_DAY + day_boundary + SECONDS_PER_DAY)


def _frame_stamps(timestamps: np.ndarray, m: int) -> np.ndarray:
    # each frame is stamped at its lower-median sample so it stays on the batch grid
    return np.array([timestamps[a + (b - a - 1) // 2] for a, b in frame_bounds(len(timestamps), m)])


class _SaxState:
    """Per-variable SAX context carried from one day to the next."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.mode = config.breakpoint_mode
        self.breakpoints: list[float] | None = None
        self.levels: list[float] | None = None
        self.previous: SaxWord | None = None
        if self.mode is BreakpointMode.GAUSSIAN:
            self.breakpoints = sax_breakpoints(config.sax_alphabet, self.mode)
            self.levels = sax_levels(config.sax_alphabet, self.mode)

    def encode(self, values: np.ndarray) -> tuple[SaxWord, np.ndarray]:
        a = self.config.sax_alphabet
        m = min(self.config.paa_frames, values.size)
        if self.mode is BreakpointMode.GAUSSIAN:
            x = z_normalize(values)
            scale, shift = float(values.std()), float(values.mean())
        else:
            if self.breakpoints is None:
                # histogram ranges are learned from the first day and then held fixed
                self.breakpoints = sax_breakpoints(a, self.mode, values)
                self.levels = sax_levels(a, self.mode, values)
            x = values
            scale, shift = 1.0, 0.0
        word = sax_symbolize(paa_transform(x, m), self.breakpoints, a)
        levels = np.asarray(self.levels)[list(word.symbols)]
        decoded = shift + scale * levels if scale >= 1e-12 else np.full(m, shift)
        return word, decoded

    @property
    def overhead_points(self) -> int:
        # Gaussian words only decode with the day's mean and standard deviation
        return 2 if self.mode is BreakpointMode.GAUSSIAN else 0


def run_fog_node(series: TimeSeries, config: PipelineConfig) -> NodeOutput:
    """
    Run batching, band checks and per-day relevant-data extraction on one variable.

    Each band violation is sent upstream immediately as its own message. Every
    24-hour window then yields one reduced-set (or SAX word) message. The
    returned reduced series concatenates all days.
    """
    validate_series(series)
    method = config.extraction_method
    meta: dict[str, Any] = {"batch_minutes": config.batch_minutes}
    if method is ExtractionMethod.TREND_CHANGE:
        meta["delta"] = config.trend_delta
    elif method in (ExtractionMethod.PAA, ExtractionMethod.SAX):
        meta["frames"] = config.paa_frames
    if method is ExtractionMethod.SAX:
        meta["alphabet_size"] = config.sax_alphabet
        meta["breakpoint_mode"] = config.breakpoint_mode.value
    if method is ExtractionMethod.DAILY_EXTREMA:
        meta["day_boundary"] = config.day_boundary

    batches = aggregate_batches(series, config.batch_minutes)
    events: list[Event] = []
    messages: list[UpstreamMessage] = []

    for b in batches:
        for ev in check_outliers(b, config.outlier_weight, series.variable):
            events.append(ev)
            messages.append(UpstreamMessage(MessageKind.EVENT, series.variable, 1, b.window_end))

    ts_parts: list[np.ndarray] = []
    vs_parts: list[np.ndarray] = []
    sax = _SaxState(config) if method is ExtractionMethod.SAX else None

    for day in group_by_day(batches, config.day_boundary):
        end = _day_end(day[0], config.day_boundary)
        means = batch_means(day, series.variable, series.unit)
        kind = MessageKind.REDUCED_BATCH_SET
        extra = 0
        if method is ExtractionMethod.DAILY_EXTREMA:
            part = extract_daily_extrema(day, config.day_boundary, series.variable)
            t, v = part.timestamps, part.values
        elif method is ExtractionMethod.TREND_CHANGE:
            if len(means) < 2:
                t, v = means.timestamps, means.values
            else:
                part = detect_trend_changes(means, config.trend_delta)
                t, v = part.timestamps, part.values
        elif method is ExtractionMethod.PAA:
            m = min(config.paa_frames, len(means))
            t = _frame_stamps(means.timestamps, m)
            v = np.asarray(paa_transform(means.values, m).values)
        else:
            word, v = sax.encode(means.values)
            t = _frame_stamps(means.timestamps, word.frame_count)
            kind = MessageKind.SAX_WORD
            extra = sax.overhead_points
            prev = sax.previous
            if prev is not None and prev.frame_count == word.frame_count:
                ev = symbol_deviation_event(prev, word, int(day[0].window_start), series.variable)
                if ev is not None:
                    events.append(ev)
                    messages.append(UpstreamMessage(MessageKind.EVENT, series.variable, 1, end))
            sax.previous = word
        ts_parts.append(np.asarray(t, dtype=np.int64))
        vs_parts.append(np.asarray(v, dtype=np.float64))
        messages.append(UpstreamMessage(kind, series.variable, len(t) + extra, end))

    if ts_parts:
        reduced = ReducedSeries(
            series.variable, method, np.concatenate(ts_parts), np.concatenate(vs_parts), meta
        )
    else:
        reduced = ReducedSeries(series.variable, method, [], [], meta)
    messages.sort(key=lambda msg: (msg.emitted_at, _KIND_ORDER[msg.kind]))
    events.sort(key=lambda e: (e.timestamp, e.kind.value))
    return NodeOutput(reduced, events, messages)


def run_cloud(
    reduced: ReducedSeries,
    raw_for_scoring: TimeSeries,
    config: PipelineConfig,
    method: Interpolant | str | None = None,
) -> tuple[TimeSeries, GofReport]:
    """Rebuild on the batch cadence with one interpolant and score against ``raw_for_scoring``."""
    method = config.interpolant if method is None else Interpolant.parse(method)
    rebuilt = reconstruct(reduced, config.batch_seconds, method, raw_for_scoring.unit)
    report = evaluate(raw_for_scoring, rebuilt, len(reduced), method.value)
    return rebuilt, report


@dataclass(frozen=True)
class VariableSummary:
    variable: str
    unit: str
    raw_samples: int
    scoring_samples: int
    reduced_points: int
    upstream_points: int
    events: int
    messages: int


@dataclass(frozen=True)
class RunReport:
    reports: tuple[GofReport, ...]
    total_raw_samples: int
    total_upstream_points: int
    total_events: int
    config_echo: Mapping[str, Any]
    variables: tuple[VariableSummary, ...] = ()
    events: tuple[Event, ...] = ()
    reconstructions: Mapping[str, TimeSeries] = field(default_factory=dict)
    reduced: Mapping[str, ReducedSeries] = field(default_factory=dict)
    messages: tuple[UpstreamMessage, ...] = ()

    @property
    def bytes_per_point(self) -> int:
        return int(self.config_echo.get("bytes_per_point", 12))

    @property
    def upstream_bytes(self) -> int:
        return self.total_upstream_points * self.bytes_per_point

    @property
    def raw_bytes(self) -> int:
        return self.total_raw_samples * self.bytes_per_point


@dataclass(frozen=True)
class VariableRun:
    summary: VariableSummary
    node: NodeOutput
    reports: tuple[GofReport, ...]
    reconstruction: TimeSeries


def run_variable(series: TimeSeries, config: PipelineConfig) -> VariableRun:
    """Full path for one variable; all three interpolants are scored."""
    validate_series(series)
    cleaned = clean(series, config)
    scoring = average_to_batches(cleaned, config)
    node = run_fog_node(cleaned, config)
    reports = []
    chosen = None
    for method in Interpolant:
        rebuilt, report = run_cloud(node.reduced, scoring, config, method)
        reports.append(report)
        if method is config.interpolant:
            chosen = rebuilt
    upstream = sum(m.payload_point_count for m in node.messages)
    summary = VariableSummary(
        variable=series.variable,
        unit=series.unit,
        raw_samples=len(series),
        scoring_samples=len(scoring),
        reduced_points=len(node.reduced),
        upstream_points=upstream,
        events=len(node.events),
        messages=len(node.messages),
    )
    return VariableRun(summary, node, tuple(reports), chosen)


def run_pipeline(
    series_by_variable: Mapping[str, TimeSeries],
    config: PipelineConfig,
    jobs: int = 1,
) -> RunReport:
    """
    Process every variable and merge the results in sorted-variable order.

    With ``jobs > 1`` variables run on a thread pool; the output does not
    depend on completion order.
    """
    names = sorted(series_by_variable)
    work = [series_by_variable[n] for n in names]
    if jobs > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            runs: Sequence[VariableRun] = list(pool.map(lambda s: run_variable(s, config), work))
    else:
        runs = [run_variable(s, config) for s in work]

    return RunReport(
        reports=tuple(r for run in runs for r in run.reports),
        total_raw_samples=sum(run.summary.raw_samples for run in runs),
        total_upstream_points=sum(run.summary.upstream_points for run in runs),
        total_events=sum(run.summary.events for run in runs),
        config_echo=config.echo(),
        variables=tuple(run.summary for run in runs),
        events=tuple(e for run in runs for e in run.node.events),
        reconstructions={run.summary.variable: run.reconstruction for run in runs},
        reduced={run.summary.variable: run.node.reduced for run in runs},
        messages=tuple(m for run in runs for m in run.node.messages),
    )

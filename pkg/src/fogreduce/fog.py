"""Fog-node reduction primitives: batching, band checks and relevant-point extraction."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InvalidParameters, SeriesTooShort
from .types import (
    SECONDS_PER_DAY,
    Batch,
    Event,
    EventKind,
    ExtractionMethod,
    ReducedSeries,
    TimeSeries,
    parse_time_of_day,
)


def window_index(timestamps: np.ndarray, width: int, offset: int = 0) -> np.ndarray:
    """Index of the ``width``-second window (aligned to ``offset`` mod width) holding each timestamp."""
    return np.floor_divide(np.asarray(timestamps, dtype=np.int64) - offset, width)


def aggregate_batches(series: TimeSeries, batch_minutes: int) -> list[Batch]:
    """
    Summarise ``series`` into fixed windows aligned to epoch multiples.

    Parameters
    ----------
    series : TimeSeries
        Validated input series.
    batch_minutes : int
        Window length in minutes.

    Returns
    -------
    list of Batch
        One batch per non-empty window, in time order.
    """
    if batch_minutes < 1:
        raise InvalidParameters("batch_minutes must be positive")
    if len(series) == 0:
        return []
    width = batch_minutes * 60
    idx = window_index(series.timestamps, width)
    # boundaries of runs of equal window index (series is sorted)
    starts = np.flatnonzero(np.r_[True, idx[1:] != idx[:-1]])
    ends = np.r_[starts[1:], idx.size]
    vals = series.values
    batches = []
    for s, e in zip(starts, ends):
        chunk = vals[s:e]
        lo, hi = float(chunk.min()), float(chunk.max())
        # rounding can push the mean of near-identical values just outside [lo, hi]
        mean = min(max(float(chunk.mean()), lo), hi)
        w0 = int(idx[s]) * width
        batches.append(Batch(w0, w0 + width, lo, hi, mean, int(e - s)))
    return batches


def acceptance_band(mean: float, w: float) -> tuple[float, float]:
    """``(mean*(1-w), mean*(1+w))`` reordered so the low edge comes first for negative means."""
    a, b = mean * (1.0 - w), mean * (1.0 + w)
    return (a, b) if a <= b else (b, a)


def check_outliers(batch: Batch, w: float, variable: str = "") -> list[Event]:
    """Emit a band-violation event for the batch minimum and/or maximum if outside the band."""
    if w < 0:
        raise InvalidParameters("outlier weight must be non-negative")
    low, high = acceptance_band(batch.mean, w)
    events = []
    if batch.min < low:
        events.append(
            Event(variable, batch.window_start, batch.min, low, high, EventKind.BAND_VIOLATION)
        )
    if batch.max > high:
        events.append(
            Event(variable, batch.window_start, batch.max, low, high, EventKind.BAND_VIOLATION)
        )
    return events


def group_by_day(batches: Sequence[Batch], day_boundary=0) -> list[list[Batch]]:
    """Split ordered batches into 24-hour windows starting at ``day_boundary`` (UTC)."""
    offset = parse_time_of_day(day_boundary)
    groups: list[list[Batch]] = []
    current_day = None
    for b in batches:
        day = (b.window_start - offset) // SECONDS_PER_DAY
        if day != current_day:
            groups.append([])
            current_day = day
        groups[-1].append(b)
    return groups


def extract_daily_extrema(
    batches: Sequence[Batch], day_boundary=0, variable: str = ""
) -> ReducedSeries:
    """
    Keep the lowest batch minimum and highest batch maximum of each day.

    Each extremum is stamped with the start of the batch it came from; ties go
    to the earliest batch. A day always contributes exactly two points, even
    when both land on the same batch.
    """
    ts: list[int] = []
    vs: list[float] = []
    for day in group_by_day(batches, day_boundary):
        mins = np.array([b.min for b in day])
        maxs = np.array([b.max for b in day])
        i_lo = int(np.argmin(mins))
        i_hi = int(np.argmax(maxs))
        pts = sorted(
            [(day[i_lo].window_start, 0, mins[i_lo]), (day[i_hi].window_start, 1, maxs[i_hi])]
        )
        for t, _, v in pts:
            ts.append(int(t))
            vs.append(float(v))
    return ReducedSeries(
        variable,
        ExtractionMethod.DAILY_EXTREMA,
        ts,
        vs,
        {"day_boundary": parse_time_of_day(day_boundary)},
    )


def trend_signs(values: np.ndarray, delta: float) -> np.ndarray:
    """Per-step trend with a symmetric dead band: +1 above ``delta``, -1 below ``-delta``, else 0."""
    d = np.diff(np.asarray(values, dtype=np.float64))
    return np.where(d > delta, 1, np.where(d < -delta, -1, 0)).astype(np.int8)


def trend_change_indices(values: np.ndarray, delta: float) -> np.ndarray:
    """0-based indices kept by trend-change extraction, endpoints included."""
    n = len(values)
    t = trend_signs(values, delta)
    # step k joins points k and k+1; a change between steps k and k+1 keeps point k+1
    turning = np.flatnonzero(t[:-1] != t[1:]) + 1
    return np.unique(np.r_[0, turning, n - 1])


def detect_trend_changes(series: TimeSeries, delta: float = 0.0) -> ReducedSeries:
    """Reduce ``series`` to its endpoints plus every point where the dead-banded trend flips."""
    if delta < 0:
        raise InvalidParameters("trend delta must be non-negative")
    if len(series) < 2:
        raise SeriesTooShort(f"trend detection needs at least 2 samples, got {len(series)}")
    keep = trend_change_indices(series.values, delta)
    return ReducedSeries(
        series.variable,
        ExtractionMethod.TREND_CHANGE,
        series.timestamps[keep],
        series.values[keep],
        {"delta": float(delta)},
    )


def batch_means(batches: Sequence[Batch], variable: str, unit: str = "") -> TimeSeries:
    """Batch means as a series stamped at window starts."""
    return TimeSeries(
        variable, [b.window_start for b in batches], [b.mean for b in batches], unit
    )

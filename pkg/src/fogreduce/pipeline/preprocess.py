"""Ingestion clean-up: gap filling, spike removal and averaging to the batch cadence."""

from __future__ import annotations

import numpy as np

from ..fog import aggregate_batches, batch_means
from ..types import PipelineConfig, TimeSeries

MAX_FILLED_GAP_BATCHES = 3


def native_cadence(timestamps: np.ndarray) -> int | None:
    """Most frequent spacing between consecutive samples; the smallest wins a tie."""
    if len(timestamps) < 2:
        return None
    steps, counts = np.unique(np.diff(timestamps), return_counts=True)
    return int(steps[np.argmax(counts)])


def fill_gaps(series: TimeSeries, max_gap_seconds: int) -> TimeSeries:
    """
    Linearly fill missing samples at the native cadence.

    Only gaps whose neighbours are less than ``max_gap_seconds`` apart are
    filled; longer outages stay open.
    """
    cadence = native_cadence(series.timestamps)
    if cadence is None:
        return series
    ts, vs = series.timestamps, series.values
    steps = np.diff(ts)
    holes = np.flatnonzero((steps > cadence) & (steps < max_gap_seconds))
    if holes.size == 0:
        return series
    out_t = [ts[: holes[0] + 1]]
    out_v = [vs[: holes[0] + 1]]
    for n, i in enumerate(holes):
        t0, t1, v0, v1 = ts[i], ts[i + 1], vs[i], vs[i + 1]
        new_t = np.arange(t0 + cadence, t1, cadence, dtype=np.int64)
        out_t.append(new_t)
        out_v.append(v0 + (v1 - v0) * (new_t - t0) / (t1 - t0))
        stop = holes[n + 1] + 1 if n + 1 < holes.size else ts.size
        out_t.append(ts[i + 1 : stop])
        out_v.append(vs[i + 1 : stop])
    return series.with_values(np.concatenate(out_t), np.concatenate(out_v))


def median3(series: TimeSeries) -> TimeSeries:
    """Three-point running median; the two end samples are kept as they are."""
    v = series.values
    if v.size < 3:
        return series
    out = v.copy()
    out[1:-1] = np.median(np.stack([v[:-2], v[1:-1], v[2:]]), axis=0)
    return series.with_values(series.timestamps, out)


def clean(series: TimeSeries, config: PipelineConfig) -> TimeSeries:
    """Gap filling followed by spike removal, at the native cadence."""
    filled = fill_gaps(series, MAX_FILLED_GAP_BATCHES * config.batch_seconds)
    return median3(filled)


def average_to_batches(series: TimeSeries, config: PipelineConfig) -> TimeSeries:
    """One sample per batch window, stamped at the window start, holding the window mean."""
    return batch_means(aggregate_batches(series, config.batch_minutes), series.variable, series.unit)


def preprocess(series: TimeSeries, config: PipelineConfig) -> TimeSeries:
    """Gap fill, then 3-point median, then average to ``config.batch_minutes``."""
    return average_to_batches(clean(series, config), config)

"""Goodness-of-fit statistics and data-reduction accounting."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateVariance,
    EmptyInput,
    InvalidCounts,
    NoOverlap,
    ShapeMismatch,
    ZeroSamples,
)
from .types import GofReport, TimeSeries


def _weights(n: int, weights: Sequence[float] | None) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise ShapeMismatch(f"{w.size} weights for {n} values")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    return w


def _weighted_square_sum(residual: np.ndarray, w: np.ndarray) -> float:
    return float(np.sum(w * residual * residual))


def sse(observed: Sequence[float], fitted: Sequence[float], weights: Sequence[float] | None = None) -> float:
    """Weighted sum of squared errors; unit weights by default."""
    x = np.asarray(observed, dtype=np.float64)
    p = np.asarray(fitted, dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("sse of an empty sequence")
    if x.shape != p.shape:
        raise ShapeMismatch(f"{x.size} observed vs {p.size} fitted values")
    return _weighted_square_sum(x - p, _weights(x.size, weights))


def sst(observed: Sequence[float], weights: Sequence[float] | None = None) -> float:
    """Weighted total sum of squares about the (weighted) mean."""
    x = np.asarray(observed, dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("sst of an empty sequence")
    w = _weights(x.size, weights)
    mean = float(np.sum(w * x) / np.sum(w)) if weights is not None else float(np.mean(x))
    return _weighted_square_sum(x - mean, w)


def r_square(sse_value: float, sst_value: float) -> float:
    if sst_value < 0 or sse_value < 0:
        raise ValueError("sums of squares must be non-negative")
    if sst_value == 0:
        if sse_value == 0:
            return 1.0
        raise DegenerateVariance("observed data has zero variance but a non-zero fit error")
    return 1.0 - sse_value / sst_value


def rmse(sse_value: float, n: int) -> float:
    if n < 1:
        raise ZeroSamples("rmse needs at least one sample")
    return math.sqrt(sse_value / n)


class ReductionStats(NamedTuple):
    ratio: float
    raw_count: int
    reduced_count: int

    @property
    def histogram_pair(self) -> tuple[tuple[str, int], tuple[str, int]]:
        return (("raw", self.raw_count), ("reduced", self.reduced_count))


def reduction_stats(raw_count: int, reduced_count: int) -> ReductionStats:
    if raw_count < 1 or reduced_count < 1 or reduced_count > raw_count:
        raise InvalidCounts(
            f"need 1 <= reduced_count <= raw_count, got raw {raw_count}, reduced {reduced_count}"
        )
    return ReductionStats(raw_count / reduced_count, raw_count, reduced_count)


def evaluate(
    raw: TimeSeries,
    reconstructed: TimeSeries,
    reduced_count: int,
    method: str,
) -> GofReport:
    """
    Score ``reconstructed`` against ``raw`` on their shared timestamps.

    Only raw samples whose timestamps fall exactly on the reconstruction grid
    are compared; the reduction ratio uses the full raw length.
    """
    common, i_raw, i_rec = np.intersect1d(
        raw.timestamps, reconstructed.timestamps, assume_unique=True, return_indices=True
    )
    if common.size == 0:
        raise NoOverlap(f"no shared timestamps between raw and reconstructed {raw.variable!r}")
    x = raw.values[i_raw]
    p = reconstructed.values[i_rec]
    e = sse(x, p)
    t = sst(x)
    stats = reduction_stats(len(raw), reduced_count)
    return GofReport(
        variable=raw.variable,
        method=method,
        sse=e,
        sst=t,
        r_square=r_square(e, t),
        rmse=rmse(e, common.size),
        raw_count=stats.raw_count,
        reduced_count=stats.reduced_count,
        reduction_ratio=stats.ratio,
        n_compared=int(common.size),
        unit=raw.unit,
    )

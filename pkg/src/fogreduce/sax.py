"""
Piecewise Aggregate Approximation (PAA) and Symbolic Aggregate approXimation (SAX).

PAA averages a length-``n`` series over ``M`` equal frames. When ``M`` does
not divide ``n`` the last frame absorbs the remainder and is averaged over
its true count.

SAX maps PAA values to alphabet indices using ``a - 1`` breakpoints. In
Gaussian mode breakpoints are standard-normal quantiles and the input is
z-normalised first; in histogram mode they are empirical quantiles of the
raw data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AlphabetTooSmall,
    BreakpointShapeMismatch,
    DegenerateData,
    EmptyInput,
    FrameCountOutOfRange,
    ShapeMismatch,
)
from .types import BreakpointMode, Event, EventKind, SaxWord

_ZERO_STD = 1e-12


@dataclass(frozen=True)
class PaaVector:
    values: tuple[float, ...]
    source_length: int
    frame_count: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != self.frame_count:
            raise ValueError("PAA vector length must equal frame_count")
        if not 0 <= self.frame_count <= self.source_length:
            raise ValueError("frame_count must not exceed source_length")

    def __len__(self) -> int:
        return self.frame_count


def z_normalize(values: Sequence[float]) -> np.ndarray:
    """Zero mean, unit population standard deviation; all zeros if the input is flat."""
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("cannot z-normalise an empty sequence")
    mu = x.mean()
    sigma = x.std()
    if sigma < _ZERO_STD:
        return np.zeros_like(x)
    return (x - mu) / sigma


def frame_bounds(n: int, m: int) -> list[tuple[int, int]]:
    """Half-open index ranges of the ``m`` PAA frames over ``n`` samples."""
    if m < 1 or m > n:
        raise FrameCountOutOfRange(f"frame count {m} outside [1, {n}]")
    size = n // m
    bounds = [(i * size, (i + 1) * size) for i in range(m)]
    bounds[-1] = (bounds[-1][0], n)
    return bounds


def paa_transform(values: Sequence[float], m: int) -> PaaVector:
    """Frame means of ``values`` over ``m`` frames, computed in one pass with running sums."""
    x = [float(v) for v in values]
    n = len(x)
    if m < 1 or m > n:
        raise FrameCountOutOfRange(f"frame count {m} outside [1, {n}]")
    size = n // m
    out = []
    acc = 0.0
    count = 0
    for j, v in enumerate(x):
        acc += v
        count += 1
        # the last frame keeps accumulating until the end of the series
        if count == size and len(out) < m - 1 or j == n - 1:
            out.append(acc / count)
            acc = 0.0
            count = 0
    return PaaVector(tuple(out), n, m)


def paa_distance(xbar: PaaVector, ybar: PaaVector) -> float:
    """Lower-bounding distance ``sqrt(n/M) * sqrt(sum((x_i - y_i)^2))`` between two PAA vectors."""
    if xbar.frame_count != ybar.frame_count or xbar.source_length != ybar.source_length:
        raise ShapeMismatch(
            f"PAA shapes differ: ({xbar.source_length}, {xbar.frame_count}) vs "
            f"({ybar.source_length}, {ybar.frame_count})"
        )
    if xbar.frame_count == 0:
        return 0.0
    d = np.subtract(xbar.values, ybar.values)
    return math.sqrt(xbar.source_length / xbar.frame_count) * math.sqrt(float(np.dot(d, d)))


def euclidean_distance(x: Sequence[float], y: Sequence[float]) -> float:
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"lengths differ: {a.size} vs {b.size}")
    d = a - b
    return math.sqrt(float(np.dot(d, d)))


# Acklam's rational approximation of the inverse normal CDF (relative error < 1.2e-9)
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_ppf(p: float) -> float:
    """Standard normal quantile, refined with one Halley step to near machine precision."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        )
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def _probabilities(alphabet_size: int) -> list[float]:
    return [k / alphabet_size for k in range(1, alphabet_size)]


def _require_alphabet(alphabet_size: int) -> None:
    if alphabet_size < 2:
        raise AlphabetTooSmall(f"alphabet size must be >= 2, got {alphabet_size}")


def _strictly_increasing(values: Sequence[float]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


def sax_breakpoints(
    alphabet_size: int,
    mode: BreakpointMode | str = BreakpointMode.GAUSSIAN,
    data: Sequence[float] | None = None,
) -> list[float]:
    """
    Breakpoints splitting the value axis into ``alphabet_size`` equiprobable regions.

    Parameters
    ----------
    alphabet_size : int
        Number of symbols, at least 2.
    mode : BreakpointMode
        ``GAUSSIAN`` for standard-normal quantiles, ``HISTOGRAM`` for empirical
        quantiles of ``data`` (linear interpolation between order statistics).
    data : sequence of float, optional
        Required in histogram mode.

    Raises
    ------
    AlphabetTooSmall
        If ``alphabet_size < 2``.
    EmptyInput
        If histogram mode is requested without data.
    DegenerateData
        If the empirical quantiles are not strictly increasing.
    """
    _require_alphabet(alphabet_size)
    probs = _probabilities(alphabet_size)
    if BreakpointMode.parse(mode) is BreakpointMode.GAUSSIAN:
        return [norm_ppf(p) for p in probs]
    if data is None or len(data) == 0:
        raise EmptyInput("histogram breakpoints need non-empty data")
    bps = [float(q) for q in np.quantile(np.asarray(data, dtype=np.float64), probs)]
    if not _strictly_increasing(bps):
        raise DegenerateData(f"empirical quantiles are not strictly increasing: {bps}")
    return bps


def sax_levels(
    alphabet_size: int,
    mode: BreakpointMode | str = BreakpointMode.GAUSSIAN,
    data: Sequence[float] | None = None,
) -> list[float]:
    """Representative value of each symbol: the quantile at the middle of its probability band."""
    _require_alphabet(alphabet_size)
    probs = [(k + 0.5) / alphabet_size for k in range(alphabet_size)]
    if BreakpointMode.parse(mode) is BreakpointMode.GAUSSIAN:
        return [norm_ppf(p) for p in probs]
    if data is None or len(data) == 0:
        raise EmptyInput("histogram levels need non-empty data")
    return [float(q) for q in np.quantile(np.asarray(data, dtype=np.float64), probs)]


def sax_symbolize(paa: PaaVector, breakpoints: Sequence[float], alphabet_size: int) -> SaxWord:
    """Symbol ``k`` where ``breakpoints[k-1] < value <= breakpoints[k]``; on a breakpoint the lower symbol wins."""
    _require_alphabet(alphabet_size)
    bps = [float(b) for b in breakpoints]
    if len(bps) != alphabet_size - 1 or not _strictly_increasing(bps):
        raise BreakpointShapeMismatch(
            f"need {alphabet_size - 1} strictly increasing breakpoints, got {bps}"
        )
    symbols = np.searchsorted(np.asarray(bps), np.asarray(paa.values, dtype=np.float64), side="left")
    return SaxWord(tuple(int(s) for s in symbols), alphabet_size, paa.frame_count, tuple(bps))


def sax_word(
    values: Sequence[float],
    frames: int,
    alphabet_size: int,
    mode: BreakpointMode | str = BreakpointMode.GAUSSIAN,
    breakpoints: Sequence[float] | None = None,
) -> SaxWord:
    """Convenience: normalise (Gaussian mode), PAA, then symbolise."""
    mode = BreakpointMode.parse(mode)
    x = z_normalize(values) if mode is BreakpointMode.GAUSSIAN else np.asarray(values, dtype=float)
    if breakpoints is None:
        breakpoints = sax_breakpoints(alphabet_size, mode, x)
    return sax_symbolize(paa_transform(x, frames), breakpoints, alphabet_size)


def symbol_deviation_event(
    expected: SaxWord, observed: SaxWord, at: int, variable: str
) -> Event | None:
    """
    Event for the first frame whose observed symbol differs from the expected one.

    The event's ``observed`` field holds that frame index; the band records the
    expected symbol's value range (``-inf``/``inf`` at the alphabet ends).
    """
    if (
        expected.frame_count != observed.frame_count
        or expected.alphabet_size != observed.alphabet_size
        or expected.breakpoints != observed.breakpoints
    ):
        raise ShapeMismatch("SAX words differ in frame count, alphabet or breakpoints")
    for i, (e, o) in enumerate(zip(expected.symbols, observed.symbols)):
        if e != o:
            edges = (-math.inf, *expected.breakpoints, math.inf)
            return Event(variable, at, float(i), edges[e], edges[e + 1], EventKind.SYMBOL_DEVIATION)
    return None

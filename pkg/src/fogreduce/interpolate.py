"""
Interpolants used on the cloud side to rebuild dense series from reduced points.

* piecewise linear (divided differences),
* global polynomial through all knots (Vandermonde system, exposition only),
* C2 cubic spline with not-a-knot ends,
* shape-preserving piecewise cubic Hermite (pchip, Fritsch-Carlson slopes).

None of them extrapolate: a query outside ``[xs[0], xs[-1]]`` raises
:class:`OutOfRangeQuery`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegreeTooHigh,
    DuplicateAbscissa,
    EmptyCoefficients,
    IllConditioned,
    OutOfRangeQuery,
    ShapeMismatch,
    TooFewKnots,
    UnsortedKnots,
)
from .types import Interpolant, ReducedSeries, TimeSeries

MAX_LAGRANGE_POINTS = 12
_PIVOT_RTOL = 1e-13
_RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class Knots:
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=np.float64).reshape(-1)
        ys = np.array(self.ys, dtype=np.float64).reshape(-1)
        if xs.shape != ys.shape:
            raise ShapeMismatch(f"{xs.size} abscissae vs {ys.size} ordinates")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self) -> int:
        return int(self.xs.size)

    def require_increasing(self, minimum: int = 2) -> None:
        if len(self) < minimum:
            raise TooFewKnots(f"need at least {minimum} knots, got {len(self)}")
        steps = np.diff(self.xs)
        if np.any(steps == 0):
            raise DuplicateAbscissa("knot abscissae must be distinct")
        if np.any(steps < 0):
            raise UnsortedKnots("knot abscissae must be increasing")

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.xs)

    @property
    def slopes(self) -> np.ndarray:
        """Divided differences ``(y[i+1] - y[i]) / (x[i+1] - x[i])``."""
        return np.diff(self.ys) / np.diff(self.xs)


def _locate(knots: Knots, query_xs) -> tuple[np.ndarray, np.ndarray]:
    """Interval index and offset from its left knot for every query."""
    q = np.asarray(query_xs, dtype=np.float64).reshape(-1)
    xs = knots.xs
    outside = (q < xs[0]) | (q > xs[-1]) | np.isnan(q)
    if np.any(outside):
        bad = float(q[np.flatnonzero(outside)[0]])
        raise OutOfRangeQuery(f"query {bad} outside [{xs[0]}, {xs[-1]}]")
    i = np.clip(np.searchsorted(xs, q, side="right") - 1, 0, xs.size - 2)
    return i, q - xs[i]


def _pin_last_knot(knots: Knots, query_xs, out: np.ndarray) -> np.ndarray:
    # interior knots are hit with t == 0; the right end needs an explicit pin
    q = np.asarray(query_xs, dtype=np.float64).reshape(-1)
    out[q == knots.xs[-1]] = knots.ys[-1]
    return out


def linear_interpolate(knots: Knots, query_xs: Sequence[float]) -> np.ndarray:
    knots.require_increasing()
    i, t = _locate(knots, query_xs)
    out = knots.ys[i] + knots.slopes[i] * t
    return _pin_last_knot(knots, query_xs, out)


class PiecewiseCubic:
    """
    Cubic Hermite pieces ``y_i + s_i t + c2_i t^2 + c3_i t^3`` with ``t = x - x_i``.

    The coefficient table is computed once and is read-only, so one instance
    can serve concurrent evaluations.
    """

    def __init__(self, knots: Knots, node_slopes: np.ndarray):
        knots.require_increasing()
        s = np.asarray(node_slopes, dtype=np.float64)
        if s.shape != knots.xs.shape:
            raise ShapeMismatch("need one slope per knot")
        h = knots.h
        delta = knots.slopes
        # written so that s == delta on both ends gives exactly zero curvature terms
        c2 = (2.0 * (delta - s[:-1]) + (delta - s[1:])) / h
        c3 = ((s[:-1] - delta) + (s[1:] - delta)) / (h * h)
        self.knots = knots
        self.node_slopes = s
        self.c2 = c2
        self.c3 = c3
        for arr in (s, c2, c3):
            arr.setflags(write=False)

    def __call__(self, query_xs: Sequence[float]) -> np.ndarray:
        i, t = _locate(self.knots, query_xs)
        out = self.knots.ys[i] + t * (self.node_slopes[i] + t * (self.c2[i] + t * self.c3[i]))
        return _pin_last_knot(self.knots, query_xs, out)

    def derivative(self, query_xs: Sequence[float], order: int = 1) -> np.ndarray:
        i, t = _locate(self.knots, query_xs)
        if order == 1:
            return self.node_slopes[i] + t * (2.0 * self.c2[i] + 3.0 * t * self.c3[i])
        if order == 2:
            return 2.0 * self.c2[i] + 6.0 * t * self.c3[i]
        if order == 3:
            return 6.0 * self.c3[i]
        raise ValueError("order must be 1, 2 or 3")


def solve_tridiagonal(lower, diag, upper, rhs) -> np.ndarray:
    """
    Solve a tridiagonal system by Gaussian elimination with partial pivoting.

    Row swaps introduce fill-in on the second superdiagonal, as in LAPACK's
    ``gtsv``. ``lower`` and ``upper`` have length ``n - 1``.
    """
    d = np.array(diag, dtype=np.float64)
    n = d.size
    dl = np.array(lower, dtype=np.float64)
    u1 = np.zeros(n)
    u1[: n - 1] = upper
    u2 = np.zeros(n)
    b = np.array(rhs, dtype=np.float64)
    if dl.size != n - 1 or b.size != n:
        raise ShapeMismatch("inconsistent tridiagonal system sizes")
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            if d[i] == 0.0:
                raise IllConditioned("singular tridiagonal system")
            f = dl[i] / d[i]
            d[i + 1] -= f * u1[i]
            b[i + 1] -= f * b[i]
        else:
            f = d[i] / dl[i]
            nxt_u1 = u1[i + 1] if i + 1 < n - 1 else 0.0
            new_d, new_u1, new_b = u1[i] - f * d[i + 1], -f * nxt_u1, b[i] - f * b[i + 1]
            d[i], u1[i], u2[i], b[i] = dl[i], d[i + 1], nxt_u1, b[i + 1]
            d[i + 1], b[i + 1] = new_d, new_b
            if i + 1 < n - 1:
                u1[i + 1] = new_u1
    if d[n - 1] == 0.0:
        raise IllConditioned("singular tridiagonal system")
    x = np.zeros(n)
    x[n - 1] = b[n - 1] / d[n - 1]
    if n > 1:
        x[n - 2] = (b[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (b[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i]
    return x


def not_a_knot_slopes(knots: Knots) -> np.ndarray:
    """Node derivatives of the C2 cubic spline whose first two and last two pieces coincide."""
    knots.require_increasing()
    n = len(knots)
    h = knots.h
    delta = knots.slopes
    if n == 2:
        return np.array([delta[0], delta[0]])
    if n == 3:
        # not-a-knot on three points is the interpolating parabola
        c = (delta[1] - delta[0]) / (h[0] + h[1])
        return np.array([delta[0] - c * h[0], delta[0] + c * h[0], delta[0] + c * (h[0] + 2 * h[1])])

    diag = np.empty(n)
    upper = np.empty(n - 1)
    lower = np.empty(n - 1)
    rhs = np.empty(n)

    diag[1:-1] = 2.0 * (h[:-1] + h[1:])
    upper[1:] = h[:-1]
    lower[:-1] = h[1:]
    rhs[1:-1] = 3.0 * (h[1:] * delta[:-1] + h[:-1] * delta[1:])

    span = h[0] + h[1]
    diag[0] = h[1]
    upper[0] = span
    rhs[0] = ((h[0] + 2.0 * span) * h[1] * delta[0] + h[0] ** 2 * delta[1]) / span

    span = h[-1] + h[-2]
    diag[-1] = h[-2]
    lower[-1] = span
    rhs[-1] = (h[-1] ** 2 * delta[-2] + (2.0 * span + h[-1]) * h[-2] * delta[-1]) / span
    return solve_tridiagonal(lower, diag, upper, rhs)


def _pchip_end_slope(h0: float, h1: float, d0: float, d1: float) -> float:
    s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if np.sign(s) != np.sign(d0):
        return 0.0
    if np.sign(d0) != np.sign(d1) and abs(s) > abs(3.0 * d0):
        return 3.0 * d0
    return s


def pchip_slopes(knots: Knots) -> np.ndarray:
    """Fritsch-Carlson slopes: weighted harmonic mean inside, zero at local extrema and plateaus."""
    knots.require_increasing()
    n = len(knots)
    h = knots.h
    delta = knots.slopes
    if n == 2:
        return np.array([delta[0], delta[0]])
    s = np.zeros(n)
    k = np.flatnonzero(delta[:-1] * delta[1:] > 0) + 1
    w1 = 2.0 * h[k] + h[k - 1]
    w2 = h[k] + 2.0 * h[k - 1]
    s[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k])
    s[0] = _pchip_end_slope(h[0], h[1], delta[0], delta[1])
    s[-1] = _pchip_end_slope(h[-1], h[-2], delta[-1], delta[-2])
    return s


def spline_interpolant(knots: Knots) -> PiecewiseCubic:
    return PiecewiseCubic(knots, not_a_knot_slopes(knots))


def pchip_interpolant(knots: Knots) -> PiecewiseCubic:
    return PiecewiseCubic(knots, pchip_slopes(knots))


def cubic_spline(knots: Knots, query_xs: Sequence[float]) -> np.ndarray:
    knots.require_increasing()
    if len(knots) == 2:
        return linear_interpolate(knots, query_xs)
    return spline_interpolant(knots)(query_xs)


def pchip(knots: Knots, query_xs: Sequence[float]) -> np.ndarray:
    return pchip_interpolant(knots)(query_xs)


def lagrange_fit(knots: Knots) -> np.ndarray:
    """
    Power-form coefficients (highest degree first) of the polynomial through all knots.

    Solves the Vandermonde system by Gaussian elimination with partial
    pivoting. Limited to 12 knots; conditioning degrades quickly beyond that.

    Raises
    ------
    DuplicateAbscissa
        If two knots share an abscissa.
    DegreeTooHigh
        If more than 12 knots are given.
    IllConditioned
        If a pivot falls below 1e-13 of its row norm or the knot residual
        exceeds 1e-8 relative.
    """
    n = len(knots)
    if n == 0:
        raise TooFewKnots("need at least one knot")
    if np.unique(knots.xs).size != n:
        raise DuplicateAbscissa("knot abscissae must be distinct")
    if n > MAX_LAGRANGE_POINTS:
        raise DegreeTooHigh(f"at most {MAX_LAGRANGE_POINTS} knots supported, got {n}")

    a = np.vander(knots.xs, n)
    b = knots.ys.copy()
    row_norm = np.abs(a).max(axis=1)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
            row_norm[[k, p]] = row_norm[[p, k]]
        if abs(a[k, k]) < _PIVOT_RTOL * row_norm[k]:
            raise IllConditioned(f"pivot {a[k, k]:.3e} too small at column {k}")
        f = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(f, a[k, k:])
        b[k + 1 :] -= f * b[k]
    coeffs = np.zeros(n)
    for k in range(n - 1, -1, -1):
        coeffs[k] = (b[k] - a[k, k + 1 :] @ coeffs[k + 1 :]) / a[k, k]

    residual = max(abs(polynomial_eval(coeffs, x) - y) for x, y in zip(knots.xs, knots.ys))
    if residual > _RESIDUAL_RTOL * max(1.0, float(np.abs(knots.ys).max())):
        raise IllConditioned(f"knot residual {residual:.3e} too large")
    return coeffs


def polynomial_eval(coeffs: Sequence[float], x: float) -> float:
    """Horner evaluation, highest-degree coefficient first."""
    if len(coeffs) == 0:
        raise EmptyCoefficients("no coefficients")
    acc = 0.0
    for c in coeffs:
        acc = acc * x + float(c)
    return acc


_EVALUATORS = {
    Interpolant.LINEAR: linear_interpolate,
    Interpolant.SPLINE: cubic_spline,
    Interpolant.PCHIP: pchip,
}


def interpolate(knots: Knots, query_xs: Sequence[float], method: Interpolant | str) -> np.ndarray:
    return _EVALUATORS[Interpolant.parse(method)](knots, query_xs)


def reduced_to_knots(reduced: ReducedSeries) -> tuple[int, Knots]:
    """
    Knots relative to the first reduced timestamp, plus that origin.

    Points sharing a timestamp (daily extrema from one batch) collapse to
    their mean.
    """
    ts = reduced.timestamps
    if ts.size == 0:
        raise TooFewKnots("reduced series is empty")
    uniq, inverse = np.unique(ts, return_inverse=True)
    sums = np.zeros(uniq.size)
    np.add.at(sums, inverse, reduced.values)
    counts = np.bincount(inverse, minlength=uniq.size)
    origin = int(uniq[0])
    return origin, Knots((uniq - origin).astype(np.float64), sums / counts)


def reconstruct(
    reduced: ReducedSeries,
    grid_step_seconds: int,
    method: Interpolant | str = Interpolant.PCHIP,
    unit: str = "",
) -> TimeSeries:
    """Evaluate the chosen interpolant through ``reduced`` on a uniform grid from its first to last point."""
    if grid_step_seconds < 1:
        raise ValueError("grid step must be a positive number of seconds")
    method = Interpolant.parse(method)
    origin, knots = reduced_to_knots(reduced)
    if len(knots) < 2:
        raise TooFewKnots(f"need at least 2 distinct points, got {len(knots)}")
    span = int(knots.xs[-1])
    offsets = np.arange(0, span + 1, grid_step_seconds, dtype=np.int64)
    values = interpolate(knots, offsets.astype(np.float64), method)
    return TimeSeries(reduced.variable, offsets + origin, values, unit, method.value)

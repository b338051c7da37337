import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogreduce import (
    Batch,
    EventKind,
    ExtractionMethod,
    TimeSeries,
    aggregate_batches,
    check_outliers,
    detect_trend_changes,
    extract_daily_extrema,
)
from fogreduce.errors import SeriesTooShort
from fogreduce.fog import acceptance_band

from conftest import make_series


def brute_force_trend_points(values, delta):
    """Literal 1-based reading of the trend rule with a symmetric dead band."""
    n = len(values)
    x = [None] + list(values)  # 1-based
    t = {}
    for i in range(1, n):
        d = x[i + 1] - x[i]
        if d > delta:
            t[i] = 1
        elif d < -delta:
            t[i] = -1
        else:
            t[i] = 0
    keep = {1, n}
    for i in range(1, n - 1):
        if t[i] != t[i + 1]:
            keep.add(i + 1)
    return sorted(k - 1 for k in keep)


def brute_force_batches(ts, vs, width):
    buckets = {}
    for t, v in zip(ts, vs):
        buckets.setdefault(t // width, []).append(v)
    out = []
    for k in sorted(buckets):
        vals = buckets[k]
        out.append((k * width, min(vals), max(vals), math.fsum(vals) / len(vals), len(vals)))
    return out


class TestAggregateBatches:
    def test_three_samples_one_window(self):
        (b,) = aggregate_batches(TimeSeries("x", [0, 600, 1200], [4.0, 6.0, 5.0]), 30)
        assert (b.min, b.max, b.mean, b.count) == (4.0, 6.0, 5.0, 3)
        assert (b.window_start, b.window_end) == (0, 1800)

    def test_single_sample(self):
        (b,) = aggregate_batches(TimeSeries("x", [100], [7.0]), 30)
        assert (b.min, b.max, b.mean, b.count) == (7.0, 7.0, 7.0, 1)

    def test_empty(self):
        assert aggregate_batches(TimeSeries("x", [], []), 30) == []

    def test_windows_align_to_epoch_and_skip_empty(self):
        s = TimeSeries("x", [1799, 1800, 9000], [1.0, 2.0, 3.0])
        starts = [b.window_start for b in aggregate_batches(s, 30)]
        assert starts == [0, 1800, 9000]

    def test_mean_stays_inside_range_for_identical_values(self):
        (b,) = aggregate_batches(TimeSeries("x", [0, 1, 2], [0.1, 0.1, 0.1]), 30)
        assert b.min <= b.mean <= b.max

    def test_matches_brute_force(self, rng):
        for _ in range(50):
            ts = np.unique(rng.integers(0, 50_000, rng.integers(1, 200)))
            vs = rng.normal(20, 5, ts.size)
            got = aggregate_batches(TimeSeries("x", ts, vs), 15)
            want = brute_force_batches(ts.tolist(), vs.tolist(), 900)
            assert len(got) == len(want)
            for b, (w0, lo, hi, mean, count) in zip(got, want):
                assert (b.window_start, b.min, b.max, b.count) == (w0, lo, hi, count)
                assert b.mean == pytest.approx(mean, rel=1e-12)
                assert b.min <= b.mean <= b.max


class TestCheckOutliers:
    def test_max_above_band(self):
        (ev,) = check_outliers(Batch(0, 1800, 9.0, 13.0, 10.0, 4), 0.2, "x")
        assert ev.observed == 13.0
        assert (ev.band_low, ev.band_high) == pytest.approx((8.0, 12.0))
        assert ev.kind is EventKind.BAND_VIOLATION
        assert ev.timestamp == 0

    def test_degenerate_batch_inside_band(self):
        assert check_outliers(Batch(0, 1800, 7.0, 7.0, 7.0, 1), 0.1) == []

    def test_zero_width_band(self):
        events = check_outliers(Batch(0, 1800, 9.0, 11.0, 10.0, 2), 0.0)
        assert [e.observed for e in events] == [9.0, 11.0]
        assert all((e.band_low, e.band_high) == (10.0, 10.0) for e in events)

    def test_negative_mean_band_is_reordered(self):
        assert acceptance_band(-10.0, 0.2) == pytest.approx((-12.0, -8.0))
        events = check_outliers(Batch(0, 1800, -13.0, -9.0, -10.0, 2), 0.2)
        assert [e.observed for e in events] == [-13.0]

    @given(
        st.floats(0.01, 1e3),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
    )
    def test_huge_weight_never_fires_for_positive_mean(self, mean, lo_frac, hi_frac):
        lo = mean * (1 - lo_frac)
        hi = mean * (1 + hi_frac * 5)
        assert check_outliers(Batch(0, 60, lo, hi, mean, 2), 10.0) == []


class TestDailyExtrema:
    def _day(self, values, start=0):
        return [Batch(start + 1800 * k, start + 1800 * (k + 1), v, v, v, 1) for k, v in enumerate(values)]

    def test_sinusoidal_day(self):
        values = [-math.cos(2 * math.pi * (k - 3) / 48) for k in range(48)]
        # brute-force scan for the earliest trough and peak
        lo_k = hi_k = 0
        for k, v in enumerate(values):
            if v < values[lo_k]:
                lo_k = k
            if v > values[hi_k]:
                hi_k = k
        assert (lo_k, hi_k) == (3, 27)
        r = extract_daily_extrema(self._day(values))
        assert r.method is ExtractionMethod.DAILY_EXTREMA
        assert r.timestamps.tolist() == [1800 * 3, 1800 * 27]
        assert r.values.tolist() == [values[3], values[27]]

    def test_constant_day_uses_earliest_batch(self):
        r = extract_daily_extrema(self._day([5.0] * 48))
        assert r.timestamps.tolist() == [0, 0]
        assert r.values.tolist() == [5.0, 5.0]

    def test_empty(self):
        assert len(extract_daily_extrema([])) == 0

    def test_two_points_per_day_and_boundary(self):
        values = list(np.sin(np.arange(96) * 2 * np.pi / 48))
        assert len(extract_daily_extrema(self._day(values))) == 4
        # shifting the day start by six hours changes the grouping, not the point count per group
        r = extract_daily_extrema(self._day(values), day_boundary="06:00")
        assert len(r) == 6


class TestTrendChanges:
    def test_hand_trace(self):
        r = detect_trend_changes(make_series([1, 2, 3, 2, 2, 3], step=1))
        assert r.timestamps.tolist() == [0, 2, 3, 4, 5]
        assert r.values.tolist() == [1, 3, 2, 2, 3]
        assert r.meta["delta"] == 0.0

    def test_monotone_keeps_endpoints(self):
        r = detect_trend_changes(make_series([1, 2, 3, 4], step=1))
        assert r.timestamps.tolist() == [0, 3]

    def test_constant_keeps_endpoints(self):
        r = detect_trend_changes(make_series([5, 5, 5], step=1))
        assert r.timestamps.tolist() == [0, 2]

    def test_dead_band_suppresses_small_moves(self):
        r = detect_trend_changes(make_series([0, 0.05, 0.0, 0.04, 1.0], step=1), 0.1)
        # every step within the band reads as flat until the final jump
        assert r.timestamps.tolist() == [0, 3, 4]

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            detect_trend_changes(make_series([1.0]))

    @given(
        st.lists(st.integers(-3, 3), min_size=2, max_size=60),
        st.sampled_from([0.0, 0.5, 1.0, 2.5]),
    )
    def test_subset_with_endpoints(self, values, delta):
        s = make_series(values, step=1)
        r = detect_trend_changes(s, delta)
        idx = r.timestamps.tolist()
        assert idx[0] == 0 and idx[-1] == len(values) - 1
        assert set(idx) <= set(range(len(values)))
        assert r.values.tolist() == [values[i] for i in idx]
        assert len(r) <= len(values)

    def test_matches_brute_force_on_random_series(self, rng):
        for _ in range(300):
            n = int(rng.integers(2, 80))
            values = np.round(rng.normal(0, 1, n), 1)
            delta = float(rng.choice([0.0, 0.1, 0.35]))
            got = detect_trend_changes(make_series(values, step=1), delta).timestamps.tolist()
            assert got == brute_force_trend_points(values.tolist(), delta)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogreduce import (
    EventKind,
    PaaVector,
    SaxWord,
    euclidean_distance,
    paa_distance,
    paa_transform,
    sax_breakpoints,
    sax_symbolize,
    symbol_deviation_event,
    z_normalize,
)
from fogreduce.errors import (
    AlphabetTooSmall,
    BreakpointShapeMismatch,
    DegenerateData,
    EmptyInput,
    FrameCountOutOfRange,
    ShapeMismatch,
)
from fogreduce.sax import norm_ppf, sax_levels, sax_word

finite = st.floats(-1e3, 1e3, allow_nan=False)


def bisect_ppf(p, lo=-40.0, hi=40.0):
    """Inverse normal CDF by bisection on erfc; independent of the rational approximation."""
    # erfc rather than 1 + erf: the latter cancels catastrophically in the lower tail
    cdf = lambda x: 0.5 * math.erfc(-x / math.sqrt(2.0))  # noqa: E731
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def naive_paa(values, m):
    n = len(values)
    size = n // m
    out = []
    for i in range(m):
        frame = values[i * size : (i + 1) * size] if i < m - 1 else values[i * size :]
        acc = 0.0
        for v in frame:
            acc += v
        out.append(acc / len(frame))
    return out


class TestZNormalize:
    def test_flat_input(self):
        assert z_normalize([1, 1, 1]).tolist() == [0, 0, 0]

    def test_two_points(self):
        assert z_normalize([0, 2]).tolist() == [-1.0, 1.0]

    def test_empty(self):
        with pytest.raises(EmptyInput):
            z_normalize([])

    @given(st.lists(finite, min_size=2, max_size=50))
    def test_moments(self, xs):
        z = z_normalize(xs)
        if np.std(xs) >= 1e-6:
            assert abs(z.mean()) < 1e-9
            assert z.std() == pytest.approx(1.0, abs=1e-9)


class TestPaa:
    def test_two_frames(self):
        assert paa_transform([1, 2, 3, 4], 2).values == (1.5, 3.5)

    def test_constant(self):
        assert paa_transform([7, 7, 7, 7], 2).values == (7.0, 7.0)

    @given(st.lists(finite, min_size=1, max_size=40))
    def test_identity_when_m_equals_n(self, xs):
        assert list(paa_transform(xs, len(xs)).values) == [float(x) for x in xs]

    def test_frame_count_bounds(self):
        with pytest.raises(FrameCountOutOfRange):
            paa_transform([1, 2], 3)
        with pytest.raises(FrameCountOutOfRange):
            paa_transform([1, 2], 0)

    def test_remainder_goes_to_last_frame(self):
        p = paa_transform([1, 2, 3, 4, 5, 6, 7], 3)
        assert p.values == (1.5, 3.5, 6.0)
        assert (p.source_length, p.frame_count) == (7, 3)

    def test_matches_naive_frame_means(self, rng):
        for _ in range(300):
            n = int(rng.integers(1, 120))
            m = int(rng.integers(1, n + 1))
            xs = rng.normal(0, 10, n).tolist()
            assert list(paa_transform(xs, m).values) == naive_paa(xs, m)

    @given(
        st.integers(1, 8).flatmap(
            lambda m: st.tuples(
                st.just(m),
                st.integers(1, 6).flatmap(
                    lambda k: st.tuples(
                        st.lists(finite, min_size=m * k, max_size=m * k),
                        st.lists(finite, min_size=m * k, max_size=m * k),
                    )
                ),
            )
        ),
        st.floats(-5, 5),
        st.floats(-5, 5),
    )
    def test_linear(self, data, a, b):
        m, (x, y) = data
        x, y = np.array(x), np.array(y)
        left = np.array(paa_transform(a * x + b * y, m).values)
        right = a * np.array(paa_transform(x, m).values) + b * np.array(paa_transform(y, m).values)
        assert np.allclose(left, right, rtol=0, atol=1e-9 * (1 + np.abs(x).max() + np.abs(y).max()) * 10)

    def test_mean_preserved_when_divisible(self, rng):
        for _ in range(100):
            m = int(rng.integers(1, 10))
            xs = rng.normal(5, 3, m * int(rng.integers(1, 20)))
            assert np.mean(paa_transform(xs, m).values) == pytest.approx(xs.mean(), abs=1e-9)


class TestDistances:
    def test_paa_identity(self):
        p = paa_transform([1, 2, 3, 4], 2)
        assert paa_distance(p, p) == 0.0

    def test_paa_hand_value(self):
        x = PaaVector((0.0, 0.0), 4, 2)
        y = PaaVector((1.0, 1.0), 4, 2)
        assert paa_distance(x, y) == pytest.approx(2.0, abs=1e-15)

    def test_paa_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            paa_distance(PaaVector((0.0, 0.0), 6, 2), PaaVector((0.0, 0.0, 0.0), 6, 3))

    def test_euclidean(self):
        assert euclidean_distance([1, 2], [1, 2]) == 0.0
        assert euclidean_distance([0, 0], [3, 4]) == 5.0
        with pytest.raises(ShapeMismatch):
            euclidean_distance([0, 0], [0, 0, 0])

    def test_lower_bound_small_sample(self, rng):
        for _ in range(200):
            m = int(rng.choice([1, 2, 3, 4, 8]))
            n = m * int(rng.integers(1, 16))
            x, y = rng.normal(0, 1, n), rng.normal(0, 1, n)
            assert paa_distance(paa_transform(x, m), paa_transform(y, m)) <= euclidean_distance(x, y) + 1e-9


class TestBreakpoints:
    def test_binary_gaussian(self):
        assert sax_breakpoints(2) == [0.0]

    def test_quaternary_gaussian(self):
        bps = sax_breakpoints(4)
        assert bps == pytest.approx([bisect_ppf(0.25), 0.0, bisect_ppf(0.75)], abs=1e-12)
        assert bps == pytest.approx([-0.6745, 0.0, 0.6745], abs=5e-5)

    def test_histogram_median(self):
        assert sax_breakpoints(2, "histogram", [1, 2, 3, 4]) == [2.5]

    def test_alphabet_too_small(self):
        with pytest.raises(AlphabetTooSmall):
            sax_breakpoints(1)

    def test_histogram_needs_data(self):
        with pytest.raises(EmptyInput):
            sax_breakpoints(3, "histogram", [])

    def test_histogram_ties_rejected(self):
        with pytest.raises(DegenerateData):
            sax_breakpoints(4, "histogram", [0, 0, 0, 0, 0, 1])

    @pytest.mark.parametrize("p", [1e-10, 1e-4, 0.02, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.99, 1 - 1e-6])
    def test_ppf_against_bisection(self, p):
        assert norm_ppf(p) == pytest.approx(bisect_ppf(p), abs=1e-8)

    @pytest.mark.parametrize("a", range(2, 21))
    def test_gaussian_increasing(self, a):
        bps = sax_breakpoints(a)
        assert len(bps) == a - 1
        assert all(x < y for x, y in zip(bps, bps[1:]))

    def test_levels_sit_between_breakpoints(self):
        bps = sax_breakpoints(5)
        edges = [-math.inf, *bps, math.inf]
        for k, level in enumerate(sax_levels(5)):
            assert edges[k] < level < edges[k + 1]


class TestSymbolize:
    def test_sign_test(self):
        w = sax_symbolize(PaaVector((-1.0, 0.2), 2, 2), [0.0], 2)
        assert w.symbols == (0, 1)

    def test_empty(self):
        w = sax_symbolize(PaaVector((), 0, 0), [0.0], 2)
        assert w.symbols == ()

    def test_on_breakpoint_maps_low(self):
        assert sax_symbolize(PaaVector((0.0,), 1, 1), [0.0], 2).symbols == (0,)

    def test_breakpoint_shape(self):
        with pytest.raises(BreakpointShapeMismatch):
            sax_symbolize(PaaVector((0.0,), 1, 1), [0.0, 1.0], 2)
        with pytest.raises(BreakpointShapeMismatch):
            sax_symbolize(PaaVector((0.0,), 1, 1), [1.0, 0.0], 3)

    @given(st.lists(st.floats(-4, 4), min_size=1, max_size=30), st.integers(2, 10))
    def test_monotone(self, values, a):
        word = sax_symbolize(PaaVector(tuple(values), len(values), len(values)), sax_breakpoints(a), a)
        pairs = sorted(zip(values, word.symbols))
        assert all(s1 <= s2 for (_, s1), (_, s2) in zip(pairs, pairs[1:]))

    def test_sax_word_of_ramp(self):
        w = sax_word(np.arange(16.0), 4, 4)
        assert str(w) == "abcd"


class TestSymbolDeviation:
    def _w(self, text):
        return SaxWord(tuple(ord(c) - ord("a") for c in text), 2, len(text), (0.0,))

    def test_identical(self):
        assert symbol_deviation_event(self._w("aabb"), self._w("aabb"), 0, "x") is None

    def test_first_difference(self):
        ev = symbol_deviation_event(self._w("aabb"), self._w("abbb"), 86400, "x")
        assert ev.kind is EventKind.SYMBOL_DEVIATION
        assert ev.observed == 1.0
        assert ev.timestamp == 86400
        assert (ev.band_low, ev.band_high) == (-math.inf, 0.0)

    def test_length_mismatch(self):
        with pytest.raises(ShapeMismatch):
            symbol_deviation_event(self._w("aabb"), self._w("aabbb"), 0, "x")

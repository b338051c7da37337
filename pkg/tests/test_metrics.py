import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogreduce import (
    Interpolant,
    ReducedSeries,
    euclidean_distance,
    evaluate,
    r_square,
    reconstruct,
    reduction_stats,
    rmse,
    sse,
    sst,
)
from fogreduce.errors import (
    DegenerateVariance,
    EmptyInput,
    InvalidCounts,
    NoOverlap,
    ShapeMismatch,
    ZeroSamples,
)

from conftest import make_series

finite = st.floats(-1e6, 1e6, allow_nan=False)
vectors = st.integers(1, 50).flatmap(
    lambda n: st.tuples(st.lists(finite, min_size=n, max_size=n), st.lists(finite, min_size=n, max_size=n))
)


def test_sse_examples():
    assert sse([1, 2], [0, 0]) == 5
    assert sse([1, 2], [0, 0], weights=[2, 1]) == 6


def test_sse_errors():
    with pytest.raises(EmptyInput):
        sse([], [])
    with pytest.raises(ShapeMismatch):
        sse([1, 2], [1])
    with pytest.raises(ShapeMismatch):
        sse([1, 2], [1, 2], weights=[1])


def test_sst_examples():
    assert sst([0, 2]) == 2
    assert sst([0, 0, 6]) == 24
    assert sst([3.5]) == 0


def test_r_square():
    assert r_square(5, 20) == 0.75
    assert r_square(0, 0) == 1.0
    with pytest.raises(DegenerateVariance):
        r_square(1, 0)


def test_r_square_is_zero_for_mean_fit(rng):
    for _ in range(100):
        x = rng.normal(3, 7, int(rng.integers(2, 40)))
        assert r_square(sse(x, np.full(x.size, x.mean())), sst(x)) == 0.0


def test_rmse():
    assert rmse(5, 2) == math.sqrt(2.5)
    assert rmse(4, 4) == 1
    with pytest.raises(ZeroSamples):
        rmse(0, 0)


def test_reduction_stats():
    assert reduction_stats(1440, 48).ratio == 30
    s = reduction_stats(48, 2)
    assert s.ratio == 24
    assert s.histogram_pair == (("raw", 48), ("reduced", 2))
    for raw, red in [(0, 1), (5, 0), (2, 3)]:
        with pytest.raises(InvalidCounts):
            reduction_stats(raw, red)


@given(vectors)
def test_rmse_matches_direct_formula(pair):
    x, p = pair
    e = sse(x, p)
    direct = math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(x, p)) / len(x))
    assert rmse(e, len(x)) == pytest.approx(direct, rel=1e-9, abs=1e-9)


@given(vectors)
def test_sse_is_squared_euclidean_distance(pair):
    x, p = pair
    assert sse(x, p) == pytest.approx(euclidean_distance(x, p) ** 2, rel=1e-9, abs=1e-9)


@given(st.lists(finite, min_size=1, max_size=50))
def test_sst_matches_two_pass_formula(x):
    mean = math.fsum(x) / len(x)
    want = math.fsum((v - mean) ** 2 for v in x)
    assert sst(x) == pytest.approx(want, rel=1e-9, abs=1e-6)


class TestEvaluate:
    def test_identity(self, rng):
        raw = make_series(rng.normal(0, 1, 30), variable="v", unit="degC")
        rep = evaluate(raw, raw, 5, "pchip")
        assert rep.sse == 0 and rep.rmse == 0 and rep.r_square == 1.0
        assert rep.reduction_ratio == 6 and rep.n_compared == 30 and rep.unit == "degC"

    def test_linear_ramp_from_endpoints(self):
        raw = make_series([0, 2, 4], step=30)
        reduced = ReducedSeries("x", "trend_change", [0, 60], [0, 4])
        rebuilt = reconstruct(reduced, 30, Interpolant.LINEAR)
        rep = evaluate(raw, rebuilt, len(reduced), "linear")
        assert rep.rmse == 0 and rep.reduction_ratio == 1.5

    def test_partial_overlap_uses_shared_samples(self):
        raw = make_series([0, 1, 2, 3], step=10)
        rec = make_series([0, 0], step=10, start=20)
        rep = evaluate(raw, rec, 2, "linear")
        assert rep.n_compared == 2
        assert rep.sse == 13 and rep.rmse == math.sqrt(6.5)

    def test_no_overlap(self):
        with pytest.raises(NoOverlap):
            evaluate(make_series([1, 2], step=10), make_series([1, 2], step=10, start=5), 1, "linear")


@given(vectors)
def test_r_square_at_most_one_and_one_only_for_perfect_fit(pair):
    x, p = pair
    e, t = sse(x, p), sst(x)
    if t == 0:
        return
    r2 = r_square(e, t)
    assert r2 <= 1.0
    assert (r2 == 1.0) == (e == 0) or e / t < 1e-16

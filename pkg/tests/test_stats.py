"""Tests for seeded streams, Poisson sampling, histograms, and comparisons."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import poisson as sp_poisson

from qntl.stats import (
    Histogram,
    chi_square_gof,
    chsh_estimate,
    poisson_sample,
    poisson_sample_array,
    stream,
    zscore_compare,
)


# ---------------------------------------------------------------- stream

def test_stream_is_deterministic():
    a = stream(42, "alpha").random(8)
    b = stream(42, "alpha").random(8)
    assert np.array_equal(a, b)


def test_stream_labels_are_independent():
    a = stream(42, "alpha").random(8)
    b = stream(42, "beta").random(8)
    assert not np.array_equal(a, b)


def test_stream_trial_index_changes_draws():
    a = stream(42, "alpha", trial=0).random(8)
    b = stream(42, "alpha", trial=1).random(8)
    assert not np.array_equal(a, b)


def test_stream_rejects_bad_seeds():
    with pytest.raises(ValueError):
        stream(-1, "x")
    with pytest.raises(ValueError):
        stream(2**64, "x")
    with pytest.raises(TypeError):
        stream(1.5, "x")
    with pytest.raises(TypeError):
        stream(True, "x")
    with pytest.raises(ValueError):
        stream(0, "x", trial=-1)


def test_stream_accepts_boundary_seeds():
    stream(0, "x").random()
    stream(2**64 - 1, "x").random()


# ---------------------------------------------------------------- poisson

def test_poisson_zero_mean_is_always_zero():
    rng = stream(7, "poisson-zero")
    assert all(poisson_sample(0.0, rng) == 0 for _ in range(1000))


def test_poisson_matches_quantile_oracle():
    # CDF inversion means k = min{k : CDF(k) >= u}; scipy's ppf computes
    # exactly that quantile, so the two must agree draw by draw.
    rng = stream(11, "poisson-oracle")
    u = rng.random(5000)
    expected = sp_poisson.ppf(u, 5.0).astype(np.int64)
    rng2 = stream(11, "poisson-oracle")
    got = np.array([poisson_sample(5.0, rng2) for _ in range(5000)])
    assert np.array_equal(got, expected)


def test_poisson_array_matches_scalar_path():
    scalar_rng = stream(3, "poisson-pair")
    vector_rng = stream(3, "poisson-pair")
    scalar = np.array([poisson_sample(2.5, scalar_rng) for _ in range(2000)])
    vector = poisson_sample_array(2.5, vector_rng, 2000)
    assert np.array_equal(scalar, vector)
    # and the streams are left in the same position
    assert scalar_rng.random() == vector_rng.random()


def test_poisson_array_zero_mean_consumes_stream():
    a = stream(5, "zero-consume")
    b = stream(5, "zero-consume")
    out = poisson_sample_array(0.0, a, 100)
    assert not out.any()
    b.random(100)
    assert a.random() == b.random()


def test_poisson_moments_at_mean_five():
    rng = stream(42, "poisson-moments")
    draws = poisson_sample_array(5.0, rng, 10**6)
    assert abs(draws.mean() - 5.0) < 0.007
    assert abs(draws.var() - 5.0) < 0.05


def test_poisson_pmf_at_five():
    # P(X = 5) for mean 5 is e^-5 * 5^5 / 5!
    exact = math.exp(-5.0) * 5.0**5 / math.factorial(5)
    assert abs(exact - 0.1755) < 5e-4
    rng = stream(42, "poisson-pmf")
    draws = poisson_sample_array(5.0, rng, 10**6)
    empirical = np.mean(draws == 5)
    assert abs(empirical - exact) < 0.002


def test_poisson_rejects_bad_means():
    rng = stream(0, "bad-mean")
    with pytest.raises(ValueError):
        poisson_sample(-1.0, rng)
    with pytest.raises(ValueError):
        poisson_sample(float("nan"), rng)
    with pytest.raises(ValueError):
        poisson_sample(1e6, rng)
    with pytest.raises(ValueError):
        poisson_sample_array(2.0, rng, -1)


@given(mu=st.floats(min_value=0.01, max_value=50.0), seed=st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_poisson_array_agrees_with_quantile_oracle(mu, seed):
    rng = stream(seed, "hyp-poisson")
    got = poisson_sample_array(mu, rng, 64)
    u = stream(seed, "hyp-poisson").random(64)
    expected = sp_poisson.ppf(u, mu).astype(np.int64)
    assert np.array_equal(got, expected)


# ---------------------------------------------------------------- histogram

def test_histogram_counts_and_overflow():
    h = Histogram.from_samples([0, 1, 1, 2, 25], max_bin=3)
    assert h.max_bin == 3
    assert h.total == 5
    assert list(h.counts) == [1, 2, 1, 1]  # 25 lands in the overflow bin


def test_histogram_overflow_off_rejects_large_samples():
    with pytest.raises(ValueError):
        Histogram.from_samples([0, 9], max_bin=3, overflow=False)


def test_histogram_frequencies_sum_to_one():
    h = Histogram.from_samples([0, 1, 2, 3, 4, 5], max_bin=4)
    assert math.isclose(h.frequencies().sum(), 1.0)


def test_histogram_empty_frequencies_are_zero():
    h = Histogram.from_samples([], max_bin=4)
    assert not h.frequencies().any()


def test_histogram_rebin_conserves_total():
    h = Histogram.from_samples(list(range(12)), max_bin=10)
    r = h.rebin(4)
    assert r.total == h.total
    assert r.max_bin == 4
    assert list(r.counts) == [1, 1, 1, 1, 8]


def test_histogram_rejects_inconsistent_total():
    with pytest.raises(ValueError):
        Histogram(counts=np.array([1, 2]), total=5)


def test_histogram_csv_round_trip():
    h = Histogram.from_samples([0, 0, 1, 3, 3, 3], max_bin=5)
    again = Histogram.from_csv(h.to_csv())
    assert np.array_equal(again.counts, h.counts)
    assert again.total == h.total


def test_histogram_csv_rejects_bad_header():
    with pytest.raises(ValueError):
        Histogram.from_csv("a,b\n0,1\n")


@given(st.lists(st.integers(0, 40), min_size=1, max_size=200), st.integers(1, 30))
@settings(max_examples=100, deadline=None)
def test_histogram_total_always_conserved(samples, max_bin):
    h = Histogram.from_samples(samples, max_bin=max_bin)
    assert h.total == len(samples)
    assert int(h.counts.sum()) == len(samples)
    r = h.rebin(max_bin // 2) if max_bin >= 2 else h
    assert r.total == len(samples)


# ---------------------------------------------------------------- z-scores

def test_zscore_identical_histograms_is_zero():
    h = Histogram.from_samples([0, 1, 1, 2, 3, 5, 8], max_bin=10)
    z = zscore_compare(h, h)
    assert z.max_abs == 0.0


def test_zscore_separates_poisson_means():
    n = 10**5
    a = Histogram.from_samples(poisson_sample_array(5.0, stream(1, "z-a"), n))
    b = Histogram.from_samples(poisson_sample_array(2.5, stream(1, "z-b"), n))
    shifted = Histogram.from_samples(
        np.maximum(poisson_sample_array(5.0, stream(1, "z-c"), n) - 1, 0)
    )
    z_half = zscore_compare(b, a).max_abs
    z_shift = zscore_compare(shifted, a).max_abs
    assert z_half > 50.0
    # removing one photon perturbs the shape far less than halving the mean
    assert z_shift < z_half


def test_zscore_rejects_misaligned_bins():
    a = Histogram.from_samples([1, 2], max_bin=4)
    b = Histogram.from_samples([1, 2], max_bin=6)
    with pytest.raises(ValueError):
        zscore_compare(a, b)
    with pytest.raises(ValueError):
        zscore_compare(a, Histogram.from_samples([], max_bin=4))


@given(
    st.lists(st.integers(0, 12), min_size=2, max_size=300),
    st.lists(st.integers(0, 12), min_size=2, max_size=300),
)
@settings(max_examples=100, deadline=None)
def test_zscore_antisymmetry(xs, ys):
    a = Histogram.from_samples(xs, max_bin=12)
    b = Histogram.from_samples(ys, max_bin=12)
    fwd = zscore_compare(a, b)
    rev = zscore_compare(b, a)
    assert np.allclose(fwd.z, -rev.z, atol=1e-12)


# ---------------------------------------------------------------- chi-square

def test_chi_square_calibration():
    # Testing samples against their own distribution should rarely reject.
    hits = 0
    for seed in range(100):
        draws = poisson_sample_array(5.0, stream(seed, "gof-calibration"), 4000)
        h = Histogram.from_samples(draws, max_bin=15)
        p = chi_square_gof(h, lambda k: sp_poisson.pmf(k, 5.0))
        if p > 0.01:
            hits += 1
    assert hits >= 98


def test_chi_square_gross_mismatch():
    draws = poisson_sample_array(5.0, stream(9, "gof-mismatch"), 10**5)
    h = Histogram.from_samples(draws, max_bin=15)
    p = chi_square_gof(h, lambda k: sp_poisson.pmf(k, 2.5))
    assert p < 1e-6


def test_chi_square_rejects_degenerate_input():
    with pytest.raises(ValueError):
        chi_square_gof(Histogram.from_samples([], max_bin=5), lambda k: 0.1)
    one_bin = Histogram(counts=np.array([4]), total=4)
    with pytest.raises(ValueError):
        chi_square_gof(one_bin, lambda k: 1.0)


# ---------------------------------------------------------------- CHSH

def test_chsh_estimate_hand_case():
    # Perfect correlation on every setting pair: |1 - 1 + 1 + 1| = 2.
    xs = [0, 0, 1, 1]
    ys = [0, 1, 0, 1]
    ps = [1, 1, 1, 1]
    assert chsh_estimate(xs, ys, ps) == pytest.approx(2.0)
    # Flip the (0,1) product and the combination reaches 4.
    assert chsh_estimate(xs, ys, [1, -1, 1, 1]) == pytest.approx(4.0)


def test_chsh_estimate_validation():
    with pytest.raises(ValueError):
        chsh_estimate([], [], [])
    with pytest.raises(ValueError):
        chsh_estimate([0, 1], [0], [1, 1])
    with pytest.raises(ValueError):
        chsh_estimate([0, 2], [0, 1], [1, 1])
    with pytest.raises(ValueError):
        chsh_estimate([0, 0], [0, 1], [1, 1])  # no samples for (1, *)

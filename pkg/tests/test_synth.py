"""Synthetic truth/noise generation: shapes, seeds, and Poisson statistics."""

import math

import numpy as np
import pytest

from specsmooth import (
    BENCHMARK_PEAKS,
    InvalidBackground,
    InvalidPeak,
    PeakSpec,
    TooShort,
    benchmark_scenario,
    generate,
)


def test_peak_spec_validation():
    with pytest.raises(InvalidPeak):
        PeakSpec(centroid=100, amplitude=0, sigma=5)
    with pytest.raises(InvalidPeak):
        PeakSpec(centroid=100, amplitude=-3, sigma=5)
    with pytest.raises(InvalidPeak):
        PeakSpec(centroid=100, amplitude=10, sigma=0.4)


def test_peak_shape_values():
    peak = PeakSpec(centroid=300.0, amplitude=1000.0, sigma=20.0)
    assert peak.values(300.0) == 1000.0
    assert abs(peak.values(280.0) - 1000.0 * math.exp(-0.5)) <= 1e-9
    assert abs(peak.values(320.0) - 606.530659712633) <= 1e-6
    assert abs(peak.fwhm - 2.0 * math.sqrt(2.0 * math.log(2.0)) * 20.0) <= 1e-12


def test_constant_background_statistics():
    scenario = generate(8192, [], ("constant", 100.0), seed=3)
    np.testing.assert_array_equal(scenario.truth.counts, 100.0)
    mean = scenario.noisy.counts.mean()
    assert 98.0 <= mean <= 102.0
    variance = scenario.noisy.counts.var(ddof=1)
    assert 90.0 <= variance <= 110.0


def test_single_peak_truth_values():
    scenario = generate(
        600,
        [PeakSpec(centroid=300.0, amplitude=1000.0, sigma=20.0)],
        ("constant", 0.0),
        seed=1,
    )
    assert scenario.truth.counts[300] == 1000.0
    assert abs(scenario.truth.counts[280] - 606.5306597126334) <= 1e-9
    assert abs(scenario.truth.counts[320] - 606.5306597126334) <= 1e-9


def test_background_shapes():
    x = np.arange(64, dtype=float)
    linear = generate(64, [], ("linear", 10.0, 0.5), seed=1).truth.counts
    np.testing.assert_allclose(linear, 10.0 + 0.5 * x, rtol=1e-12)
    exponential = generate(64, [], ("exponential", 200.0, 30.0), seed=1).truth.counts
    np.testing.assert_allclose(exponential, 200.0 * np.exp(-x / 30.0), rtol=1e-12)


def test_same_seed_is_bit_identical_and_different_seeds_differ():
    a = generate(512, [], ("constant", 50.0), seed=77)
    b = generate(512, [], ("constant", 50.0), seed=77)
    c = generate(512, [], ("constant", 50.0), seed=78)
    np.testing.assert_array_equal(a.noisy.counts, b.noisy.counts)
    assert np.any(a.noisy.counts != c.noisy.counts)


def test_noisy_counts_are_non_negative_integers():
    scenario = generate(
        1024,
        [PeakSpec(centroid=500.0, amplitude=800.0, sigma=30.0)],
        ("exponential", 100.0, 400.0),
        seed=5,
    )
    counts = scenario.noisy.counts
    assert np.all(counts >= 0)
    np.testing.assert_array_equal(counts, np.floor(counts))


def test_generation_rejects_bad_inputs():
    with pytest.raises(TooShort):
        generate(8, [], ("constant", 1.0), seed=1)
    with pytest.raises(InvalidPeak):
        generate(
            64, [PeakSpec(centroid=100.0, amplitude=5.0, sigma=2.0)],
            ("constant", 1.0), seed=1,
        )
    with pytest.raises(InvalidBackground):
        generate(64, [], ("quadratic", 1.0), seed=1)
    with pytest.raises(InvalidBackground):
        generate(64, [], ("constant", 1.0, 2.0), seed=1)
    with pytest.raises(InvalidBackground):
        generate(64, [], ("linear", 1.0, -1.0), seed=1)  # dips below zero
    with pytest.raises(InvalidBackground):
        generate(64, [], ("exponential", 10.0, -5.0), seed=1)
    with pytest.raises(InvalidBackground):
        generate(64, [], ("constant", -2.0), seed=1)


def test_benchmark_scenario_layout(benchmark):
    assert len(benchmark.truth) == 8192
    assert len(benchmark.noisy) == 8192
    assert benchmark.seed == 42
    assert benchmark.peaks == BENCHMARK_PEAKS
    # background 200*exp(-x/3000) plus the tail of the two peaks
    assert abs(benchmark.truth.counts[0] - 200.0) <= 1e-6
    repeat = benchmark_scenario()
    np.testing.assert_array_equal(repeat.noisy.counts, benchmark.noisy.counts)


def test_truth_is_background_plus_peaks(benchmark):
    x = np.arange(8192, dtype=float)
    expected = 200.0 * np.exp(-x / 3000.0)
    for peak in BENCHMARK_PEAKS:
        expected += peak.values(x)
    np.testing.assert_allclose(benchmark.truth.counts, expected, rtol=1e-12)

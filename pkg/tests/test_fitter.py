"""Banded least-squares solver against a dense textbook oracle."""

import numpy as np
import pytest

from specsmooth import (
    ChannelRange,
    OutOfRange,
    RangeMismatch,
    RankDeficient,
    Spectrum,
    SplineFit,
    basis_value,
    evaluate,
    evaluate_on_channels,
    fit,
    full_range,
    make_grid,
)


def design_matrix(grid):
    """Dense design matrix built via per-function evaluation — deliberately
    a separate code path from the fitter's windowed assembly."""
    xs = np.arange(grid.span.a, grid.span.b + 1, dtype=float)
    return np.column_stack(
        [basis_value(grid, j, xs) for j in range(grid.basis_count)]
    ), xs


def dense_lstsq(spectrum, grid):
    design, _ = design_matrix(grid)
    y = spectrum.counts[grid.span.a : grid.span.b + 1]
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coeffs


@pytest.mark.parametrize("mode", ["extended", "knots-only"])
def test_matches_dense_solver_on_random_small_instances(mode):
    rng = np.random.default_rng(2024)
    for _ in range(100):
        m = int(rng.integers(16, 65))
        counts = rng.uniform(0, 1000, size=m)
        spectrum = Spectrum(counts)
        grid = make_grid(full_range(spectrum), 1, mode=mode)
        banded = fit(spectrum, grid).coeffs
        dense = dense_lstsq(spectrum, grid)
        np.testing.assert_allclose(banded, dense, rtol=0, atol=1e-8)


def test_recovers_single_basis_function_exactly():
    span = ChannelRange(0, 63)
    grid = make_grid(span, 1)
    xs = np.arange(64, dtype=float)
    counts = 3.0 * basis_value(grid, 2, xs)
    result = fit(Spectrum(counts), grid)
    expected = np.zeros(grid.basis_count)
    expected[2] = 3.0
    np.testing.assert_allclose(result.coeffs, expected, rtol=0, atol=1e-10)
    assert result.rss <= 1e-16 * np.sum(counts**2)


def test_constant_spectrum_gives_constant_coefficients():
    c = 250.0
    spectrum = Spectrum(np.full(128, c))
    grid = make_grid(full_range(spectrum), 2, mode="extended")
    result = fit(spectrum, grid)
    np.testing.assert_allclose(result.coeffs, c, rtol=1e-9)
    assert result.rss <= 1e-10 * len(spectrum) * c**2


def test_fit_beats_the_zero_coefficient_vector():
    rng = np.random.default_rng(5)
    counts = rng.uniform(10, 500, size=200)
    spectrum = Spectrum(counts)
    result = fit(spectrum, make_grid(full_range(spectrum), 3))
    assert result.rss <= np.sum(counts**2)


def test_no_single_coefficient_perturbation_improves_rss():
    rng = np.random.default_rng(17)
    for _ in range(100):
        m = int(rng.integers(32, 128))
        counts = rng.uniform(0, 100, size=m)
        spectrum = Spectrum(counts)
        level = int(rng.integers(1, 3))
        mode = "extended" if rng.random() < 0.5 else "knots-only"
        grid = make_grid(full_range(spectrum), level, mode=mode)
        result = fit(spectrum, grid)
        design, _ = design_matrix(grid)
        j = int(rng.integers(0, grid.basis_count))
        for sign in (+1.0, -1.0):
            bumped = result.coeffs.copy()
            bumped[j] += sign * 1e-3
            bumped_rss = np.sum((design @ bumped - counts) ** 2)
            assert bumped_rss >= result.rss - 1e-9 * result.rss


def test_gram_matrix_is_banded_with_halfwidth_three():
    grid = make_grid(ChannelRange(0, 255), 3)
    design, _ = design_matrix(grid)
    gram = design.T @ design
    n = grid.basis_count
    for i in range(n):
        for j in range(n):
            if abs(i - j) > 3:
                assert gram[i, j] == 0.0


def test_normal_equations_residual_is_tiny():
    rng = np.random.default_rng(23)
    counts = rng.uniform(0, 2000, size=512)
    spectrum = Spectrum(counts)
    grid = make_grid(full_range(spectrum), 4)
    result = fit(spectrum, grid)
    design, _ = design_matrix(grid)
    gram = design.T @ design
    moment = design.T @ counts
    residual = np.abs(gram @ result.coeffs - moment).max()
    assert residual <= 1e-8 * (1.0 + np.abs(moment).max())


def test_stored_rss_matches_direct_recomputation():
    rng = np.random.default_rng(31)
    counts = rng.uniform(0, 300, size=256)
    spectrum = Spectrum(counts)
    grid = make_grid(full_range(spectrum), 3)
    result = fit(spectrum, grid)
    design, _ = design_matrix(grid)
    direct = np.sum((design @ result.coeffs - counts) ** 2)
    assert abs(result.rss - direct) <= 1e-6 * max(direct, 1e-30)


def test_too_many_basis_functions_raise():
    spectrum = Spectrum(np.ones(16))
    grid = make_grid(ChannelRange(0, 8), 2)  # 11 functions, 9 channels
    with pytest.raises(RankDeficient):
        fit(spectrum, grid)


def test_grid_outside_spectrum_raises():
    spectrum = Spectrum(np.ones(16))
    grid = make_grid(ChannelRange(0, 31), 1)
    with pytest.raises(RangeMismatch):
        fit(spectrum, grid)


def test_spline_fit_validates_coefficient_count():
    grid = make_grid(ChannelRange(0, 63), 1)
    with pytest.raises(ValueError):
        SplineFit(grid=grid, coeffs=np.zeros(3), rss=0.0)


def _manual_fit(grid, coeffs):
    return SplineFit(grid=grid, coeffs=np.asarray(coeffs, dtype=float), rss=0.0)


def test_evaluate_zero_and_unit_coefficients():
    grid = make_grid(ChannelRange(0, 63), 1, mode="extended")
    zero = _manual_fit(grid, np.zeros(grid.basis_count))
    ones = _manual_fit(grid, np.ones(grid.basis_count))
    rng = np.random.default_rng(41)
    x = rng.uniform(0, 63, size=100)
    np.testing.assert_array_equal(evaluate(zero, x), 0.0)
    np.testing.assert_allclose(evaluate(ones, x), 1.0, rtol=0, atol=1e-12)


def test_evaluate_single_function_at_its_center():
    grid = make_grid(ChannelRange(0, 63), 1, mode="extended")
    coeffs = np.zeros(grid.basis_count)
    coeffs[2] = 1.0
    result = _manual_fit(grid, coeffs)
    assert abs(evaluate(result, float(grid.centers[2])) - 2.0 / 3.0) <= 1e-12


def test_evaluate_scalar_returns_float_and_bounds_are_enforced():
    grid = make_grid(ChannelRange(0, 63), 1)
    result = _manual_fit(grid, np.ones(grid.basis_count))
    assert isinstance(evaluate(result, 10.0), float)
    with pytest.raises(OutOfRange):
        evaluate(result, -0.5)
    with pytest.raises(OutOfRange):
        evaluate(result, 63.5)


def test_evaluate_agrees_with_per_function_summation():
    rng = np.random.default_rng(47)
    spectrum = Spectrum(rng.uniform(0, 50, size=128))
    grid = make_grid(full_range(spectrum), 2, mode="knots-only")
    result = fit(spectrum, grid)
    x = rng.uniform(0, 127, size=50)
    direct = sum(
        result.coeffs[j] * basis_value(grid, j, x)
        for j in range(grid.basis_count)
    )
    np.testing.assert_allclose(evaluate(result, x), direct, rtol=0, atol=1e-10)


def test_evaluate_on_channels_round_trips_in_span_data():
    rng = np.random.default_rng(53)
    grid = make_grid(ChannelRange(0, 127), 2)
    design, xs = design_matrix(grid)
    truth_coeffs = rng.uniform(1, 5, size=grid.basis_count)
    spectrum = Spectrum(design @ truth_coeffs)
    result = fit(spectrum, grid)
    sampled = evaluate_on_channels(result)
    assert len(sampled) == 128
    assert sampled.channel_offset == 0
    assert np.abs(sampled.counts - spectrum.counts).max() <= 1e-8


def test_evaluate_on_channels_keeps_span_offset():
    spectrum = Spectrum(np.full(64, 7.0))
    grid = make_grid(ChannelRange(16, 47), 1)
    sampled = evaluate_on_channels(fit(spectrum, grid))
    assert sampled.channel_offset == 16
    assert len(sampled) == 32
    np.testing.assert_allclose(sampled.counts, 7.0, rtol=1e-9)

"""Least-squares spline fitting via banded normal equations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solveh_banded

from .basis import KnotGrid, phi
from .errors import OutOfRange, RangeMismatch, RankDeficient
from .spectrum import Spectrum

#: A cubic spline basis function overlaps at most three neighbors on each
#: side, so the Gram matrix of the normal equations has this half-bandwidth.
HALF_BANDWIDTH = 3

#: Relative ridge added to the Gram diagonal when plain Cholesky fails.
RIDGE = 1e-10


@dataclass(frozen=True)
class SplineFit:
    """A fitted spline: the grid it lives on, its coefficients, and the RSS.

    ``rss`` is the residual sum of squares over the integer channels of the
    grid's span, the quantity the fit minimizes.
    """

    grid: KnotGrid
    coeffs: np.ndarray = field(repr=False)
    rss: float

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.grid.basis_count,):
            raise ValueError(
                f"expected {self.grid.basis_count} coefficients, "
                f"got shape {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rss", float(self.rss))


def _windows(grid: KnotGrid, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices and weights of the (up to) 4 basis functions active at each x.

    Returns ``(idx, w)``, both of shape ``(len(xs), 4)``, such that the
    spline value at ``xs[i]`` is ``sum_k w[i, k] * coeffs[idx[i, k]]``.
    Positions where fewer than 4 functions exist carry zero weight and a
    clipped (harmless) index.
    """
    t = (np.asarray(xs, dtype=float) - grid.span.a) / grid.spacing
    base = np.floor(t).astype(int)
    count = grid.basis_count
    if grid.mode == "extended":
        base = np.clip(base, 0, count - 4)
        idx = base[:, None] + np.arange(4)
        w = phi(t[:, None] - (idx - 1))
    else:
        idx = base[:, None] + np.arange(-1, 3)
        valid = (idx >= 0) & (idx < count)
        w = np.where(valid, phi(t[:, None] - idx), 0.0)
        idx = np.clip(idx, 0, count - 1)
    return idx, w


def _solve_banded_spd(band: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the symmetric positive-definite banded system, with a tiny
    ridge retry before giving up on near-singular Gram matrices."""
    try:
        return solveh_banded(band, rhs, lower=True)
    except np.linalg.LinAlgError:
        pass
    ridged = band.copy()
    ridged[0] += RIDGE * ridged[0].mean()
    try:
        return solveh_banded(ridged, rhs, lower=True)
    except np.linalg.LinAlgError:
        raise RankDeficient(
            "normal equations are singular; not enough data per basis function"
        ) from None


def fit(spectrum: Spectrum, grid: KnotGrid) -> SplineFit:
    """Least-squares fit of the grid's spline basis to the spectrum counts.

    Minimizes the sum of squared residuals over the integer channels in
    ``grid.span``.  The normal equations are assembled directly in banded
    form — each channel touches only 4 basis functions — and solved by
    banded Cholesky, so the cost is linear in both channels and knots.

    Raises
    ------
    RangeMismatch
        If the grid's span sticks out of the spectrum.
    RankDeficient
        If there are at least as many basis functions as channels, or the
        normal equations are numerically singular.
    """
    a, b = grid.span.a, grid.span.b
    if a < 0 or b > len(spectrum) - 1:
        raise RangeMismatch(
            f"grid span [{a}, {b}] exceeds spectrum of {len(spectrum)} channels"
        )
    y = spectrum.counts[a : b + 1]
    m = y.size
    n = grid.basis_count
    if n >= m:
        raise RankDeficient(
            f"{n} basis functions but only {m} channels in [{a}, {b}]"
        )

    xs = np.arange(a, b + 1, dtype=float)
    idx, w = _windows(grid, xs)

    rhs = np.zeros(n)
    np.add.at(rhs, idx, w * y[:, None])

    band = np.zeros((HALF_BANDWIDTH + 1, n))
    for o1 in range(4):
        for o2 in range(o1, 4):
            np.add.at(band[o2 - o1], idx[:, o1], w[:, o1] * w[:, o2])

    coeffs = _solve_banded_spd(band, rhs)
    fitted = np.einsum("ij,ij->i", w, coeffs[idx])
    rss = float(np.sum((y - fitted) ** 2))
    return SplineFit(grid=grid, coeffs=coeffs, rss=rss)


def evaluate(fit: SplineFit, x):
    """Spline value at position(s) `x`, which must lie within the fit's span.

    Accepts a scalar or an array; scalar input returns a Python float.

    Raises
    ------
    OutOfRange
        If any requested position falls outside the fitted range.
    """
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    pts = np.atleast_1d(xs)
    span = fit.grid.span
    if pts.size and (pts.min() < span.a or pts.max() > span.b):
        raise OutOfRange(
            f"position outside fitted range [{span.a}, {span.b}]"
        )
    idx, w = _windows(fit.grid, pts)
    values = np.einsum("ij,ij->i", w, fit.coeffs[idx])
    return float(values[0]) if scalar else values


def evaluate_on_channels(fit: SplineFit) -> Spectrum:
    """The fitted curve sampled at every integer channel of its span.

    The result's ``channel_offset`` is the span start, so its channel labels
    line up with the source spectrum's indices.  Smoothed values may dip
    below zero in valleys; they are reported as-is.
    """
    span = fit.grid.span
    xs = np.arange(span.a, span.b + 1, dtype=float)
    idx, w = _windows(fit.grid, xs)
    values = np.einsum("ij,ij->i", w, fit.coeffs[idx])
    return Spectrum(values, channel_offset=span.a)

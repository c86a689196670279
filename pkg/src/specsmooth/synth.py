"""Seeded synthetic spectra: smooth truth plus Poisson counting noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidBackground, InvalidPeak, TooShort
from .spectrum import Spectrum

#: Background shapes accepted by :func:`generate`, as ``(kind, *params)``
#: tuples: ``("constant", level)``, ``("linear", intercept, slope)``, and
#: ``("exponential", amplitude, scale)`` for ``amplitude * exp(-x / scale)``.
BACKGROUND_KINDS = ("constant", "linear", "exponential")

#: Standard benchmark scenario: a long exponential background with one tall
#: narrow peak near the low end and one broad peak on the tail.
BENCHMARK_CHANNELS = 8192
BENCHMARK_BACKGROUND = ("exponential", 200.0, 3000.0)
BENCHMARK_SEED = 42

_FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class PeakSpec:
    """A Gaussian peak: ``amplitude * exp(-(x - centroid)^2 / (2 sigma^2))``.

    Peaks narrower than half a channel cannot be resolved on an integer
    grid, so ``sigma`` must be at least 0.5.
    """

    centroid: float
    amplitude: float
    sigma: float

    def __post_init__(self):
        if self.amplitude <= 0:
            raise InvalidPeak(f"amplitude must be > 0, got {self.amplitude}")
        if self.sigma < 0.5:
            raise InvalidPeak(f"sigma must be >= 0.5, got {self.sigma}")

    @property
    def fwhm(self) -> float:
        """Full width at half maximum, ``2 sqrt(2 ln 2) * sigma``."""
        return _FWHM_PER_SIGMA * self.sigma

    def values(self, x) -> np.ndarray:
        """Peak height at channel position(s) `x`."""
        x = np.asarray(x, dtype=float)
        z = (x - self.centroid) / self.sigma
        return self.amplitude * np.exp(-0.5 * z * z)


BENCHMARK_PEAKS = (
    PeakSpec(centroid=3310.0, amplitude=800.0, sigma=45.0),
    PeakSpec(centroid=350.0, amplitude=3000.0, sigma=18.0),
)


@dataclass(frozen=True)
class SyntheticTruth:
    """A generated scenario: the noiseless truth, one noisy realization,
    and the recipe (``peaks``, ``background``, ``seed``) that produced them."""

    truth: Spectrum
    noisy: Spectrum
    seed: int
    peaks: tuple
    background: tuple


def _background_values(background, x: np.ndarray) -> np.ndarray:
    if not background or background[0] not in BACKGROUND_KINDS:
        raise InvalidBackground(
            f"background kind must be one of {BACKGROUND_KINDS}, "
            f"got {background!r}"
        )
    kind, *params = background
    expected = {"constant": 1, "linear": 2, "exponential": 2}[kind]
    if len(params) != expected:
        raise InvalidBackground(
            f"{kind} background takes {expected} parameter(s), got {len(params)}"
        )
    params = [float(p) for p in params]
    if kind == "constant":
        return np.full_like(x, params[0])
    if kind == "linear":
        return params[0] + params[1] * x
    amplitude, scale = params
    if scale <= 0:
        raise InvalidBackground(f"exponential scale must be > 0, got {scale}")
    return amplitude * np.exp(-x / scale)


def generate(channels: int, peaks, background, seed: int) -> SyntheticTruth:
    """Generate a synthetic spectrum: background plus peaks, then noise.

    The truth curve is the background evaluated on channels ``0..channels-1``
    with each peak added; the noisy realization draws one Poisson count per
    channel with the truth as its mean.  Draws come from numpy's seeded
    PCG64 generator, so a given ``(recipe, seed)`` pair is reproducible
    bit-for-bit on a fixed numpy version.

    Raises
    ------
    TooShort
        Fewer than 16 channels requested.
    InvalidPeak
        A peak centroid lies outside the channel range.
    InvalidBackground
        Malformed background tuple, or one that dips below zero (a Poisson
        mean cannot be negative).
    """
    channels = int(channels)
    if channels < 16:
        raise TooShort(f"need at least 16 channels, got {channels}")
    x = np.arange(channels, dtype=float)
    values = _background_values(background, x)
    if np.any(values < 0):
        raise InvalidBackground(
            "background goes negative inside the channel range"
        )
    peaks = tuple(peaks)
    for peak in peaks:
        if not 0 <= peak.centroid <= channels - 1:
            raise InvalidPeak(
                f"centroid {peak.centroid} outside channels 0..{channels - 1}"
            )
        values = values + peak.values(x)
    rng = np.random.default_rng(seed)
    noisy = rng.poisson(values).astype(float)
    return SyntheticTruth(
        truth=Spectrum(values, label="truth"),
        noisy=Spectrum(noisy, label="noisy"),
        seed=int(seed),
        peaks=peaks,
        background=tuple(background),
    )


def benchmark_scenario(seed: int = BENCHMARK_SEED) -> SyntheticTruth:
    """The standard benchmark spectrum (see :data:`BENCHMARK_PEAKS`)."""
    return generate(
        BENCHMARK_CHANNELS, BENCHMARK_PEAKS, BENCHMARK_BACKGROUND, seed
    )

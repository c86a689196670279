"""Agreement metrics and peak-shape measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NoPeak, RangeMismatch
from .spectrum import ChannelRange, Spectrum


def _paired(a: Spectrum, b: Spectrum, span: ChannelRange | None):
    if len(a) != len(b):
        raise LengthMismatch(
            f"spectra differ in length: {len(a)} vs {len(b)} channels"
        )
    if span is None:
        return a.counts, b.counts
    if span.b > len(a) - 1:
        raise RangeMismatch(
            f"range [{span.a}, {span.b}] exceeds spectrum of {len(a)} channels"
        )
    sl = slice(span.a, span.b + 1)
    return a.counts[sl], b.counts[sl]


def rmse(a: Spectrum, b: Spectrum, span: ChannelRange | None = None) -> float:
    """Root-mean-square difference between two equal-length spectra,
    optionally restricted to a channel range."""
    ya, yb = _paired(a, b, span)
    return float(np.sqrt(np.mean((ya - yb) ** 2)))


def epsilon_between(
    a: Spectrum, b: Spectrum, span: ChannelRange | None = None
) -> float:
    """Summed squared channel-by-channel difference (the refinement loop's
    between-level measure, usable on any two curves)."""
    ya, yb = _paired(a, b, span)
    return float(np.sum((ya - yb) ** 2))


@dataclass(frozen=True)
class PeakMeasurement:
    """Sub-channel peak shape: apex position, full width at half maximum,
    and apex height, all from local interpolation around the maximum."""

    centroid: float
    fwhm: float
    height: float

    def __post_init__(self):
        if not self.fwhm > 0:
            raise ValueError(f"fwhm must be > 0, got {self.fwhm}")
        if not self.height > 0:
            raise ValueError(f"height must be > 0, got {self.height}")


def measure_peak(spectrum: Spectrum, window: ChannelRange) -> PeakMeasurement:
    """Measure the tallest peak inside a channel window.

    The height is the maximum count in the window; the centroid comes from
    a parabola fitted through the maximum and its two neighbors (ties go to
    the leftmost maximum); the width is the distance between the innermost
    points on each flank where the counts cross half the height, found by
    linear interpolation.

    Raises
    ------
    RangeMismatch
        If the window does not lie inside the spectrum.
    NoPeak
        If the maximum sits on the window edge, is not positive, or a
        half-height crossing falls outside the window.
    """
    if window.b > len(spectrum) - 1:
        raise RangeMismatch(
            f"window [{window.a}, {window.b}] exceeds spectrum of "
            f"{len(spectrum)} channels"
        )
    counts = spectrum.counts
    peak = window.a + int(np.argmax(counts[window.a : window.b + 1]))
    if peak in (window.a, window.b):
        raise NoPeak(f"maximum at channel {peak} sits on the window edge")

    below, at, above = counts[peak - 1], counts[peak], counts[peak + 1]
    height = at
    if height <= 0:
        raise NoPeak(f"peak height {height:.6g} is not positive")
    # First-occurrence maximum strictly exceeds its left neighbor, so the
    # parabola through the three points always opens downward.
    curvature = below - 2.0 * at + above
    delta = 0.5 * (below - above) / curvature
    centroid = peak + delta

    half = 0.5 * height
    left = peak - 1
    while left >= window.a and counts[left] > half:
        left -= 1
    if left < window.a:
        raise NoPeak("left half-height crossing falls outside the window")
    right = peak + 1
    while right <= window.b and counts[right] > half:
        right += 1
    if right > window.b:
        raise NoPeak("right half-height crossing falls outside the window")

    x_left = left + (half - counts[left]) / (counts[left + 1] - counts[left])
    x_right = (right - 1) + (counts[right - 1] - half) / (
        counts[right - 1] - counts[right]
    )
    return PeakMeasurement(
        centroid=float(centroid),
        fwhm=float(x_right - x_left),
        height=float(height),
    )

"""Weighted-moving-average smoothers used as comparison baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpectrumTooShort, UnknownKernel
from .spectrum import Spectrum

#: End-of-spectrum handling: "mirror" reflects counts across the ends
#: (channel -1 reads channel 0), which conserves total counts under any
#: symmetric kernel; "clamp" repeats the end counts outward.
BOUNDARIES = ("mirror", "clamp")

_BUILTINS = {
    "wavg3": ((1, 2, 1), 4),
    "wavg5": ((-3, 12, 17, 12, -3), 35),
}


@dataclass(frozen=True)
class Kernel:
    """An odd-length moving-average kernel with its normalization constant.

    The weights divided by ``normalization`` must sum to one, so a constant
    spectrum passes through unchanged.
    """

    weights: tuple
    normalization: float

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if len(weights) < 3 or len(weights) % 2 == 0:
            raise ValueError(
                f"kernel length must be odd and >= 3, got {len(weights)}"
            )
        norm = float(self.normalization)
        if abs(sum(weights) / norm - 1.0) > 1e-12:
            raise ValueError("kernel weights must sum to the normalization")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "normalization", norm)

    @property
    def halfwidth(self) -> int:
        return len(self.weights) // 2

    @property
    def normalized(self) -> np.ndarray:
        """The weights scaled to sum to one."""
        return np.array(self.weights) / self.normalization


def builtin_kernel(name: str) -> Kernel:
    """Look up a named kernel.

    ``wavg3`` is the 3-point weighted average (1, 2, 1)/4; ``wavg5`` is the
    5-point (-3, 12, 17, 12, -3)/35, which reproduces cubic polynomials
    exactly away from the ends.
    """
    try:
        weights, norm = _BUILTINS[name]
    except KeyError:
        known = ", ".join(sorted(_BUILTINS))
        raise UnknownKernel(f"unknown kernel {name!r}; known kernels: {known}") from None
    return Kernel(weights=weights, normalization=norm)


def convolve_smooth(
    spectrum: Spectrum,
    kernel: Kernel,
    iterations: int = 1,
    boundary: str = "mirror",
) -> Spectrum:
    """Apply `kernel` to the spectrum `iterations` times.

    Each pass pads the ends according to `boundary` (see :data:`BOUNDARIES`)
    and convolves, so the output keeps the input's length.

    Raises
    ------
    SpectrumTooShort
        If the kernel is wider than the spectrum.
    """
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if len(spectrum) < len(kernel.weights):
        raise SpectrumTooShort(
            f"{len(kernel.weights)}-point kernel needs at least that many "
            f"channels, spectrum has {len(spectrum)}"
        )
    pad_mode = "symmetric" if boundary == "mirror" else "edge"
    # np.convolve flips its second argument; flip once here so the weights
    # apply in index order for asymmetric kernels too.
    taps = kernel.normalized[::-1]
    half = kernel.halfwidth
    counts = spectrum.counts
    for _ in range(iterations):
        padded = np.pad(counts, half, mode=pad_mode)
        counts = np.convolve(padded, taps, mode="valid")
    return Spectrum(
        counts, channel_offset=spectrum.channel_offset, label=spectrum.label
    )

"""Exception types raised across the package.

Everything derives from :class:`SpecsmoothError` so callers (and the CLI)
can catch data and numeric failures in one clause without swallowing
programming errors.  Plain I/O failures are left to the builtin
:class:`OSError` family.
"""


class SpecsmoothError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SpecsmoothError):
    """Malformed spectrum data: non-numeric, negative, or non-contiguous."""


class TooShort(SpecsmoothError):
    """Spectrum has fewer channels than the smoother needs."""


class SpacingTooFine(SpecsmoothError):
    """Requested refinement level would push knot spacing below one channel."""


class RangeMismatch(SpecsmoothError):
    """Channel range does not lie within the spectrum it is applied to."""


class RankDeficient(SpecsmoothError):
    """Normal equations are singular even after the ridge fallback."""


class OutOfRange(SpecsmoothError):
    """Evaluation abscissa lies outside the fitted channel range."""


class RangeTooNarrow(SpecsmoothError):
    """Channel range admits fewer than two refinement levels."""


class NotEnoughLevels(SpecsmoothError):
    """Trace carries too few inter-level errors for the selection rule."""


class UnknownKernel(SpecsmoothError):
    """No built-in smoothing kernel under the requested name."""


class SpectrumTooShort(SpecsmoothError):
    """Spectrum is shorter than the smoothing kernel."""


class InvalidPeak(SpecsmoothError):
    """Synthetic peak parameters are out of domain."""


class InvalidBackground(SpecsmoothError):
    """Synthetic background descriptor is malformed or goes negative."""


class NoPeak(SpecsmoothError):
    """Peak measurement window contains no usable interior maximum."""


class LengthMismatch(SpecsmoothError):
    """Operands cover different numbers of channels."""

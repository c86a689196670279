"""Adaptive B-spline least-squares smoothing for pulse-height spectra.

The pipeline fits cubic splines on successively refined dyadic knot grids,
scores consecutive fits by their summed squared difference, and keeps the
level where that measure bottoms out — smoothing away Poisson counting
noise while preserving peak positions and widths.  Weighted-moving-average
smoothers, a seeded synthetic-spectrum generator, and peak/agreement
metrics round out the toolkit.
"""

from .baselines import BOUNDARIES, Kernel, builtin_kernel, convolve_smooth
from .basis import MODES, KnotGrid, basis_value, make_grid, phi
from .errors import (
    FormatError,
    InvalidBackground,
    InvalidPeak,
    LengthMismatch,
    NoPeak,
    NotEnoughLevels,
    OutOfRange,
    RangeMismatch,
    RangeTooNarrow,
    RankDeficient,
    SpacingTooFine,
    SpecsmoothError,
    SpectrumTooShort,
    TooShort,
    UnknownKernel,
)
from .fitter import SplineFit, evaluate, evaluate_on_channels, fit
from .metrics import PeakMeasurement, epsilon_between, measure_peak, rmse
from .refinement import (
    SELECTION_RULES,
    LevelRecord,
    RefinementConfig,
    RefinementTrace,
    read_trace_csv,
    run_refinement,
    select_level,
    smooth,
    write_trace_csv,
)
from .spectrum import (
    MIN_CHANNELS,
    ChannelRange,
    Spectrum,
    full_range,
    load_spectrum,
    save_spectrum,
)
from .synth import (
    BACKGROUND_KINDS,
    BENCHMARK_BACKGROUND,
    BENCHMARK_CHANNELS,
    BENCHMARK_PEAKS,
    BENCHMARK_SEED,
    PeakSpec,
    SyntheticTruth,
    benchmark_scenario,
    generate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKGROUND_KINDS",
    "BENCHMARK_BACKGROUND",
    "BENCHMARK_CHANNELS",
    "BENCHMARK_PEAKS",
    "BENCHMARK_SEED",
    "BOUNDARIES",
    "ChannelRange",
    "FormatError",
    "InvalidBackground",
    "InvalidPeak",
    "Kernel",
    "KnotGrid",
    "LengthMismatch",
    "LevelRecord",
    "MIN_CHANNELS",
    "MODES",
    "NoPeak",
    "NotEnoughLevels",
    "OutOfRange",
    "PeakMeasurement",
    "PeakSpec",
    "RangeMismatch",
    "RangeTooNarrow",
    "RankDeficient",
    "RefinementConfig",
    "RefinementTrace",
    "SELECTION_RULES",
    "SpacingTooFine",
    "SpecsmoothError",
    "Spectrum",
    "SpectrumTooShort",
    "SplineFit",
    "SyntheticTruth",
    "TooShort",
    "UnknownKernel",
    "basis_value",
    "benchmark_scenario",
    "builtin_kernel",
    "convolve_smooth",
    "epsilon_between",
    "evaluate",
    "evaluate_on_channels",
    "fit",
    "full_range",
    "generate",
    "load_spectrum",
    "make_grid",
    "measure_peak",
    "phi",
    "read_trace_csv",
    "rmse",
    "run_refinement",
    "save_spectrum",
    "select_level",
    "smooth",
    "write_trace_csv",
]

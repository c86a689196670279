"""Adaptive knot refinement: fit, halve the spacing, pick the level."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .basis import MODES, make_grid
from .errors import (
    NotEnoughLevels,
    RangeMismatch,
    RangeTooNarrow,
    SpecsmoothError,
)
from .fitter import SplineFit, evaluate, fit
from .spectrum import ChannelRange, Spectrum, full_range

#: Supported level-selection rules (an integer picks that level directly).
SELECTION_RULES = ("global-min", "first-local-min")

_TRACE_HEADER = "level,knot_count,spacing,rss,epsilon"


@dataclass(frozen=True)
class LevelRecord:
    """Summary of one refinement level.

    ``epsilon`` is the squared channel-by-channel change from this level's
    curve to the next finer one; the final level has no successor, so its
    ``epsilon`` is ``None``.
    """

    level: int
    knot_count: int
    spacing: float
    rss: float
    epsilon: float | None = None


@dataclass
class RefinementTrace:
    """Everything the refinement loop produced, one record per level.

    ``fits`` holds the fitted splines in level order, or ``None`` when the
    trace was reconstructed from a CSV file.  ``selected_level`` starts as
    ``None`` and is filled in by :func:`select_level`.
    """

    records: list[LevelRecord]
    fits: list[SplineFit] | None = None
    selected_level: int | None = None

    def __post_init__(self):
        records = list(self.records)
        if len(records) < 2:
            raise ValueError("a trace needs at least 2 levels")
        for i, record in enumerate(records):
            if record.level != i + 1:
                raise ValueError(
                    f"levels must be 1..{len(records)} in order, "
                    f"found level {record.level} at position {i}"
                )
            if i and not np.isclose(
                record.spacing, records[i - 1].spacing / 2.0, rtol=1e-9
            ):
                raise ValueError(
                    f"level {record.level} spacing {record.spacing} does not "
                    f"halve the previous spacing {records[i - 1].spacing}"
                )
            want_eps = i < len(records) - 1
            if want_eps and record.epsilon is None:
                raise ValueError(f"level {record.level} is missing its epsilon")
            if not want_eps and record.epsilon is not None:
                raise ValueError("the final level must not carry an epsilon")
        if self.fits is not None and len(self.fits) != len(records):
            raise ValueError("need exactly one fit per level")
        self.records = records

    @property
    def levels(self) -> int:
        return len(self.records)

    @property
    def epsilons(self) -> list[float]:
        """The between-level epsilon sequence, one value per level pair."""
        return [r.epsilon for r in self.records[:-1]]

    @classmethod
    def from_epsilons(
        cls, epsilons, base_spacing: float = 1024.0
    ) -> "RefinementTrace":
        """Build a fit-less trace from an epsilon sequence alone.

        Useful for exercising selection rules against published epsilon
        tables; knot counts follow the dyadic schedule and RSS is unknown.
        """
        epsilons = [float(e) for e in epsilons]
        if not epsilons:
            raise ValueError("need at least one epsilon")
        records = []
        for i in range(len(epsilons) + 1):
            records.append(
                LevelRecord(
                    level=i + 1,
                    knot_count=4 * 2**i + 1,
                    spacing=base_spacing / 2**i,
                    rss=float("nan"),
                    epsilon=epsilons[i] if i < len(epsilons) else None,
                )
            )
        return cls(records=records)


@dataclass(frozen=True)
class RefinementConfig:
    """Knobs for the refinement loop and the final level choice.

    ``min_spacing`` is the finest knot spacing allowed, in channels; going
    below one channel would let the spline chase individual counts, so the
    floor itself is floored at 1.  ``selection`` is a rule name from
    :data:`SELECTION_RULES` or an explicit level number.
    """

    min_spacing: float = 1.0
    max_levels: int = 16
    mode: str = "extended"
    selection: str | int = "global-min"

    def __post_init__(self):
        if self.min_spacing < 1.0:
            raise ValueError(f"min_spacing must be >= 1, got {self.min_spacing}")
        if self.max_levels < 2:
            raise ValueError(f"max_levels must be >= 2, got {self.max_levels}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.selection, int) and self.selection not in SELECTION_RULES:
            raise ValueError(
                f"selection must be an integer or one of {SELECTION_RULES}, "
                f"got {self.selection!r}"
            )


def run_refinement(
    spectrum: Spectrum,
    span: ChannelRange | None = None,
    config: RefinementConfig | None = None,
) -> RefinementTrace:
    """Fit splines on successively halved knot grids until refinement stops.

    Starting from 5 knots across `span`, each level doubles the knot count.
    The loop stops, without error, at the first level whose spacing would
    drop below ``config.min_spacing``, whose basis would have at least as
    many functions as there are channels, or which would exceed
    ``config.max_levels``.

    Raises
    ------
    RangeMismatch
        If `span` sticks out of the spectrum.
    RangeTooNarrow
        If fewer than two levels fit, leaving nothing to compare.
    """
    if config is None:
        config = RefinementConfig()
    if span is None:
        span = full_range(spectrum)
    if span.b > len(spectrum) - 1:
        raise RangeMismatch(
            f"range [{span.a}, {span.b}] exceeds spectrum of "
            f"{len(spectrum)} channels"
        )

    channels = span.length
    xs = np.arange(span.a, span.b + 1, dtype=float)
    fits: list[SplineFit] = []
    curves: list[np.ndarray] = []
    for level in range(1, config.max_levels + 1):
        segments = 4 * 2 ** (level - 1)
        spacing = (span.b - span.a) / segments
        if spacing < config.min_spacing:
            break
        basis_count = segments + 3 if config.mode == "extended" else segments + 1
        if basis_count >= channels:
            break
        grid = make_grid(span, level, mode=config.mode)
        try:
            level_fit = fit(spectrum, grid)
        except SpecsmoothError as exc:
            raise type(exc)(f"level {level}: {exc}") from None
        fits.append(level_fit)
        curves.append(evaluate(level_fit, xs))

    if len(fits) < 2:
        raise RangeTooNarrow(
            f"range [{span.a}, {span.b}] supports only {len(fits)} refinement "
            f"level(s); need at least 2 to compare"
        )

    records = []
    for i, level_fit in enumerate(fits):
        epsilon = None
        if i < len(fits) - 1:
            epsilon = float(np.sum((curves[i + 1] - curves[i]) ** 2))
        records.append(
            LevelRecord(
                level=i + 1,
                knot_count=level_fit.grid.knot_count,
                spacing=level_fit.grid.spacing,
                rss=level_fit.rss,
                epsilon=epsilon,
            )
        )
    return RefinementTrace(records=records, fits=fits)


def select_level(trace: RefinementTrace, rule: str | int = "global-min") -> int:
    """Choose a refinement level from a trace's epsilon sequence.

    Rules:

    * ``"global-min"`` — the level whose epsilon is smallest overall; ties
      go to the coarser level.
    * ``"first-local-min"`` — the first level whose epsilon is smaller than
      the next one (the earliest point where refining stops paying off);
      falls back to ``"global-min"`` when the sequence only decreases.
    * an integer — that level verbatim.

    Only levels that carry an epsilon are selectable: the final level has
    no successor to compare against, so it can never be chosen explicitly.
    Records the choice on ``trace.selected_level`` and returns it.

    Raises
    ------
    NotEnoughLevels
        If an explicit level has no epsilon, or ``first-local-min`` is asked
        of a trace with a single epsilon value.
    """
    epsilons = trace.epsilons
    if isinstance(rule, bool):
        raise ValueError(f"unknown selection rule {rule!r}")
    if isinstance(rule, int):
        if not 1 <= rule <= len(epsilons):
            raise NotEnoughLevels(
                f"level {rule} requested but selectable levels are "
                f"1..{len(epsilons)}"
            )
        selected = rule
    elif rule == "global-min":
        selected = int(np.argmin(epsilons)) + 1
    elif rule == "first-local-min":
        if len(epsilons) < 2:
            raise NotEnoughLevels(
                "first-local-min needs at least 2 epsilon values, got 1"
            )
        selected = None
        for i in range(len(epsilons) - 1):
            if epsilons[i] < epsilons[i + 1]:
                selected = i + 1
                break
        if selected is None:
            selected = int(np.argmin(epsilons)) + 1
    else:
        raise ValueError(f"unknown selection rule {rule!r}")
    trace.selected_level = selected
    return selected


def smooth(
    spectrum: Spectrum,
    span: ChannelRange | None = None,
    config: RefinementConfig | None = None,
) -> tuple[Spectrum, RefinementTrace]:
    """Smooth a spectrum end to end: refine, select, splice.

    Returns the smoothed spectrum — counts inside `span` replaced by the
    selected spline curve, counts outside left untouched — together with
    the refinement trace (its ``selected_level`` filled in).
    """
    if config is None:
        config = RefinementConfig()
    if span is None:
        span = full_range(spectrum)
    trace = run_refinement(spectrum, span=span, config=config)
    level = select_level(trace, config.selection)
    chosen = trace.fits[level - 1]
    xs = np.arange(span.a, span.b + 1, dtype=float)
    counts = spectrum.counts.copy()
    counts[span.a : span.b + 1] = evaluate(chosen, xs)
    smoothed = Spectrum(
        counts, channel_offset=spectrum.channel_offset, label=spectrum.label
    )
    return smoothed, trace


def write_trace_csv(trace: RefinementTrace, path) -> None:
    """Write a trace as CSV, one row per level.

    Floats are written with ``repr`` so they survive a round-trip exactly;
    the final level's epsilon cell is left empty.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(_TRACE_HEADER + "\n")
        for record in trace.records:
            epsilon = "" if record.epsilon is None else repr(record.epsilon)
            handle.write(
                f"{record.level},{record.knot_count},"
                f"{record.spacing!r},{record.rss!r},{epsilon}\n"
            )


def read_trace_csv(path) -> RefinementTrace:
    """Read a trace written by :func:`write_trace_csv` (fits are not stored)."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != _TRACE_HEADER:
        raise ValueError(f"{path}: expected header {_TRACE_HEADER!r}")
    records = []
    for line in lines[1:]:
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise ValueError(f"{path}: expected 5 fields, got {len(fields)}: {line!r}")
        records.append(
            LevelRecord(
                level=int(fields[0]),
                knot_count=int(fields[1]),
                spacing=float(fields[2]),
                rss=float(fields[3]),
                epsilon=float(fields[4]) if fields[4] else None,
            )
        )
    return RefinementTrace(records=records)

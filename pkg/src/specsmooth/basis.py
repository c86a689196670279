"""Cardinal cubic B-spline and uniform dyadic knot grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SpacingTooFine
from .spectrum import ChannelRange

#: Basis layouts: "extended" pads a knot-grid with one center beyond each
#: endpoint so the basis sums to one across the whole fitting range;
#: "knots-only" uses exactly one function per knot and decays near the ends.
MODES = ("extended", "knots-only")


def phi(x):
    """Cardinal cubic B-spline, the bell-shaped piecewise cubic on [-2, 2].

    Defined piecewise as ``|x|**3/2 - x**2 + 2/3`` for ``|x| <= 1`` and
    ``-|x|**3/6 + x**2 - 2|x| + 4/3`` for ``1 < |x| < 2``, and zero outside
    ``[-2, 2]``.  The two pieces join with matching first and second
    derivatives, so the function is C2 everywhere; its integer translates
    sum to one at every point.

    Accepts scalars or arrays; scalar input returns a Python float.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    a = np.abs(x)
    inner = 0.5 * a**3 - x * x + 2.0 / 3.0
    outer = -(a**3) / 6.0 + x * x - 2.0 * a + 4.0 / 3.0
    out = np.where(a <= 1.0, inner, np.where(a < 2.0, outer, 0.0))
    return float(out) if scalar else out


@dataclass(frozen=True)
class KnotGrid:
    """Equally spaced knots over a channel range plus a basis layout.

    Parameters
    ----------
    span : ChannelRange
        Fitting range ``[a, b]`` the knots cover; both endpoints are knots.
    knots : ndarray of float
        The knot positions, equally spaced, at least 5 of them.
    spacing : float
        Distance between adjacent knots.
    mode : {"extended", "knots-only"}
        Basis layout, see :data:`MODES`.
    """

    span: ChannelRange
    knots: np.ndarray = field(repr=False)
    spacing: float
    mode: str = "extended"

    def __post_init__(self):
        knots = np.array(self.knots, dtype=float)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if knots.ndim != 1 or knots.size < 5:
            raise ValueError("need at least 5 knots")
        if not (
            np.isclose(knots[0], self.span.a)
            and np.isclose(knots[-1], self.span.b)
        ):
            raise ValueError("knots must start and end on the span endpoints")
        steps = np.diff(knots)
        if not np.allclose(steps, self.spacing, rtol=1e-9, atol=0.0):
            raise ValueError("knots must be equally spaced by `spacing`")
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def knot_count(self) -> int:
        return self.knots.size

    @property
    def basis_count(self) -> int:
        """Number of basis functions: knots + 2 extended, knots otherwise."""
        if self.mode == "extended":
            return self.knot_count + 2
        return self.knot_count

    @property
    def centers(self) -> np.ndarray:
        """Center position of each basis function, in channel units."""
        if self.mode == "extended":
            first = self.span.a - self.spacing
            return first + self.spacing * np.arange(self.basis_count)
        return self.knots.copy()


def make_grid(span: ChannelRange, level: int, mode: str = "extended") -> KnotGrid:
    """Build the dyadic knot grid for a refinement level.

    Level 1 places 5 knots across `span`; each further level halves the
    spacing, giving ``4 * 2**(level - 1) + 1`` knots at level ``level``.

    Raises
    ------
    SpacingTooFine
        If the level's knot spacing would drop below one channel, where
        a cubic spline could interpolate the data instead of smoothing it.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    segments = 4 * 2 ** (level - 1)
    spacing = (span.b - span.a) / segments
    if spacing < 1.0:
        raise SpacingTooFine(
            f"level {level} spacing {spacing:.6g} is below one channel "
            f"on range [{span.a}, {span.b}]"
        )
    knots = np.linspace(span.a, span.b, segments + 1)
    return KnotGrid(span=span, knots=knots, spacing=spacing, mode=mode)


def basis_value(grid: KnotGrid, j: int, x):
    """Evaluate basis function `j` of `grid` at position(s) `x`.

    Basis function ``j`` is the cardinal spline scaled to the knot spacing
    and centered on ``grid.centers[j]``.  Evaluation maps ``x`` to the
    knot-index coordinate ``t = (x - a) / spacing`` first, so the translate
    identity ``sum_j phi(t - j) == 1`` holds to machine precision.
    """
    if not 0 <= j < grid.basis_count:
        raise IndexError(
            f"basis index {j} out of range for {grid.basis_count} functions"
        )
    x = np.asarray(x, dtype=float)
    t = (x - grid.span.a) / grid.spacing
    if grid.mode == "extended":
        return phi(t - (j - 1))
    return phi(t - j)

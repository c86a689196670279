"""Channel-indexed spectrum container and plain/CSV file I/O."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, TooShort

#: Shortest spectrum the smoother accepts: 5 knots with spacing >= 2 on the
#: coarsest grid need at least this many channels.
MIN_CHANNELS = 16


@dataclass(frozen=True)
class Spectrum:
    """A pulse-height spectrum: one count per contiguous channel.

    Counts are stored as floats so raw (integer) and smoothed (real, possibly
    negative) data share one type; non-negativity is enforced where measured
    data enters the system (file loading, synthetic generation), not here.
    Instances are immutable and the backing array is read-only, so they are
    safe to share across threads.

    Parameters
    ----------
    counts : array-like of float
        One count per channel, at least ``MIN_CHANNELS`` of them, all finite.
    channel_offset : int, optional
        Label of the first channel (CSV files may start above zero).
    label : str, optional
        Free-text description of the source.
    """

    counts: np.ndarray
    channel_offset: int = 0
    label: str = ""

    def __post_init__(self):
        arr = np.array(self.counts, dtype=float)
        if arr.ndim != 1:
            raise FormatError("counts must be one-dimensional")
        if arr.size < MIN_CHANNELS:
            raise TooShort(
                f"spectrum has {arr.size} channels, need at least {MIN_CHANNELS}"
            )
        if not np.all(np.isfinite(arr)):
            raise FormatError("counts must all be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)
        object.__setattr__(self, "channel_offset", int(self.channel_offset))

    def __len__(self) -> int:
        return self.counts.size

    @property
    def channels(self) -> np.ndarray:
        """Channel labels, ``channel_offset .. channel_offset + len - 1``."""
        return np.arange(self.channel_offset, self.channel_offset + len(self))


@dataclass(frozen=True)
class ChannelRange:
    """Inclusive range of channel indices ``[a, b]``, 0-based within a spectrum.

    Indices count from the first stored channel, not from ``channel_offset``.
    The range must span at least 8 channels so a 5-knot grid fits inside it.
    """

    a: int
    b: int

    def __post_init__(self):
        a, b = int(self.a), int(self.b)
        if a < 0 or a >= b:
            raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
        if b - a < 8:
            raise ValueError(f"range [{a}, {b}] spans fewer than 8 channels")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> int:
        """Number of integer channels covered, ``b - a + 1``."""
        return self.b - self.a + 1


def full_range(spectrum: Spectrum) -> ChannelRange:
    """The range covering every channel of `spectrum`."""
    return ChannelRange(0, len(spectrum) - 1)


def load_spectrum(path, fmt: str = "auto") -> Spectrum:
    """Read a spectrum from a plain or CSV file.

    Parameters
    ----------
    path : path-like
        File to read.
    fmt : {"auto", "plain", "csv"}
        ``plain`` is one decimal count per line (channels start at 0);
        ``csv`` expects a ``channel,count`` header and contiguous channel
        numbers.  ``auto`` picks ``csv`` for a ``.csv`` suffix.

    Raises
    ------
    OSError
        Missing or unreadable file.
    FormatError
        Non-numeric or negative counts, bad header, or channel gaps.
    TooShort
        Fewer than ``MIN_CHANNELS`` rows.
    """
    path = Path(path)
    if fmt == "auto":
        fmt = "csv" if path.suffix.lower() == ".csv" else "plain"
    if fmt not in ("plain", "csv"):
        raise ValueError(f"unknown format {fmt!r}")

    if fmt == "plain":
        counts = _parse_plain(path)
        offset = 0
    else:
        offset, counts = _parse_csv(path)
    for i, c in enumerate(counts):
        if c < 0:
            raise FormatError(f"{path}: negative count {c} at row {i + 1}")
    if len(counts) < MIN_CHANNELS:
        raise TooShort(
            f"{path}: {len(counts)} channels, need at least {MIN_CHANNELS}"
        )
    return Spectrum(np.array(counts), channel_offset=offset, label=path.name)


def _parse_plain(path: Path) -> list[float]:
    lines = path.read_text(encoding="utf-8").split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()
    counts = []
    for i, line in enumerate(lines):
        text = line.strip()
        try:
            value = float(text)
        except ValueError:
            raise FormatError(f"{path}: non-numeric count {text!r} on line {i + 1}") from None
        if not np.isfinite(value):
            raise FormatError(f"{path}: non-finite count on line {i + 1}")
        counts.append(value)
    return counts


def _parse_csv(path: Path) -> tuple[int, list[float]]:
    with path.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    while rows and rows[-1] == []:
        rows.pop()
    if not rows or [cell.strip() for cell in rows[0]] != ["channel", "count"]:
        raise FormatError(f"{path}: expected header 'channel,count'")
    offset = None
    counts = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise FormatError(f"{path}: expected 2 fields on line {i}, got {len(row)}")
        try:
            channel = int(row[0])
            value = float(row[1])
        except ValueError:
            raise FormatError(f"{path}: non-numeric row on line {i}: {row!r}") from None
        if not np.isfinite(value):
            raise FormatError(f"{path}: non-finite count on line {i}")
        if offset is None:
            offset = channel
        elif channel != offset + len(counts):
            raise FormatError(
                f"{path}: non-contiguous channel {channel} on line {i}, "
                f"expected {offset + len(counts)}"
            )
        counts.append(value)
    return offset or 0, counts


def save_spectrum(spectrum: Spectrum, path) -> None:
    """Write `spectrum` as ``channel,count`` CSV.

    Counts are written with 12 significant digits, so values representable
    at that precision round-trip exactly through :func:`load_spectrum`.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write("channel,count\n")
        for channel, count in zip(spectrum.channels, spectrum.counts):
            handle.write(f"{channel},{count:.12g}\n")

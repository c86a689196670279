"""Command-line interface: smooth, synth, and compare subcommands."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .baselines import BOUNDARIES, builtin_kernel, convolve_smooth
from .basis import MODES
from .errors import FormatError, SpecsmoothError
from .metrics import measure_peak, rmse
from .refinement import (
    SELECTION_RULES,
    RefinementConfig,
    smooth,
    write_trace_csv,
)
from .spectrum import ChannelRange, Spectrum, load_spectrum, save_spectrum
from .synth import (
    BENCHMARK_BACKGROUND,
    BENCHMARK_CHANNELS,
    BENCHMARK_PEAKS,
    PeakSpec,
    generate,
)

METHODS = ("bspline", "wavg3", "wavg5")
FORMATS = ("auto", "plain", "csv")

#: Environment variable that overrides ``synth --seed`` when set.
SEED_ENV = "SPECSMOOTH_SEED"

_SMOOTH_DEFAULTS = {
    "method": "bspline",
    "input": None,
    "output": None,
    "trace": None,
    "range": None,
    "select": "global-min",
    "mode": "extended",
    "min_spacing": 1.0,
    "max_levels": 16,
    "iterations": 1,
    "boundary": "mirror",
    "format": "auto",
    "clamp_nonnegative": False,
    "gnuplot": None,
}

_CONFIG_PARSERS = {
    "min_spacing": float,
    "max_levels": int,
    "iterations": int,
    "clamp_nonnegative": lambda s: {"true": True, "false": False}[s.lower()],
}


def _parse_channel_range(text: str) -> ChannelRange:
    first, sep, second = text.partition(":")
    if not sep:
        raise ValueError(f"expected A:B, got {text!r}")
    return ChannelRange(int(first), int(second))


def _parse_selection(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    if text not in SELECTION_RULES:
        raise ValueError(
            f"selection must be an integer or one of "
            f"{', '.join(SELECTION_RULES)}, got {text!r}"
        )
    return text


def _read_config_file(path) -> dict:
    """Parse a key=value config file; '#' starts a comment line."""
    entries = {}
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise FormatError(f"{path}: line {lineno}: expected key=value")
        entries[key.strip()] = value.strip()
    return entries


def _merge_smooth_config(args, parser) -> dict:
    """Apply precedence: command-line flags > config file > defaults."""
    merged = dict(_SMOOTH_DEFAULTS)
    if args.config is not None:
        for key, raw in _read_config_file(args.config).items():
            if key not in merged:
                parser.error(f"config file: unknown key {key!r}")
            try:
                merged[key] = _CONFIG_PARSERS.get(key, str)(raw)
            except (ValueError, KeyError):
                parser.error(f"config file: bad value for {key}: {raw!r}")
    for key in merged:
        flag_value = getattr(args, key)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def _validate_smooth_config(cfg: dict, parser) -> dict:
    if cfg["input"] is None:
        parser.error("an input path is required (--input or config file)")
    if cfg["output"] is None:
        parser.error("an output path is required (--output or config file)")
    for key, allowed in (
        ("method", METHODS),
        ("mode", MODES),
        ("boundary", BOUNDARIES),
        ("format", FORMATS),
    ):
        if cfg[key] not in allowed:
            parser.error(
                f"{key} must be one of {', '.join(allowed)}, got {cfg[key]!r}"
            )
    if cfg["min_spacing"] < 1.0:
        parser.error(f"min-spacing must be >= 1.0, got {cfg['min_spacing']}")
    if cfg["max_levels"] < 2:
        parser.error(f"max-levels must be >= 2, got {cfg['max_levels']}")
    if cfg["iterations"] < 1:
        parser.error(f"iterations must be >= 1, got {cfg['iterations']}")
    if isinstance(cfg["select"], str):
        try:
            cfg["select"] = _parse_selection(cfg["select"])
        except ValueError as exc:
            parser.error(str(exc))
    if isinstance(cfg["select"], int) and cfg["select"] < 1:
        parser.error(f"selected level must be >= 1, got {cfg['select']}")
    if isinstance(cfg["range"], str):
        try:
            cfg["range"] = _parse_channel_range(cfg["range"])
        except ValueError as exc:
            parser.error(f"bad range: {exc}")
    if cfg["trace"] is not None and cfg["method"] != "bspline":
        parser.error("--trace is only meaningful with --method bspline")
    paths = [
        os.path.abspath(cfg[key])
        for key in ("input", "output", "trace", "gnuplot")
        if cfg[key] is not None
    ]
    if len(paths) != len(set(paths)):
        parser.error("input, output, trace, and gnuplot paths must be distinct")
    return cfg


def _write_gnuplot(path, data_files: list[tuple[str, str]]) -> None:
    """Emit a ready-to-run gnuplot script plotting `channel,count` CSVs."""
    lines = [
        "set datafile separator \",\"",
        "set xlabel \"channel\"",
        "set ylabel \"counts\"",
        "set key top right",
    ]
    plots = [
        f"\"{file}\" every ::1 using 1:2 with lines title \"{title}\""
        for file, title in data_files
    ]
    lines.append("plot " + ", \\\n     ".join(plots))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_smooth(args) -> int:
    parser = args.parser
    cfg = _validate_smooth_config(_merge_smooth_config(args, parser), parser)
    spectrum = load_spectrum(cfg["input"], fmt=cfg["format"])
    span = cfg["range"]

    if cfg["method"] == "bspline":
        config = RefinementConfig(
            min_spacing=cfg["min_spacing"],
            max_levels=cfg["max_levels"],
            mode=cfg["mode"],
            selection=cfg["select"],
        )
        smoothed, trace = smooth(spectrum, span=span, config=config)
        if cfg["trace"] is not None:
            write_trace_csv(trace, cfg["trace"])
        level = trace.selected_level
        epsilon = trace.records[level - 1].epsilon
        print(f"selected level {level} (epsilon {epsilon!r})")
    else:
        kernel = builtin_kernel(cfg["method"])
        filtered = convolve_smooth(
            spectrum,
            kernel,
            iterations=cfg["iterations"],
            boundary=cfg["boundary"],
        )
        if span is None:
            smoothed = filtered
        else:
            if span.b > len(spectrum) - 1:
                parser.error(
                    f"range [{span.a}, {span.b}] exceeds spectrum of "
                    f"{len(spectrum)} channels"
                )
            counts = spectrum.counts.copy()
            counts[span.a : span.b + 1] = filtered.counts[span.a : span.b + 1]
            smoothed = Spectrum(
                counts,
                channel_offset=spectrum.channel_offset,
                label=spectrum.label,
            )

    if cfg["clamp_nonnegative"]:
        smoothed = Spectrum(
            np.maximum(smoothed.counts, 0.0),
            channel_offset=smoothed.channel_offset,
            label=smoothed.label,
        )
    save_spectrum(smoothed, cfg["output"])
    if cfg["gnuplot"] is not None:
        _write_gnuplot(
            cfg["gnuplot"],
            [(cfg["input"], "input"), (cfg["output"], "smoothed")],
        )
    return 0


def _parse_peak(text: str) -> PeakSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected CENTROID,AMPLITUDE,SIGMA, got {text!r}")
    return PeakSpec(
        centroid=float(parts[0]),
        amplitude=float(parts[1]),
        sigma=float(parts[2]),
    )


def _parse_background(text: str) -> tuple:
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"expected KIND:PARAM[,PARAM], got {text!r}")
    params = tuple(float(p) for p in rest.split(","))
    return (kind, *params)


def cmd_synth(args) -> int:
    parser = args.parser
    seed = args.seed
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            parser.error(f"{SEED_ENV} must be an integer, got {env_seed!r}")

    if args.preset == "benchmark":
        channels = args.channels if args.channels is not None else BENCHMARK_CHANNELS
        peaks = list(BENCHMARK_PEAKS)
        background = BENCHMARK_BACKGROUND
    else:
        channels = args.channels if args.channels is not None else BENCHMARK_CHANNELS
        try:
            peaks = [_parse_peak(text) for text in args.peak or []]
            background = (
                _parse_background(args.background)
                if args.background is not None
                else ("constant", 0.0)
            )
        except (ValueError, SpecsmoothError) as exc:
            parser.error(str(exc))
    if channels < 16:
        parser.error(f"--channels must be >= 16, got {channels}")

    scenario = generate(channels, peaks, background, seed)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_spectrum(scenario.truth, outdir / "truth.csv")
    save_spectrum(scenario.noisy, outdir / "noisy.csv")
    sidecar = {
        "channels": channels,
        "seed": seed,
        "peaks": [
            {
                "centroid": peak.centroid,
                "amplitude": peak.amplitude,
                "sigma": peak.sigma,
            }
            for peak in scenario.peaks
        ],
        "background": {
            "kind": scenario.background[0],
            "params": list(scenario.background[1:]),
        },
    }
    (outdir / "synth.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


def cmd_compare(args) -> int:
    parser = args.parser
    methods = []
    for item in args.methods:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            parser.error(f"expected NAME=PATH, got {item!r}")
        methods.append((name, path))
    try:
        windows = [_parse_channel_range(text) for text in args.window or []]
    except ValueError as exc:
        parser.error(f"bad window: {exc}")

    truth = load_spectrum(args.truth)
    lines = ["method,rmse_vs_truth,centroid_shift,fwhm_ratio,runtime_ms"]
    for name, path in methods:
        candidate = load_spectrum(path)
        error = rmse(candidate, truth)
        shifts = []
        ratios = []
        for window in windows:
            reference = measure_peak(truth, window)
            measured = measure_peak(candidate, window)
            shifts.append(measured.centroid - reference.centroid)
            ratios.append(measured.fwhm / reference.fwhm)
        shift_cell = repr(float(np.mean(shifts))) if shifts else ""
        ratio_cell = repr(float(np.mean(ratios))) if ratios else ""
        lines.append(f"{name},{error!r},{shift_cell},{ratio_cell},")
    text = "\n".join(lines) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specsmooth",
        description=(
            "Smooth gamma-ray pulse-height spectra with adaptive B-spline "
            "least squares, generate synthetic test spectra, and compare "
            "smoothing methods."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_smooth = subparsers.add_parser(
        "smooth", help="smooth a spectrum file and write the result as CSV"
    )
    p_smooth.add_argument("--input", help="spectrum file to smooth")
    p_smooth.add_argument("--output", help="where to write the smoothed CSV")
    p_smooth.add_argument(
        "--method", choices=METHODS, help="smoother to apply (default bspline)"
    )
    p_smooth.add_argument(
        "--range", help="fit only channels A:B, copying the rest through"
    )
    p_smooth.add_argument(
        "--select",
        help="level selection: global-min, first-local-min, or a level number",
    )
    p_smooth.add_argument(
        "--mode", choices=MODES, help="spline basis layout (default extended)"
    )
    p_smooth.add_argument(
        "--min-spacing",
        dest="min_spacing",
        type=float,
        help="stop refining below this knot spacing in channels (default 1.0)",
    )
    p_smooth.add_argument(
        "--max-levels",
        dest="max_levels",
        type=int,
        help="cap on refinement levels (default 16)",
    )
    p_smooth.add_argument(
        "--iterations",
        type=int,
        help="smoothing passes for wavg3/wavg5 (default 1)",
    )
    p_smooth.add_argument(
        "--boundary",
        choices=BOUNDARIES,
        help="end-of-spectrum handling for wavg3/wavg5 (default mirror)",
    )
    p_smooth.add_argument(
        "--trace", help="also write the per-level refinement trace CSV here"
    )
    p_smooth.add_argument(
        "--format",
        choices=FORMATS,
        help="input format; auto picks csv by suffix (default auto)",
    )
    p_smooth.add_argument(
        "--clamp-nonnegative",
        dest="clamp_nonnegative",
        action="store_const",
        const=True,
        help="clip negative smoothed counts to zero in the output",
    )
    p_smooth.add_argument(
        "--gnuplot", help="write a gnuplot script plotting input vs output"
    )
    p_smooth.add_argument(
        "--config", help="key=value file supplying defaults for any flag"
    )
    p_smooth.set_defaults(handler=cmd_smooth, parser=p_smooth)

    p_synth = subparsers.add_parser(
        "synth", help="generate a synthetic truth/noisy spectrum pair"
    )
    p_synth.add_argument(
        "--outdir",
        required=True,
        help="directory for truth.csv, noisy.csv, and synth.json",
    )
    p_synth.add_argument(
        "--channels", type=int, help="spectrum length (default 8192)"
    )
    p_synth.add_argument(
        "--seed",
        type=int,
        default=42,
        help=f"random seed (default 42; {SEED_ENV} overrides)",
    )
    p_synth.add_argument(
        "--preset",
        choices=("benchmark",),
        help="use the built-in benchmark peaks and background",
    )
    p_synth.add_argument(
        "--peak",
        action="append",
        metavar="CENTROID,AMPLITUDE,SIGMA",
        help="add a Gaussian peak (repeatable)",
    )
    p_synth.add_argument(
        "--background",
        metavar="KIND:PARAMS",
        help=(
            "constant:LEVEL, linear:INTERCEPT,SLOPE, or "
            "exponential:AMPLITUDE,SCALE (default constant:0)"
        ),
    )
    p_synth.set_defaults(handler=cmd_synth, parser=p_synth)

    p_compare = subparsers.add_parser(
        "compare", help="score smoothed spectra against a truth spectrum"
    )
    p_compare.add_argument(
        "--truth", required=True, help="ground-truth spectrum file"
    )
    p_compare.add_argument(
        "methods",
        nargs="+",
        metavar="NAME=PATH",
        help="labelled smoothed spectrum files to score",
    )
    p_compare.add_argument(
        "--window",
        action="append",
        metavar="A:B",
        help="peak window for centroid/FWHM comparison (repeatable)",
    )
    p_compare.add_argument(
        "--output", help="write the metrics CSV here instead of stdout"
    )
    p_compare.set_defaults(handler=cmd_compare, parser=p_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (OSError, SpecsmoothError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

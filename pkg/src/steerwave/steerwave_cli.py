"""
Steerwave CLI - Batch commands that build wavelets, apply Riesz transforms and run checks.

Usage:
    steerwave build --profile modified --n 3 --eps 0.125 --d 1 --N 16384
    steerwave riesz --alpha 1,0 in.json
    steerwave riesz --axis 1 --poisson 4 --N 512
    steerwave check tightness --profile modified --n 3 --N 512 --J 4
    steerwave check decay --compare original,modified:n3 --N 16384 --d 1

Exit codes: 0 pass, 1 failed check, 2 configuration error, 3 file error.
Reports are JSON with sorted keys and no timestamps, so a fixed
configuration always produces the same bytes.
"""

import sys
import json
import logging
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .steerwave_config import RunConfig, profile_for_label, split_label
from .steerwave_diagnostics import (
    COMPARISON_NOISE_FLOOR,
    SCHEMA_VERSION,
    CheckKind,
    DiagnosticsReport,
    decay_comparison,
    decay_fit,
    moments,
    poisson_comparison,
    poisson_oracle,
    print_decay_table,
    print_moment_table,
    random_field,
    spectrum_flatness_near_zero,
    write_decay_csv,
)
from .steerwave_errors import FieldIOError, InsufficientDataError, SteerwaveError
from .steerwave_fieldio import read_field, write_field
from .steerwave_frame import analyze, channel_filter, synthesize, tightness_map, write_channels
from .steerwave_grid import ScalarField
from .steerwave_profiles import sample_radial, spatial_wavelet, write_profile_csv
from .steerwave_riesz import riesz_channels, riesz_component, riesz_higher, riesz_invert, riesz_vector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

TIGHTNESS_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
ENERGY_TOL = 1e-10
MOMENT_TOL = 1e-8
POISSON_RMS_TOL = 1e-3
POISSON_CONSTANT_TOL = 1e-2
SUPPORT_TOL = 0.0


def write_report(report: Dict[str, Any], path: Path) -> Path:
    """Write a report as sorted, indented JSON with a trailing newline."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug("Wrote report %s", path)
    return path


def _stem(label: str) -> str:
    return label.replace(":", "_")


def _command_report(command: str, config: RunConfig, measurements: Dict[str, Any],
                    tolerances: Dict[str, Any], passed: bool) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config.to_dict(),
        "measurements": measurements,
        "tolerances": tolerances,
        "passed": passed,
    }


def _relative_error(a: ScalarField, b: ScalarField) -> float:
    return float(np.linalg.norm(a.values - b.values) / np.linalg.norm(b.values))


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def cmd_build_wavelet(config: RunConfig) -> int:
    """
    Write the mother wavelet spectrum, its spatial samples and a radial profile CSV.

    Files in the output directory, for a profile named e.g. ``modified:n3``:
    ``modified_n3_spectrum.{json,bin}``, ``modified_n3_wavelet.{json,bin}``,
    ``modified_n3_profile.csv`` and the report ``build_modified_n3.json``.
    """
    grid = config.grid()
    mother = config.mother()
    stem = _stem(mother.name)
    config.output_dir.mkdir(parents=True, exist_ok=True)

    spectrum = sample_radial(mother, grid)
    wavelet = spatial_wavelet(mother, grid)
    write_field(spectrum, config.output_dir / f"{stem}_spectrum")
    write_field(wavelet, config.output_dir / f"{stem}_wavelet")
    write_profile_csv(mother, config.output_dir / f"{stem}_profile.csv")

    lo, hi = mother.support
    radius = grid.frequency_radius
    magnitude = np.abs(spectrum.values)
    outside = (radius <= lo) | (radius > hi)
    leakage = float(np.max(magnitude[outside])) if outside.any() else 0.0
    measurements = {
        "support": [lo, hi],
        "max_outside_support": leakage,
        "peak_value": float(np.max(magnitude)),
        "peak_radius": float(radius.flat[int(np.argmax(magnitude))]),
        "wavelet_energy": wavelet.energy(),
    }
    report = _command_report("build", config, measurements,
                             {"max_outside_support": SUPPORT_TOL}, leakage <= SUPPORT_TOL)
    write_report(report, config.output_dir / f"build_{stem}.json")
    print(f"{'✓' if report['passed'] else '✗'} built {mother.name} on {grid.shape} in {config.output_dir}")
    return EXIT_OK if report["passed"] else EXIT_FAILED


# ---------------------------------------------------------------------------
# riesz
# ---------------------------------------------------------------------------

def cmd_riesz(config: RunConfig) -> int:
    """Apply R_i or R^alpha to a field file, or to a sampled Poisson kernel."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    if config.poisson_width is not None:
        source, _ = poisson_oracle(config.grid(), config.poisson_width)
        stem = f"poisson_s{config.poisson_width:g}"
        write_field(source, config.output_dir / stem)
    else:
        source = read_field(config.input_path, expect=ScalarField)
        stem = Path(config.input_path).name
        for suffix in (".json", ".bin"):
            stem = stem[:-len(suffix)] if stem.endswith(suffix) else stem

    if config.alpha is not None:
        result = riesz_higher(source, config.alpha)
        name = f"{stem}_riesz_alpha{'-'.join(str(a) for a in config.alpha)}"
    else:
        result = riesz_component(source, config.axis)
        name = f"{stem}_riesz_axis{config.axis}"
    write_field(result, config.output_dir / name)

    measurements: Dict[str, Any] = {
        "input_grid": source.grid.to_dict(),
        "input_energy": source.energy(),
        "output_energy": result.energy(),
        "output": name,
    }
    tolerances: Dict[str, Any] = {}
    passed = True
    if config.poisson_width is not None:
        axis = config.axis
        if axis is None and sum(config.alpha) == 1:
            axis = config.alpha.index(1) + 1
        if axis is not None:
            oracle = poisson_comparison(source.grid, config.poisson_width, axis, numeric=result)
            measurements["poisson_oracle"] = oracle
            tolerances = {"relative_rms": POISSON_RMS_TOL, "constant_deviation": POISSON_CONSTANT_TOL}
            passed = oracle["relative_rms"] < POISSON_RMS_TOL and oracle["constant_deviation"] < POISSON_CONSTANT_TOL
            print(f"Poisson oracle: relative RMS {oracle['relative_rms']:.3e}, "
                  f"calibrated constant {oracle['calibrated_constant']:.6f}")

    report = _command_report("riesz", config, measurements, tolerances, passed)
    write_report(report, config.output_dir / f"{name}.report.json")
    print(f"{'✓' if passed else '✗'} wrote {name}")
    return EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def check_tightness(config: RunConfig) -> DiagnosticsReport:
    spec = config.frame_spec()
    deviation = float(np.max(np.abs(tightness_map(spec).values)))
    return DiagnosticsReport(
        CheckKind.TIGHTNESS, config.to_dict(),
        measurements={"max_deviation": deviation, "channels": spec.num_channels},
        tolerances={"max_deviation": TIGHTNESS_TOL},
        passed=deviation < TIGHTNESS_TOL,
    )


def check_reconstruction(config: RunConfig) -> DiagnosticsReport:
    spec = config.frame_spec()
    f = random_field(spec.grid, config.seed)
    channels = analyze(f, spec)
    error = _relative_error(synthesize(channels), f)
    if config.tag:
        write_channels(channels, config.output_dir, config.tag)
    return DiagnosticsReport(
        CheckKind.RECONSTRUCTION, config.to_dict(),
        measurements={"relative_error": error, "channels": len(channels)},
        tolerances={"relative_error": RECONSTRUCTION_TOL},
        passed=error < RECONSTRUCTION_TOL,
    )


def check_energy(config: RunConfig) -> DiagnosticsReport:
    spec = config.frame_spec()
    f = random_field(spec.grid, config.seed)
    energy = f.energy()
    frame_energy = analyze(f, spec).energy()
    riesz_energy = sum(component.energy() for component in riesz_vector(f))
    inversion = _relative_error(riesz_invert(riesz_vector(f)), f)
    measurements = {
        "field_energy": energy,
        "frame_energy_deviation": abs(frame_energy - energy) / energy,
        "riesz_energy_deviation": abs(riesz_energy - energy) / energy,
        "riesz_inversion_error": inversion,
    }
    if config.riesz_order >= 1:
        order_energy = sum(channel.energy() for _, channel in riesz_channels(f, config.riesz_order))
        measurements["riesz_order_energy_deviation"] = abs(order_energy - energy) / energy
    passed = all(value < ENERGY_TOL for key, value in measurements.items() if key != "field_energy")
    return DiagnosticsReport(
        CheckKind.ENERGY, config.to_dict(), measurements,
        tolerances={"relative_deviation": ENERGY_TOL}, passed=passed,
    )


def check_moments(config: RunConfig) -> DiagnosticsReport:
    spec = config.frame_spec()
    mother = spec.mother()
    table = moments(spatial_wavelet(mother, spec.grid), config.beta_max)
    print_moment_table(table)

    dc = (0,) * spec.grid.dim
    dc_values = [abs(channel_filter(spec, k, alpha).values[dc]) for k, alpha in spec.channel_keys()]
    flatness = spectrum_flatness_near_zero(sample_radial(mother, spec.grid), 0.5 * mother.support[0])
    measurements = {
        "moments": table.to_dict(),
        "max_relative_moment": table.max_relative(),
        "max_channel_dc": max(dc_values),
        "spectrum_max_near_zero": flatness,
    }
    passed = table.all_below(MOMENT_TOL) and max(dc_values) == 0.0 and flatness == 0.0
    return DiagnosticsReport(
        CheckKind.MOMENTS, config.to_dict(), measurements,
        tolerances={"relative_moment": MOMENT_TOL, "channel_dc": 0.0, "spectrum_near_zero": 0.0},
        passed=passed,
    )


def check_decay(config: RunConfig) -> DiagnosticsReport:
    grid = config.grid()
    fits = {}
    tolerances = {"noise_floor": COMPARISON_NOISE_FLOOR, "confidence": "exponent +/- 2 stderr"}
    for label in config.compare:
        is_riesz, base = split_label(label)
        wavelet = spatial_wavelet(profile_for_label(base, config.transition), grid)
        if is_riesz:
            wavelet = riesz_component(wavelet, 1)
        try:
            fits[label] = decay_fit(wavelet, config.shell_width, config.fit_range,
                                    noise_floor=COMPARISON_NOISE_FLOOR, label=label)
        except InsufficientDataError as exc:
            logger.warning("decay fit of %s failed: %s", label, exc)
            return DiagnosticsReport(CheckKind.DECAY, config.to_dict(),
                                     measurements={"error": str(exc), "label": label},
                                     tolerances=tolerances, passed=False)
        write_decay_csv(fits[label], config.output_dir / f"decay_{_stem(label)}.csv")

    comparison = decay_comparison(fits)
    print_decay_table(comparison)
    return DiagnosticsReport(CheckKind.DECAY, config.to_dict(), comparison.to_dict(),
                             tolerances=tolerances, passed=comparison.passed)


CHECKS = {
    CheckKind.TIGHTNESS: check_tightness,
    CheckKind.RECONSTRUCTION: check_reconstruction,
    CheckKind.ENERGY: check_energy,
    CheckKind.MOMENTS: check_moments,
    CheckKind.DECAY: check_decay,
}


def cmd_check(config: RunConfig) -> int:
    """Run one check, write ``check_<kind>.json`` and return 0 iff it passed."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    report = CHECKS[config.check](config)
    write_report(report.to_dict(), config.output_dir / f"check_{config.check.value}.json")
    print(f"{'✓' if report.passed else '✗'} check {config.check.value}: {'pass' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--d", dest="dim", type=int, default=2, help="Spatial dimension (1, 2 or 3)")
    parser.add_argument("--N", dest="size", type=int, default=256, help="Samples per axis (power of two)")
    parser.add_argument("--dx", dest="spacing", type=float, default=1.0, help="Sample spacing")
    parser.add_argument("--profile", default="modified", choices=["original", "modified"])
    parser.add_argument("--n", dest="smoothness", default="3", help="Window smoothness: 3, 4, 5 or inf")
    parser.add_argument("--eps", dest="transition", type=float, default=0.125, help="Window transition eps")
    parser.add_argument("--J", dest="scales", type=int, default=3, help="Number of bandpass scales")
    parser.add_argument("--order", dest="riesz_order", type=int, default=1, help="Riesz order of the frame")
    parser.add_argument("--seed", type=int, default=0, help="Seed of random test fields")
    parser.add_argument("--output-dir", type=Path, default=None,
                        help="Output directory (default $STEERWAVE_OUTPUT_DIR or ./steerwave_out)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")


def _fit_range(text: str):
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steerwave", allow_abbrev=False,
                                     description="Bandlimited steerable wavelet frames and their diagnostics")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", allow_abbrev=False, help="Write a mother wavelet and its profile")
    _add_common(build)

    riesz = commands.add_parser("riesz", allow_abbrev=False, help="Apply a Riesz transform")
    _add_common(riesz)
    riesz.add_argument("input", nargs="?", type=Path, help="Input field file (.json header or .bin payload)")
    which = riesz.add_mutually_exclusive_group()
    which.add_argument("--axis", type=int, help="First-order component, 1..d")
    which.add_argument("--alpha", help="Multi-index a1,...,ad of a higher-order transform")
    riesz.add_argument("--poisson", dest="poisson_width", type=float,
                       help="Use the sampled 2-D Poisson kernel of this width as input")

    check = commands.add_parser("check", allow_abbrev=False, help="Run a numerical check")
    check.add_argument("check", choices=[kind.value for kind in CheckKind])
    _add_common(check)
    check.add_argument("--shell-width", type=float, help="Decay shell width (default 8*dx)")
    check.add_argument("--fit-range", type=_fit_range, help="Decay fit range lo,hi (default 8*dx,N*dx/8)")
    check.add_argument("--beta-max", type=int, default=3, help="Largest moment order")
    check.add_argument("--compare", help="Comma-separated wavelet labels, e.g. original,modified:n3")
    check.add_argument("--tag", help="Write the reconstruction channels to files with this prefix")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Translate parsed arguments into a validated RunConfig."""
    options = dict(
        command=args.command,
        dim=args.dim,
        size=args.size,
        spacing=args.spacing,
        profile=args.profile,
        smoothness=args.smoothness,
        transition=args.transition,
        scales=args.scales,
        riesz_order=args.riesz_order,
        seed=args.seed,
    )
    if args.output_dir is not None:
        options["output_dir"] = args.output_dir
    if args.command == "riesz":
        options.update(axis=args.axis, alpha=args.alpha, input_path=args.input, poisson_width=args.poisson_width)
    if args.command == "check":
        options.update(
            check=args.check,
            shell_width=args.shell_width,
            fit_range=args.fit_range,
            beta_max=args.beta_max,
            compare=tuple(label.strip() for label in args.compare.split(",")) if args.compare else (),
            tag=args.tag,
        )
    return RunConfig(**options).validate()


COMMAND_HANDLERS = {
    "build": cmd_build_wavelet,
    "riesz": cmd_riesz,
    "check": cmd_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
        return COMMAND_HANDLERS[config.command](config)
    except (FieldIOError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SteerwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())

"""
Test suite for the steerwave command-line tool and its run configuration.
"""

import csv
import json

import numpy as np
import pytest

from steerwave import ConfigError, ScalarField, read_field
from steerwave.steerwave_cli import EXIT_CONFIG, EXIT_FAILED, EXIT_IO, EXIT_OK, main
from steerwave.steerwave_config import RunConfig, default_output_dir, profile_for_label, split_label
from steerwave.steerwave_diagnostics import CheckKind


def run(tmp_path, *argv):
    """Invoke main with the output directory pointed at tmp_path."""
    return main([*argv, "--output-dir", str(tmp_path)])


def load_json(path):
    return json.loads(path.read_text())


def test_build_writes_wavelet_files(tmp_path):
    """Test build writes spectrum, wavelet, profile CSV and report."""
    assert run(tmp_path, "build", "--d", "2", "--N", "64", "--n", "4") == EXIT_OK

    for name in ("modified_n4_spectrum.json", "modified_n4_spectrum.bin",
                 "modified_n4_wavelet.json", "modified_n4_wavelet.bin",
                 "modified_n4_profile.csv", "build_modified_n4.json"):
        assert (tmp_path / name).exists(), name

    report = load_json(tmp_path / "build_modified_n4.json")
    assert report["schema_version"] == 1
    assert report["command"] == "build"
    assert report["passed"] is True
    assert report["measurements"]["max_outside_support"] == 0.0
    assert report["config"]["window"] == {"smoothness": 4, "transition": 0.125}

    wavelet = read_field(tmp_path / "modified_n4_wavelet", expect=ScalarField)
    assert wavelet.grid.shape == (64, 64)
    with (tmp_path / "modified_n4_profile.csv").open(newline="") as f:
        assert next(csv.reader(f)) == ["omega", "value"]


def test_build_original_profile(tmp_path):
    """Test the original profile peaks at pi/2."""
    assert run(tmp_path, "build", "--profile", "original", "--d", "1", "--N", "256") == EXIT_OK

    measurements = load_json(tmp_path / "build_original.json")["measurements"]
    assert measurements["peak_value"] == 1.0
    assert measurements["peak_radius"] == pytest.approx(np.pi / 2)


@pytest.mark.parametrize("argv", [
    ["build", "--n", "7"],
    ["build", "--eps", "1.0"],
    ["build", "--N", "100"],
    ["build", "--d", "4"],
    ["check", "tightness", "--N", "16", "--J", "6"],
    ["check", "decay", "--compare", "original,cubic"],
    ["check", "decay", "--fit-range", "8,1000"],
    ["check", "moments", "--beta-max", "9"],
])
def test_configuration_errors_exit_2(tmp_path, argv):
    """Test invalid parameters exit with status 2 before any work is done."""
    assert run(tmp_path, *argv) == EXIT_CONFIG
    assert not list(tmp_path.iterdir())


def test_argument_errors_exit_through_argparse(tmp_path):
    """Test unknown subcommands and malformed options."""
    with pytest.raises(SystemExit) as excinfo:
        run(tmp_path, "plot")
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        run(tmp_path, "check", "decay", "--fit-range", "8,x")
    with pytest.raises(SystemExit):
        run(tmp_path, "riesz", "--axis", "1", "--alpha", "1,0", "in.json")


@pytest.fixture
def wavelet_file(tmp_path):
    """A 64x64 modified wavelet written by the build command."""
    assert run(tmp_path, "build", "--N", "64") == EXIT_OK
    return tmp_path / "modified_n3_wavelet.json"


def test_riesz_alpha_matches_axis_bitwise(tmp_path, wavelet_file):
    """Test --alpha 1,0 and --axis 1 produce identical files."""
    assert run(tmp_path, "riesz", str(wavelet_file), "--alpha", "1,0") == EXIT_OK
    assert run(tmp_path, "riesz", str(wavelet_file), "--axis", "1") == EXIT_OK

    by_alpha = tmp_path / "modified_n3_wavelet_riesz_alpha1-0.bin"
    by_axis = tmp_path / "modified_n3_wavelet_riesz_axis1.bin"
    assert by_alpha.read_bytes() == by_axis.read_bytes()

    report = load_json(tmp_path / "modified_n3_wavelet_riesz_axis1.report.json")
    assert report["command"] == "riesz"
    assert report["measurements"]["output"] == "modified_n3_wavelet_riesz_axis1"


def test_riesz_second_order_on_payload_path(tmp_path, wavelet_file):
    """Test a higher-order transform addressed through the .bin path."""
    payload = wavelet_file.with_suffix(".bin")

    assert run(tmp_path, "riesz", str(payload), "--alpha", "1,1") == EXIT_OK
    assert (tmp_path / "modified_n3_wavelet_riesz_alpha1-1.json").exists()


def test_riesz_errors(tmp_path, wavelet_file):
    """Test zero-order indices, mismatched components and missing inputs."""
    assert run(tmp_path, "riesz", str(wavelet_file), "--alpha", "0,0") == EXIT_CONFIG
    assert run(tmp_path, "riesz", str(wavelet_file), "--alpha", "1,0,0") == EXIT_CONFIG
    assert run(tmp_path, "riesz", str(wavelet_file), "--axis", "3") == EXIT_CONFIG
    assert run(tmp_path, "riesz", "--axis", "1") == EXIT_CONFIG
    assert run(tmp_path, "riesz", str(tmp_path / "absent.json")) == EXIT_IO


def test_riesz_of_poisson_kernel(tmp_path):
    """Test the sampled Poisson kernel against its closed-form Riesz transform."""
    assert run(tmp_path, "riesz", "--poisson", "4", "--N", "512", "--axis", "2") == EXIT_OK

    report = load_json(tmp_path / "poisson_s4_riesz_axis2.report.json")
    oracle = report["measurements"]["poisson_oracle"]
    assert report["passed"] is True
    assert oracle["axis"] == 2
    assert oracle["relative_rms"] < 1e-3
    assert (tmp_path / "poisson_s4.json").exists()

    assert run(tmp_path, "riesz", "--poisson", "2", "--N", "512") == EXIT_CONFIG
    assert run(tmp_path, "riesz", "--poisson", "4", "--d", "1") == EXIT_CONFIG


@pytest.mark.parametrize("profile", ["original", "modified"])
def test_check_tightness(tmp_path, profile):
    """Test the tightness check passes and records its measurement."""
    assert run(tmp_path, "check", "tightness", "--profile", profile, "--N", "512", "--J", "4") == EXIT_OK

    report = load_json(tmp_path / "check_tightness.json")
    assert report["check"] == "tightness"
    assert report["measurements"]["max_deviation"] < 1e-12
    assert report["tolerances"] == {"max_deviation": 1e-12}


def test_check_reconstruction_writes_channels(tmp_path):
    """Test reconstruction with a seed passes and leaves tagged channel files."""
    assert run(tmp_path, "check", "reconstruction", "--seed", "7", "--J", "2", "--order", "2",
               "--tag", "seven") == EXIT_OK

    report = load_json(tmp_path / "check_reconstruction.json")
    assert report["measurements"]["relative_error"] < 1e-10
    assert report["measurements"]["channels"] == 2 + 2 * 3
    assert (tmp_path / "seven_frame.json").exists()
    assert (tmp_path / "seven_scale1_alpha0-2.bin").exists()


def test_check_energy(tmp_path):
    """Test frame and Riesz energy identities through the CLI."""
    assert run(tmp_path, "check", "energy", "--order", "3", "--N", "128") == EXIT_OK

    measurements = load_json(tmp_path / "check_energy.json")["measurements"]
    assert measurements["riesz_order_energy_deviation"] < 1e-10
    assert measurements["riesz_inversion_error"] < 1e-10


def test_check_moments(tmp_path):
    """Test the vanishing-moment check in one dimension."""
    assert run(tmp_path, "check", "moments", "--d", "1", "--N", "4096", "--n", "inf", "--eps", "0.25") == EXIT_OK

    measurements = load_json(tmp_path / "check_moments.json")["measurements"]
    assert measurements["max_channel_dc"] == 0.0
    assert measurements["spectrum_max_near_zero"] == 0.0
    assert len(measurements["moments"]["rows"]) == 4


def test_check_decay(tmp_path):
    """Test the default decay comparison: original against the configured modified profile."""
    assert run(tmp_path, "check", "decay", "--d", "1", "--N", "16384") == EXIT_OK

    report = load_json(tmp_path / "check_decay.json")
    assert report["config"]["compare"] == ["original", "modified:n3"]
    assert report["measurements"]["verdict"] == "pass"
    assert (tmp_path / "decay_original.csv").exists()
    assert (tmp_path / "decay_modified_n3.csv").exists()


def test_check_decay_with_too_few_shells_fails(tmp_path):
    """Test a decay fit that cannot find four shells fails instead of crashing."""
    assert run(tmp_path, "check", "decay", "--d", "1", "--N", "256", "--fit-range", "8,24") == EXIT_FAILED

    report = load_json(tmp_path / "check_decay.json")
    assert report["passed"] is False
    assert "need 4" in report["measurements"]["error"]


def test_small_grids_run_without_decay_settings(tmp_path):
    """Test grids too small for a decay fit still build, transform and check."""
    assert run(tmp_path, "check", "tightness", "--N", "16", "--J", "1") == EXIT_OK
    assert load_json(tmp_path / "check_tightness.json")["config"]["fit_range"] is None

    assert run(tmp_path, "build", "--d", "1", "--N", "32", "--J", "1") == EXIT_OK
    assert run(tmp_path, "riesz", str(tmp_path / "modified_n3_wavelet.json"), "--axis", "1") == EXIT_OK
    assert (tmp_path / "modified_n3_wavelet_riesz_axis1.json").exists()


def test_reconstruction_without_tag_writes_no_channels(tmp_path):
    """Test channel files are written only when a tag is given."""
    assert run(tmp_path, "check", "reconstruction", "--N", "64", "--J", "2") == EXIT_OK

    assert load_json(tmp_path / "check_reconstruction.json")["config"]["tag"] is None
    assert not list(tmp_path.glob("*_frame.json"))
    assert not list(tmp_path.glob("*_scale*"))


def test_reports_are_deterministic(tmp_path):
    """Test the same configuration writes byte-identical reports."""
    assert run(tmp_path, "check", "reconstruction", "--seed", "3", "--N", "64", "--J", "2") == EXIT_OK
    first = (tmp_path / "check_reconstruction.json").read_bytes()
    assert run(tmp_path, "check", "reconstruction", "--seed", "3", "--N", "64", "--J", "2") == EXIT_OK

    assert (tmp_path / "check_reconstruction.json").read_bytes() == first
    assert first.endswith(b"\n")


def test_output_dir_from_environment(tmp_path, monkeypatch):
    """Test STEERWAVE_OUTPUT_DIR sets the default output directory."""
    monkeypatch.setenv("STEERWAVE_OUTPUT_DIR", str(tmp_path / "env_out"))

    assert default_output_dir() == tmp_path / "env_out"
    assert main(["check", "tightness", "--N", "64", "--J", "2"]) == EXIT_OK
    assert (tmp_path / "env_out" / "check_tightness.json").exists()


def test_run_config_resolves_defaults(tmp_path):
    """Test validate() fills in derived values."""
    config = RunConfig("check", check="decay", dim=1, size=4096, output_dir=tmp_path).validate()

    assert config.check is CheckKind.DECAY
    assert config.shell_width == 8.0
    assert config.fit_range == (8.0, 512.0)
    assert config.compare == ("original", "modified:n3")
    assert config.to_dict()["check"] == "decay"

    riesz = RunConfig("riesz", poisson_width=4.0, size=512, output_dir=tmp_path).validate()
    assert riesz.axis == 1
    assert riesz.shell_width is None
    assert riesz.fit_range is None


@pytest.mark.parametrize("profile,smoothness,expected", [
    ("original", 3, ("original", "modified:n3")),
    ("original", "inf", ("original", "modified:inf")),
    ("modified", 5, ("original", "modified:n5")),
])
def test_default_decay_comparison(tmp_path, profile, smoothness, expected):
    """Test the default comparison always pits the original against a modified profile."""
    config = RunConfig("check", check="decay", dim=1, size=4096, profile=profile,
                       smoothness=smoothness, output_dir=tmp_path).validate()

    assert config.compare == expected


@pytest.mark.parametrize("options,message", [
    ({"command": "plot"}, "Unknown command"),
    ({"command": "check"}, "check kind"),
    ({"command": "check", "check": "speed"}, "Unknown check"),
    ({"command": "build", "seed": -1}, "Seed"),
    ({"command": "check", "check": "decay", "shell_width": 0.5}, "below the grid spacing"),
    ({"command": "check", "check": "decay", "size": 64}, "Fit range"),
    ({"command": "check", "check": "decay", "compare": ("original", "original")}, "Duplicate"),
    ({"command": "riesz", "axis": 1, "alpha": "1,0", "poisson_width": 4.0}, "not both"),
    ({"command": "riesz", "poisson_width": 4.0, "input_path": "f.json"}, "exactly one"),
])
def test_run_config_validation(tmp_path, options, message):
    """Test RunConfig rejects inconsistent parameters."""
    with pytest.raises(ConfigError, match=message):
        RunConfig(output_dir=tmp_path, **options).validate()


def test_wavelet_labels():
    """Test decay labels map to profiles."""
    assert profile_for_label("original", 0.125).name == "original"
    assert profile_for_label("modified:n5", 0.25).name == "modified:n5"
    assert profile_for_label("modified:inf", 0.125).name == "modified:inf"
    assert split_label("riesz:modified:n3") == (True, "modified:n3")
    assert split_label("original") == (False, "original")
    with pytest.raises(ConfigError, match="Unknown wavelet label"):
        profile_for_label("haar", 0.125)

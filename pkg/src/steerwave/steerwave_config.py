"""
Steerwave Config - Fully resolved run configuration for the command-line tool.

The default output directory comes from the STEERWAVE_OUTPUT_DIR environment
variable (a .env file is honoured) and falls back to ./steerwave_out.
"""

import os
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from dotenv import load_dotenv

from .steerwave_diagnostics import CheckKind, default_fit_range
from .steerwave_errors import ConfigError
from .steerwave_frame import FrameSpec
from .steerwave_grid import GridSpec
from .steerwave_profiles import ProfileKind, RadialProfile, make_profile
from .steerwave_riesz import MultiIndex, parse_multi_index
from .steerwave_window import WindowSpec

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "STEERWAVE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "steerwave_out"
COMMANDS = ("build", "riesz", "check")
RIESZ_PREFIX = "riesz:"


def default_output_dir() -> Path:
    """Output directory from the environment (after loading .env), else ./steerwave_out."""
    load_dotenv()
    return Path(os.getenv(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR)


def profile_for_label(label: str, transition: float) -> RadialProfile:
    """
    Mother profile named by a decay label.

    Examples:
        "original"     -> original Simoncelli profile
        "modified:n3"  -> Meyer-windowed profile with n=3
        "modified:inf" -> Meyer-windowed profile with the infinitely smooth window
    """
    if label == "original":
        return make_profile(ProfileKind.SIMONCELLI_ORIGINAL)
    if label.startswith("modified:"):
        smoothness = label[len("modified:"):]
        smoothness = smoothness[1:] if smoothness.startswith("n") else smoothness
        return make_profile(ProfileKind.SIMONCELLI_MODIFIED, WindowSpec(smoothness, transition))
    raise ConfigError(f"Unknown wavelet label: {label!r}")


def split_label(label: str) -> Tuple[bool, str]:
    """(is_riesz, base label) of a decay label such as "riesz:modified:n3"."""
    if label.startswith(RIESZ_PREFIX):
        return True, label[len(RIESZ_PREFIX):]
    return False, label


@dataclass
class RunConfig:
    """
    Every parameter of one CLI run.

    Call validate() before use: it checks each value against the preconditions
    of the library call that will consume it and fills in derived defaults.
    """
    command: str
    check: Optional[CheckKind] = None
    dim: int = 2
    size: int = 256
    spacing: float = 1.0
    profile: ProfileKind = ProfileKind.SIMONCELLI_MODIFIED
    smoothness: Union[int, float, str] = 3
    transition: float = 0.125
    scales: int = 3
    riesz_order: int = 1
    shell_width: Optional[float] = None
    fit_range: Optional[Tuple[float, float]] = None
    beta_max: int = 3
    seed: int = 0
    output_dir: Path = field(default_factory=default_output_dir)
    compare: Tuple[str, ...] = ()
    axis: Optional[int] = None
    alpha: Optional[MultiIndex] = None
    input_path: Optional[Path] = None
    poisson_width: Optional[float] = None
    tag: Optional[str] = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}, expected one of {COMMANDS}")
        if self.command == "check" and self.check is None:
            raise ConfigError("check needs a check kind")
        if isinstance(self.check, str):
            try:
                self.check = CheckKind(self.check)
            except ValueError:
                raise ConfigError(f"Unknown check {self.check!r}") from None
        try:
            self.profile = ProfileKind(self.profile) if isinstance(self.profile, str) else self.profile
        except ValueError:
            raise ConfigError(f"Unknown profile kind: {self.profile!r}") from None
        self.output_dir = Path(self.output_dir)

        grid = self.grid()
        window = self.window()
        if self.command in ("build", "check"):
            FrameSpec(grid, self.scales, self.riesz_order, self.profile, window)

        if isinstance(self.beta_max, bool) or not isinstance(self.beta_max, int) or not 0 <= self.beta_max <= 8:
            raise ConfigError(f"beta_max must be an integer in [0, 8], got {self.beta_max!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"Seed must be a non-negative integer, got {self.seed!r}")

        if self.check is CheckKind.DECAY:
            self._validate_decay(grid)

        if self.command == "riesz":
            self._validate_riesz(grid)
        return self

    def _validate_decay(self, grid: GridSpec):
        # Only decay fits use the shell width and fit range.
        if self.shell_width is None:
            self.shell_width = 8.0 * grid.spacing
        if self.shell_width < grid.spacing:
            raise ConfigError(f"Shell width {self.shell_width} is below the grid spacing {grid.spacing}")
        if self.fit_range is None:
            self.fit_range = default_fit_range(grid)
        lo, hi = (float(v) for v in self.fit_range)
        if not 0.0 < lo < hi <= grid.extent / 4.0:
            raise ConfigError(f"Fit range ({lo}, {hi}] must lie within (0, {grid.extent / 4.0}]")
        self.fit_range = (lo, hi)

        if not self.compare:
            if self.profile is ProfileKind.SIMONCELLI_ORIGINAL:
                modified = WindowSpec(self.smoothness, self.transition)
                self.compare = ("original", f"modified:{modified.label}")
            else:
                self.compare = ("original", self.mother().name)
        self.compare = tuple(self.compare)
        for label in self.compare:
            profile_for_label(split_label(label)[1], self.transition)
        if len(set(self.compare)) != len(self.compare):
            raise ConfigError(f"Duplicate labels in {self.compare}")

    def _validate_riesz(self, grid: GridSpec):
        if self.axis is not None and self.alpha is not None:
            raise ConfigError("Give either --axis or --alpha, not both")
        if self.alpha is not None:
            self.alpha = parse_multi_index(self.alpha, None if self.input_path else grid.dim)
            if sum(self.alpha) == 0:
                raise ConfigError("Riesz multi-index needs order at least 1")
        elif self.axis is None:
            self.axis = 1
        if (self.input_path is None) == (self.poisson_width is None):
            raise ConfigError("riesz needs exactly one of an input field file or --poisson")
        if self.poisson_width is not None:
            if grid.dim != 2:
                raise ConfigError(f"--poisson needs d=2, got d={grid.dim}")
            if self.poisson_width < 4.0 * grid.spacing:
                raise ConfigError(f"Poisson width {self.poisson_width} is below 4*dx")
            dim = grid.dim
            if self.alpha is not None and len(self.alpha) != dim:
                raise ConfigError(f"Multi-index {self.alpha} does not have {dim} components")
            if self.axis is not None and not 1 <= self.axis <= dim:
                raise ConfigError(f"Riesz axis must be in 1..{dim}, got {self.axis}")
        else:
            self.input_path = Path(self.input_path)

    def grid(self) -> GridSpec:
        return GridSpec(self.dim, self.size, self.spacing)

    def window(self) -> Optional[WindowSpec]:
        if self.profile is ProfileKind.SIMONCELLI_ORIGINAL:
            return None
        return WindowSpec(self.smoothness, self.transition)

    def mother(self) -> RadialProfile:
        return make_profile(self.profile, self.window())

    def frame_spec(self) -> FrameSpec:
        return FrameSpec(self.grid(), self.scales, self.riesz_order, self.profile, self.window())

    def to_dict(self) -> Dict[str, Any]:
        window = self.window()
        return {
            "command": self.command,
            "check": self.check.value if self.check else None,
            "grid": self.grid().to_dict(),
            "profile": self.profile.value,
            "window": window.to_dict() if window else None,
            "scales": self.scales,
            "riesz_order": self.riesz_order,
            "shell_width": self.shell_width,
            "fit_range": list(self.fit_range) if self.fit_range else None,
            "beta_max": self.beta_max,
            "seed": self.seed,
            "output_dir": str(self.output_dir),
            "compare": list(self.compare),
            "axis": self.axis,
            "alpha": list(self.alpha) if self.alpha else None,
            "input": str(self.input_path) if self.input_path else None,
            "poisson_width": self.poisson_width,
            "tag": self.tag,
        }

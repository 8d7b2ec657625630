"""
Steerwave Grid - Uniform sampling grids and the field containers that live on them.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft as sfft

from .steerwave_errors import GridError, IndexRangeError, NumericError

logger = logging.getLogger(__name__)

SUPPORTED_DIMS = (1, 2, 3)
MIN_SIZE = 16

# Radii sitting on a shell edge must not drop into the shell below.
_EDGE_SLACK = 1e-9


class Domain(Enum):
    """Which side of the Fourier transform a field lives on."""
    SPATIAL = "spatial"
    FREQUENCY = "frequency"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class GridSpec:
    """
    Isotropic sampling grid on [-N*dx/2, N*dx/2)^d.

    Spatial sample i along an axis sits at x = (i - N/2) * dx, so the origin is
    index N/2. Frequency bins follow the standard DFT layout, with the Nyquist
    bin N/2 mapped to -pi/dx.
    """
    dim: int
    size: int
    spacing: float = 1.0

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)):
            raise GridError(f"Grid dimension must be an integer, got {self.dim!r}")
        if self.dim not in SUPPORTED_DIMS:
            raise GridError(f"Grid dimension must be one of {SUPPORTED_DIMS}, got {self.dim}")
        if isinstance(self.size, bool) or not isinstance(self.size, (int, np.integer)):
            raise GridError(f"Grid size must be an integer, got {self.size!r}")
        if self.size < MIN_SIZE or not _is_power_of_two(int(self.size)):
            raise GridError(f"Grid size must be a power of two >= {MIN_SIZE}, got {self.size}")
        spacing = float(self.spacing)
        if not math.isfinite(spacing) or spacing <= 0:
            raise GridError(f"Grid spacing must be positive and finite, got {self.spacing!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "size", int(self.size))
        object.__setattr__(self, "spacing", spacing)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.size,) * self.dim

    @property
    def num_samples(self) -> int:
        return self.size ** self.dim

    @property
    def extent(self) -> float:
        """Side length N*dx of the spatial domain."""
        return self.size * self.spacing

    @property
    def nyquist(self) -> float:
        """Magnitude pi/dx of the Nyquist frequency."""
        return math.pi / self.spacing

    @property
    def frequency_step(self) -> float:
        """Spacing 2*pi/(N*dx) between neighbouring frequency bins."""
        return 2.0 * math.pi / self.extent

    @property
    def nyquist_index(self) -> int:
        return self.size // 2

    def axis_coords(self) -> np.ndarray:
        """Spatial coordinates along one axis."""
        return (np.arange(self.size) - self.size // 2) * self.spacing

    def axis_frequencies(self) -> np.ndarray:
        """Signed angular frequencies along one axis, in DFT order."""
        return 2.0 * np.pi * sfft.fftfreq(self.size, d=self.spacing)

    @cached_property
    def spatial_mesh(self) -> Tuple[np.ndarray, ...]:
        axis = self.axis_coords()
        return tuple(_readonly(m) for m in np.meshgrid(*([axis] * self.dim), indexing="ij"))

    @cached_property
    def frequency_mesh(self) -> Tuple[np.ndarray, ...]:
        axis = self.axis_frequencies()
        return tuple(_readonly(m) for m in np.meshgrid(*([axis] * self.dim), indexing="ij"))

    @cached_property
    def spatial_radius(self) -> np.ndarray:
        if self.dim == 1:
            return _readonly(np.abs(self.spatial_mesh[0]))
        return _readonly(np.sqrt(sum(m ** 2 for m in self.spatial_mesh)))

    @cached_property
    def frequency_radius(self) -> np.ndarray:
        if self.dim == 1:
            return _readonly(np.abs(self.frequency_mesh[0]))
        return _readonly(np.sqrt(sum(m ** 2 for m in self.frequency_mesh)))

    def nyquist_mask(self, axes: Optional[Sequence[int]] = None) -> np.ndarray:
        """
        Boolean map of bins whose index is N/2 on any of the given axes.

        Args:
            axes: Zero-based axes to inspect (default: all axes)

        Returns:
            Boolean array shaped like the grid
        """
        if axes is None:
            axes = range(self.dim)
        mask = np.zeros(self.shape, dtype=bool)
        for axis in axes:
            index = [slice(None)] * self.dim
            index[axis] = self.nyquist_index
            mask[tuple(index)] = True
        return mask

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "N": self.size, "dx": self.spacing}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridSpec":
        return cls(dim=data["dim"], size=data["N"], spacing=data["dx"])


def freq_coord(grid: GridSpec, index: Union[int, Sequence[int]]) -> np.ndarray:
    """
    Signed angular frequency of a DFT bin.

    Examples:
        N=16, dx=1, index=0 -> 0
        N=16, dx=1, index=8 -> -pi (Nyquist maps to the negative edge)
        N=16, dx=1, index=1 -> pi/8

    Args:
        grid: The sampling grid
        index: Bin index (an int is accepted for one-dimensional grids)

    Returns:
        Frequency vector of length d, components in [-pi/dx, pi/dx)
    """
    if isinstance(index, (int, np.integer)):
        index = (int(index),)
    index = tuple(index)
    if len(index) != grid.dim:
        raise IndexRangeError(f"Expected a {grid.dim}-component index, got {index}")
    for k in index:
        if not 0 <= k < grid.size:
            raise IndexRangeError(f"Bin index {k} outside [0, {grid.size})")
    axis = grid.axis_frequencies()
    return np.array([axis[k] for k in index], dtype=np.float64)


def require_same_grid(*fields: Any) -> GridSpec:
    """Return the common grid of the given fields or raise GridError."""
    if not fields:
        raise GridError("At least one field is required")
    grid = fields[0].grid
    for other in fields[1:]:
        if other.grid != grid:
            raise GridError(f"Grid mismatch: {grid} vs {other.grid}")
    return grid


def _coerce_values(grid: GridSpec, values: Any, dtype: type) -> np.ndarray:
    array = np.asarray(values)
    if dtype is np.float64 and np.iscomplexobj(array):
        raise NumericError("ScalarField values must be real")
    array = np.array(array, dtype=dtype, copy=True, order="C")
    if array.shape != grid.shape:
        if array.size != grid.num_samples:
            raise GridError(f"Expected {grid.shape} samples, got array of shape {array.shape}")
        array = array.reshape(grid.shape)
    return array


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real samples on a grid (spatial by default, or a real per-bin map)."""
    grid: GridSpec
    values: np.ndarray
    domain: Domain = Domain.SPATIAL

    def __post_init__(self):
        values = _coerce_values(self.grid, self.values, np.float64)
        if not np.all(np.isfinite(values)):
            raise NumericError("ScalarField values must all be finite")
        object.__setattr__(self, "values", _readonly(values))

    @classmethod
    def zeros(cls, grid: GridSpec, domain: Domain = Domain.SPATIAL) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape), domain)

    def energy(self) -> float:
        """Sum of squared samples."""
        return float(np.sum(self.values ** 2))

    def norm(self) -> float:
        return math.sqrt(self.energy())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "ScalarField",
            "domain": self.domain.value,
            "grid": self.grid.to_dict(),
            "energy": self.energy(),
        }


@dataclass(frozen=True, eq=False)
class SpectrumField:
    """Complex DFT samples indexed by frequency bin."""
    grid: GridSpec
    values: np.ndarray
    domain: Domain = Domain.FREQUENCY

    def __post_init__(self):
        values = _coerce_values(self.grid, self.values, np.complex128)
        object.__setattr__(self, "values", _readonly(values))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectrumField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def energy(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.energy())

    def mirrored(self) -> np.ndarray:
        """Values at the negated frequencies, bin k -> (-k mod N) on every axis."""
        flip = (-np.arange(self.grid.size)) % self.grid.size
        return self.values[np.ix_(*([flip] * self.grid.dim))]

    def is_hermitian(self, rtol: float = 1e-12) -> bool:
        """True if the spectrum equals its conjugate flip, i.e. it belongs to a real field."""
        scale = np.linalg.norm(self.values)
        if scale == 0:
            return True
        return bool(np.linalg.norm(self.values - np.conj(self.mirrored())) <= rtol * scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "SpectrumField",
            "domain": self.domain.value,
            "grid": self.grid.to_dict(),
            "energy": self.energy(),
        }


@dataclass(frozen=True, eq=False)
class ShellTable:
    """Per-shell supremum of |f| over radial shells of fixed width."""
    shell_width: float
    r_center: np.ndarray
    r_min: np.ndarray
    max_abs: np.ndarray

    def __len__(self) -> int:
        return len(self.r_center)

    def rows(self):
        return list(zip(self.r_center.tolist(), self.max_abs.tolist()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shell_width": self.shell_width,
            "r_center": self.r_center.tolist(),
            "r_min": self.r_min.tolist(),
            "max_abs": self.max_abs.tolist(),
        }


def shell_max(
    field: ScalarField,
    shell_width: float,
    r_range: Optional[Tuple[float, float]] = None,
) -> ShellTable:
    """
    Supremum of |f| over radial shells [k*w, (k+1)*w).

    Shells partition radii [0, N*dx/2); samples further out (grid corners) are
    ignored and empty shells are omitted.

    Args:
        field: Spatial field to scan
        shell_width: Shell width w, at least the grid spacing
        r_range: Optional closed radius interval restricting which samples count

    Returns:
        ShellTable with one row per non-empty shell
    """
    grid = field.grid
    if shell_width < grid.spacing * (1 - _EDGE_SLACK):
        raise GridError(f"Shell width {shell_width} is below the grid spacing {grid.spacing}")

    radius = grid.spatial_radius.ravel()
    magnitude = np.abs(field.values).ravel()
    keep = radius < grid.extent / 2
    if r_range is not None:
        keep &= (radius >= r_range[0]) & (radius <= r_range[1])
    radius, magnitude = radius[keep], magnitude[keep]

    n_shells = int(math.ceil(grid.extent / 2 / shell_width)) + 1
    ids = np.floor(radius / shell_width + _EDGE_SLACK).astype(np.int64)
    counts = np.bincount(ids, minlength=n_shells)
    maxima = np.zeros(len(counts))
    np.maximum.at(maxima, ids, magnitude)
    minima = np.full(len(counts), np.inf)
    np.minimum.at(minima, ids, radius)

    occupied = counts > 0
    centers = (np.arange(len(counts)) + 0.5) * shell_width
    return ShellTable(
        shell_width=float(shell_width),
        r_center=centers[occupied],
        r_min=minima[occupied],
        max_abs=maxima[occupied],
    )

"""
Steerwave Spectral Engine - Unitary DFT contract and pointwise Fourier multipliers.

Fields are transformed with ``scipy.fft`` using the orthonormal convention, so
sum |f|^2 == sum |f_hat|^2. The spatial origin (index N/2) is shifted to index 0
before the DFT, which makes the spectrum of a real even field real.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft as sfft

from .steerwave_errors import GridError, MultiIndexError, NumericError
from .steerwave_grid import Domain, GridSpec, ScalarField, SpectrumField, freq_coord

logger = logging.getLogger(__name__)

IMAG_RESIDUE_TOL = 1e-11


def forward(field: ScalarField, grid: Optional[GridSpec] = None) -> SpectrumField:
    """
    Unitary forward DFT of a spatial field.

    Args:
        field: Spatial field
        grid: Optional grid the field is required to live on

    Returns:
        Spectrum in standard DFT bin order
    """
    if grid is not None and field.grid != grid:
        raise GridError(f"Field grid {field.grid} does not match {grid}")
    if field.domain is not Domain.SPATIAL:
        raise GridError("forward expects a spatial field")
    values = sfft.fftn(sfft.ifftshift(field.values), norm="ortho")
    return SpectrumField(field.grid, values)


def inverse(
    spec: SpectrumField,
    grid: Optional[GridSpec] = None,
    strict: bool = True,
) -> ScalarField:
    """
    Unitary inverse DFT back to a real spatial field.

    Args:
        spec: Spectrum in DFT bin order
        grid: Optional grid the spectrum is required to live on
        strict: Raise NumericError when the result is not real to within 1e-11
            relative; otherwise log a warning and keep the real part

    Returns:
        Real spatial field
    """
    if grid is not None and spec.grid != grid:
        raise GridError(f"Spectrum grid {spec.grid} does not match {grid}")
    values = sfft.fftshift(sfft.ifftn(spec.values, norm="ortho"))
    scale = np.linalg.norm(values)
    if scale > 0:
        residue = np.linalg.norm(values.imag) / scale
        if residue > IMAG_RESIDUE_TOL:
            message = f"Inverse transform is not real: imaginary residue {residue:.3e}"
            if strict:
                raise NumericError(message)
            logger.warning(message)
    return ScalarField(spec.grid, values.real)


@dataclass(frozen=True)
class MultiplierFn:
    """
    A Fourier multiplier m(omega).

    ``evaluate`` is vectorised: it receives the d frequency components as
    broadcastable arrays and returns m at each point. Bins whose index is the
    Nyquist bin on one of ``nyquist_zero_axes`` (zero-based) are set to 0 when
    the multiplier is laid onto a grid, since those self-conjugate bins cannot
    carry an odd symbol.
    """
    evaluate: Callable[..., np.ndarray]
    name: str = "multiplier"
    nyquist_zero_axes: Tuple[int, ...] = ()

    def __call__(self, omega: Sequence[float]) -> complex:
        components = [np.asarray(w, dtype=np.float64) for w in np.atleast_1d(omega)]
        return complex(np.asarray(self.evaluate(*components)))

    def on_grid(self, grid: GridSpec) -> np.ndarray:
        """Multiplier values at every bin of a grid, in DFT order."""
        table = np.broadcast_to(self.evaluate(*grid.frequency_mesh), grid.shape)
        table = np.array(table, dtype=np.complex128)
        if self.nyquist_zero_axes:
            table[grid.nyquist_mask(self.nyquist_zero_axes)] = 0
        return table

    def __mul__(self, other: "MultiplierFn") -> "MultiplierFn":
        if not isinstance(other, MultiplierFn):
            return NotImplemented
        first, second = self.evaluate, other.evaluate
        return MultiplierFn(
            evaluate=lambda *w: first(*w) * second(*w),
            name=f"{self.name}*{other.name}",
            nyquist_zero_axes=tuple(sorted(set(self.nyquist_zero_axes) | set(other.nyquist_zero_axes))),
        )


def constant_multiplier(value: complex, name: Optional[str] = None) -> MultiplierFn:
    return MultiplierFn(lambda *w: np.full(np.broadcast(*w).shape, value, dtype=np.complex128),
                        name=name or f"const({value})")


def radial_multiplier(profile: Callable[[np.ndarray], np.ndarray], name: str = "radial") -> MultiplierFn:
    """Isotropic multiplier omega -> profile(|omega|)."""
    def evaluate(*w):
        radius = np.sqrt(sum(np.asarray(c, dtype=np.float64) ** 2 for c in w))
        return profile(radius)
    return MultiplierFn(evaluate, name=name)


def derivative_multiplier(alpha: Sequence[int]) -> MultiplierFn:
    """
    Spectral partial derivative D^alpha, the multiplier (j*omega)^alpha.

    Nyquist bins are dropped on every axis differentiated an odd number of
    times, so real fields stay real.
    """
    alpha = tuple(int(a) for a in alpha)
    if not alpha or any(a < 0 for a in alpha):
        raise MultiIndexError(f"Derivative multi-index must be non-negative, got {alpha}")
    order = sum(alpha)
    phase = [1, 1j, -1, -1j][order % 4]

    def evaluate(*w):
        value = np.full(np.broadcast(*w).shape, phase, dtype=np.complex128)
        for component, power in zip(w, alpha):
            if power:
                value = value * np.asarray(component, dtype=np.float64) ** power
        return value

    odd_axes = tuple(axis for axis, power in enumerate(alpha) if power % 2)
    return MultiplierFn(evaluate, name=f"D{list(alpha)}", nyquist_zero_axes=odd_axes)


MultiplierLike = Union[MultiplierFn, np.ndarray]


def multiplier_table(m: MultiplierLike, grid: GridSpec) -> np.ndarray:
    if isinstance(m, MultiplierFn):
        return m.on_grid(grid)
    table = np.asarray(m)
    if table.shape != grid.shape:
        raise GridError(f"Multiplier table shape {table.shape} does not match grid {grid.shape}")
    return table


def apply_multiplier(spec: SpectrumField, m: MultiplierLike) -> SpectrumField:
    """
    Multiply every bin by m(freq_coord(bin)).

    Args:
        spec: Input spectrum
        m: MultiplierFn, or a precomputed table shaped like the grid

    Returns:
        Filtered spectrum

    Raises:
        NumericError: if m is not finite at some bin (the first one is reported)
    """
    table = multiplier_table(m, spec.grid)
    bad = ~np.isfinite(table)
    if bad.any():
        index = tuple(int(k) for k in np.argwhere(bad)[0])
        omega = freq_coord(spec.grid, index)
        name = getattr(m, "name", "multiplier table")
        raise NumericError(f"{name} is not finite at bin {index} (omega={omega.tolist()})")
    return SpectrumField(spec.grid, table * spec.values)


def filter_field(field: ScalarField, m: MultiplierLike, strict: bool = True) -> ScalarField:
    """Apply a multiplier to a spatial field: inverse(m * forward(f))."""
    return inverse(apply_multiplier(forward(field), m), strict=strict)

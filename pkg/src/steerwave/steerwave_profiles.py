"""
Steerwave Profiles - Radial frequency profiles of isotropic bandpass wavelets.

Two mother profiles are provided, both supported inside (0, pi]:

- the original Simoncelli profile cos(pi/2 * log2(2w/pi)) on (pi/4, pi]
- the Meyer-windowed profile theta_eps(z) * cos(pi/2 * z) at
  z = log2(2^(1+eps) * w / pi), supported on (pi * 2^(-2-2eps), pi]

Dyadic dilations of either profile square-sum to one. A frame with J scales
completes the partition with a lowpass and a highpass complement.
"""

import csv
import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .steerwave_errors import ConfigError
from .steerwave_grid import GridSpec, ScalarField, SpectrumField
from .steerwave_spectral import inverse
from .steerwave_window import MeyerWindow, WindowSpec

logger = logging.getLogger(__name__)

# Complement residues below this are round-off of an exact partition.
RESIDUE_SNAP = 1e-14

ArrayLike = Union[float, np.ndarray]


class ProfileKind(Enum):
    SIMONCELLI_ORIGINAL = "original"
    SIMONCELLI_MODIFIED = "modified"
    LOWPASS = "lowpass"
    HIGHPASS = "highpass"


def _vectorized(fn: Callable[[np.ndarray], np.ndarray]) -> Callable[[ArrayLike], ArrayLike]:
    def wrapper(omega: ArrayLike) -> ArrayLike:
        scalar = np.ndim(omega) == 0
        values = fn(np.atleast_1d(np.asarray(omega, dtype=np.float64)))
        return float(values[0]) if scalar else values
    return wrapper


def _original(omega: np.ndarray) -> np.ndarray:
    out = np.zeros_like(omega)
    inside = (omega > math.pi / 4) & (omega <= math.pi)
    out[inside] = np.cos((math.pi / 2) * np.log2(2.0 * omega[inside] / math.pi))
    return out


def simoncelli_original(omega: ArrayLike) -> ArrayLike:
    """
    Original Simoncelli radial profile.

    Examples:
        simoncelli_original(pi/2) -> 1.0
        simoncelli_original(pi)   -> 0.0 (to round-off)
        simoncelli_original(pi/8) -> 0.0
    """
    return _vectorized(_original)(omega)


def modified_support(window: WindowSpec) -> Tuple[float, float]:
    return math.pi * 2.0 ** (-2.0 - 2.0 * window.transition), math.pi


def simoncelli_modified(omega: ArrayLike, window: Optional[WindowSpec] = None) -> ArrayLike:
    """
    Meyer-windowed Simoncelli profile, rescaled so its support ends at pi.

    Args:
        omega: Radial frequency (scalar or array), omega >= 0
        window: Window spec (default n=3, eps=1/8)

    Returns:
        theta_eps(z) * cos(pi*z/2) with z = log2(2^(1+eps) * omega / pi)
    """
    window = window or WindowSpec()
    theta = MeyerWindow(window)
    lo, hi = modified_support(window)

    def evaluate(w: np.ndarray) -> np.ndarray:
        out = np.zeros_like(w)
        inside = (w > lo) & (w <= hi)
        z = (1.0 + window.transition) + np.log2(w[inside] / math.pi)
        out[inside] = theta(z) * np.cos((math.pi / 2) * z)
        return out

    return _vectorized(evaluate)(omega)


@dataclass(frozen=True)
class RadialProfile:
    """A radial frequency profile w -> value in [0, 1], zero outside (r_lo, r_hi]."""
    kind: ProfileKind
    support: Tuple[float, float]
    evaluator: Callable[[ArrayLike], ArrayLike] = field(repr=False, compare=False)
    window: Optional[WindowSpec] = None
    scale: int = 0

    def __call__(self, omega: ArrayLike) -> ArrayLike:
        return self.evaluator(omega)

    @property
    def name(self) -> str:
        if self.kind is ProfileKind.SIMONCELLI_MODIFIED:
            return f"modified:{self.window.label}"
        return self.kind.value

    def dilated(self, k: int) -> "RadialProfile":
        """The profile at scale k, omega -> profile(2^k * omega)."""
        factor = 2.0 ** k
        base = self.evaluator
        lo, hi = self.support
        return RadialProfile(
            kind=self.kind,
            support=(lo / factor, hi / factor),
            evaluator=lambda omega: base(factor * np.asarray(omega, dtype=np.float64)),
            window=self.window,
            scale=self.scale + k,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "support": list(self.support),
            "window": self.window.to_dict() if self.window else None,
            "scale": self.scale,
        }


def make_profile(kind: Union[ProfileKind, str], window: Optional[WindowSpec] = None) -> RadialProfile:
    """
    Build a mother wavelet profile.

    Args:
        kind: "original" or "modified" (or the matching ProfileKind)
        window: Window spec for the modified profile (default n=3, eps=1/8)

    Returns:
        RadialProfile at scale 0
    """
    try:
        kind = ProfileKind(kind)
    except ValueError:
        raise ConfigError(f"Unknown profile kind: {kind!r}") from None
    if kind is ProfileKind.SIMONCELLI_ORIGINAL:
        return RadialProfile(kind, (math.pi / 4, math.pi), simoncelli_original)
    if kind is ProfileKind.SIMONCELLI_MODIFIED:
        window = window or WindowSpec()
        return RadialProfile(kind, modified_support(window),
                             lambda omega: simoncelli_modified(omega, window), window=window)
    raise ConfigError(f"{kind.value} is a channel complement, not a mother profile")


def truncated_scale_sum(profile: RadialProfile, omega: ArrayLike, k_lo: int, k_hi: int) -> ArrayLike:
    """
    Sum of profile(2^k * omega)^2 over k_lo <= k <= k_hi.

    Examples:
        original profile, omega=pi/2, k in [-1, 1] -> 1.0
    """
    if k_lo > k_hi:
        raise ConfigError(f"Empty scale range [{k_lo}, {k_hi}]")
    scalar = np.ndim(omega) == 0
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    total = np.zeros_like(omega)
    for k in range(k_lo, k_hi + 1):
        total += np.asarray(profile(2.0 ** k * omega)) ** 2
    return float(total[0]) if scalar else total


def covering_scales(profile: RadialProfile, omega: ArrayLike) -> Tuple[int, int]:
    """Smallest k range such that every nonzero profile(2^k * omega) is included."""
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    positive = omega[omega > 0]
    if positive.size == 0:
        return 0, 0
    lo, hi = profile.support
    k_lo = int(math.floor(np.min(np.log2(lo / positive)))) - 1
    k_hi = int(math.ceil(np.max(np.log2(hi / positive)))) + 1
    return k_lo, k_hi


def full_scale_sum(profile: RadialProfile, omega: ArrayLike) -> ArrayLike:
    """truncated_scale_sum over every scale that can contribute at omega."""
    k_lo, k_hi = covering_scales(profile, omega)
    return truncated_scale_sum(profile, omega, k_lo, k_hi)


def _snap_residue(residue: np.ndarray, what: str) -> np.ndarray:
    worst = float(np.min(residue)) if residue.size else 0.0
    if worst < -1e-12:
        logger.warning("%s complement clipped a negative residue of %.3e", what, worst)
    residue = np.where(residue < RESIDUE_SNAP, 0.0, residue)
    return np.minimum(residue, 1.0)


@dataclass(frozen=True)
class ChannelProfiles:
    """
    Radial profiles of a J-scale frame: lowpass, bands psi_0..psi_{J-1} and highpass.

    The highpass takes the missing partition mass above twice the lower support
    edge of the mother profile (finer-than-psi_0 octaves and the grid corners
    beyond pi); the lowpass takes whatever remains below it.
    """
    mother: RadialProfile
    bands: Tuple[RadialProfile, ...]

    @property
    def scales(self) -> int:
        return len(self.bands)

    @property
    def highpass_edge(self) -> float:
        return 2.0 * self.mother.support[0]

    def evaluate(self, omega: ArrayLike) -> Tuple[np.ndarray, List[np.ndarray], np.ndarray]:
        """Return (lowpass, [band_k], highpass) values at the given radii."""
        omega = np.asarray(omega, dtype=np.float64)
        bands = [np.asarray(band(omega), dtype=np.float64) for band in self.bands]
        covered = np.zeros(omega.shape)
        for values in bands:
            covered = covered + values ** 2
        high_sq = np.where(omega > self.highpass_edge, _snap_residue(1.0 - covered, "highpass"), 0.0)
        low_sq = _snap_residue(1.0 - covered - high_sq, "lowpass")
        return np.sqrt(low_sq), bands, np.sqrt(high_sq)

    def lowpass(self, omega: ArrayLike) -> np.ndarray:
        return self.evaluate(omega)[0]

    def highpass(self, omega: ArrayLike) -> np.ndarray:
        return self.evaluate(omega)[2]

    def as_profiles(self) -> List[RadialProfile]:
        """[L, psi_0, ..., psi_{J-1}, H] as RadialProfile objects."""
        low = RadialProfile(ProfileKind.LOWPASS, (0.0, self.bands[-1].support[1]), self.lowpass)
        high = RadialProfile(ProfileKind.HIGHPASS, (self.highpass_edge, math.inf), self.highpass)
        return [low, *self.bands, high]


def build_channel_profiles(profile: RadialProfile, J: int) -> ChannelProfiles:
    """
    Complete J dyadic copies of a mother profile into a partition of unity.

    Args:
        profile: Mother profile at scale 0
        J: Number of bandpass scales, J >= 1

    Returns:
        ChannelProfiles with L^2 + sum_k psi_k^2 + H^2 == 1 at every radius
    """
    if isinstance(J, bool) or not isinstance(J, (int, np.integer)) or J < 1:
        raise ConfigError(f"Number of scales must be a positive integer, got {J!r}")
    bands = tuple(profile.dilated(k) for k in range(int(J)))
    logger.debug("Built %d bands of %s, coarsest support %s", J, profile.name, bands[-1].support)
    return ChannelProfiles(mother=profile, bands=bands)


def sample_radial(evaluator: Callable[[ArrayLike], ArrayLike], grid: GridSpec) -> SpectrumField:
    """
    Lay a radial profile onto a grid: bin value = evaluator(|freq_coord(bin)|).

    Examples:
        constant evaluator 1 -> every bin 1
        original profile on N=256, d=2 -> the bin at (pi/2, 0) is 1
    """
    radius = grid.frequency_radius
    values = np.broadcast_to(np.asarray(evaluator(radius), dtype=np.float64), grid.shape)
    return SpectrumField(grid, values.astype(np.complex128))


def spatial_wavelet(profile: RadialProfile, grid: GridSpec) -> ScalarField:
    """Spatial samples of the wavelet whose spectrum is the radial profile on the grid."""
    return inverse(sample_radial(profile, grid))


def write_profile_csv(
    profiles: Union[RadialProfile, List[RadialProfile]],
    path: Union[str, Path],
    num_points: int = 1024,
    omega_max: float = math.pi,
) -> Path:
    """
    Tabulate one or more profiles on [0, omega_max] for plotting.

    The first column is ``omega``; a single profile writes a ``value`` column,
    several profiles write one column per profile name.
    """
    if isinstance(profiles, RadialProfile):
        columns = {"value": profiles}
    else:
        columns = {p.name if p.scale == 0 else f"{p.name}_scale{p.scale}": p for p in profiles}
    omega = np.linspace(0.0, omega_max, num_points)
    table = {name: np.asarray(p(omega), dtype=np.float64) for name, p in columns.items()}

    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=["omega", *columns])
        writer.writeheader()
        for i, w in enumerate(omega):
            row = {"omega": repr(float(w))}
            row.update({name: repr(float(values[i])) for name, values in table.items()})
            writer.writerow(row)
    logger.debug("Wrote %d profile samples to %s", num_points, path)
    return path


if __name__ == '__main__':
    for mother in (make_profile("original"), make_profile("modified", WindowSpec(3, 0.125))):
        lo, hi = mother.support
        omegas = np.linspace(lo, hi, 513)[1:]
        deviation = np.max(np.abs(full_scale_sum(mother, omegas) - 1.0))
        print(f"{mother.name:>14}: support ({lo:.6f}, {hi:.6f}]  dyadic partition deviation {deviation:.2e}")

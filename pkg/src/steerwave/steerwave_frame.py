"""
Steerwave Frame - Undecimated steerable tight frame built from radial bands and Riesz transforms.

Analysis produces a lowpass channel, a highpass channel and, for each scale k
and each multi-index alpha of the chosen Riesz order, the channel
inverse(m_alpha * psi_k * f_hat). Synthesis is the adjoint, which inverts
analysis exactly because the channel filters square-sum to one at every bin.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from .steerwave_errors import ConfigError, FieldHeaderError, FieldIOError, GridError
from .steerwave_fieldio import read_field, write_field
from .steerwave_grid import Domain, GridSpec, ScalarField, SpectrumField, require_same_grid
from .steerwave_profiles import ChannelProfiles, ProfileKind, RadialProfile, build_channel_profiles, make_profile
from .steerwave_riesz import MAX_ORDER, MultiIndex, higher_order_multiplier, multi_indices
from .steerwave_spectral import forward, inverse
from .steerwave_window import WindowSpec

logger = logging.getLogger(__name__)

ChannelKey = Tuple[int, MultiIndex]


@dataclass(frozen=True)
class FrameSpec:
    """
    Configuration of a steerable frame.

    Attributes:
        grid: Sampling grid the frame acts on
        scales: Number J of bandpass scales
        riesz_order: Order n of the Riesz transforms (0 gives an isotropic frame)
        profile: Mother profile kind, "original" or "modified"
        window: Meyer window of the modified profile
    """
    grid: GridSpec
    scales: int = 3
    riesz_order: int = 1
    profile: ProfileKind = ProfileKind.SIMONCELLI_MODIFIED
    window: Optional[WindowSpec] = None

    def __post_init__(self):
        if isinstance(self.scales, bool) or not isinstance(self.scales, (int, np.integer)) or self.scales < 1:
            raise ConfigError(f"Frame needs at least one scale, got {self.scales!r}")
        if (isinstance(self.riesz_order, bool) or not isinstance(self.riesz_order, (int, np.integer))
                or not 0 <= self.riesz_order <= MAX_ORDER):
            raise ConfigError(f"Riesz order must be an integer in [0, {MAX_ORDER}], got {self.riesz_order!r}")
        try:
            kind = ProfileKind(self.profile) if isinstance(self.profile, str) else self.profile
        except ValueError:
            raise ConfigError(f"Unknown profile kind: {self.profile!r}") from None
        if kind not in (ProfileKind.SIMONCELLI_ORIGINAL, ProfileKind.SIMONCELLI_MODIFIED):
            raise ConfigError(f"Frame profile must be original or modified, got {kind.value}")
        object.__setattr__(self, "profile", kind)
        object.__setattr__(self, "scales", int(self.scales))
        object.__setattr__(self, "riesz_order", int(self.riesz_order))
        if kind is ProfileKind.SIMONCELLI_MODIFIED and self.window is None:
            object.__setattr__(self, "window", WindowSpec())
        if kind is ProfileKind.SIMONCELLI_ORIGINAL:
            object.__setattr__(self, "window", None)

        coarsest = self.mother().support[0] * 2.0 ** -(self.scales - 1)
        if coarsest < self.grid.frequency_step:
            raise ConfigError(
                f"{self.scales} scales put the coarsest band edge at {coarsest:.4g}, "
                f"below the first frequency bin {self.grid.frequency_step:.4g}"
            )

    def mother(self) -> RadialProfile:
        return make_profile(self.profile, self.window)

    def channel_profiles(self) -> ChannelProfiles:
        return build_channel_profiles(self.mother(), self.scales)

    def multi_indices(self) -> List[MultiIndex]:
        return multi_indices(self.riesz_order, self.grid.dim)

    def channel_keys(self) -> List[ChannelKey]:
        return [(k, alpha) for k in range(self.scales) for alpha in self.multi_indices()]

    @property
    def num_channels(self) -> int:
        return 2 + len(self.channel_keys())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "grid": self.grid.to_dict(),
            "scales": self.scales,
            "riesz_order": self.riesz_order,
            "profile": self.profile.value,
            "window": self.window.to_dict() if self.window else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FrameSpec":
        window = data.get("window")
        return cls(
            grid=GridSpec.from_dict(data["grid"]),
            scales=data["scales"],
            riesz_order=data["riesz_order"],
            profile=data["profile"],
            window=WindowSpec(window["smoothness"], window["transition"]) if window else None,
        )


@dataclass
class FrameChannels:
    """Output of analyze: lowpass, highpass and one field per (scale, alpha)."""
    spec: FrameSpec
    lowpass: ScalarField
    highpass: ScalarField
    bands: Dict[ChannelKey, ScalarField] = field(default_factory=dict)

    def __len__(self) -> int:
        return 2 + len(self.bands)

    def __iter__(self) -> Iterator[Tuple[str, ScalarField]]:
        yield "lowpass", self.lowpass
        for (k, alpha), channel in self.bands.items():
            yield channel_name(k, alpha), channel
        yield "highpass", self.highpass

    def energy(self) -> float:
        """Total energy over every channel."""
        return sum(channel.energy() for _, channel in self)

    def energies(self) -> Dict[str, float]:
        return {name: channel.energy() for name, channel in self}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "channels": len(self),
            "energies": self.energies(),
        }


def channel_name(k: int, alpha: MultiIndex) -> str:
    """Channel stem ``scale<k>_alpha<a1-...-ad>``."""
    return f"scale{k}_alpha{'-'.join(str(a) for a in alpha)}"


def _filter_tables(spec: FrameSpec):
    """Radial tables (L, [psi_k], H) and Riesz tables {alpha: m_alpha} on the spec grid."""
    low, bands, high = spec.channel_profiles().evaluate(spec.grid.frequency_radius)
    riesz = {alpha: higher_order_multiplier(alpha).on_grid(spec.grid) for alpha in spec.multi_indices()}
    return low, bands, high, riesz


def channel_filter(spec: FrameSpec, k: int, alpha: MultiIndex) -> SpectrumField:
    """Frequency response m_alpha * psi_k of one bandpass channel."""
    if (k, tuple(alpha)) not in spec.channel_keys():
        raise ConfigError(f"Frame has no channel ({k}, {alpha})")
    band = spec.channel_profiles().bands[k](spec.grid.frequency_radius)
    return SpectrumField(spec.grid, higher_order_multiplier(alpha).on_grid(spec.grid) * band)


def analyze(f: ScalarField, spec: FrameSpec) -> FrameChannels:
    """
    Decompose a field into frame channels.

    Args:
        f: Real spatial field on spec.grid
        spec: Frame configuration

    Returns:
        FrameChannels; their energies sum to the energy of f
    """
    if f.grid != spec.grid:
        raise GridError(f"Field grid {f.grid} does not match frame grid {spec.grid}")
    low, bands, high, riesz = _filter_tables(spec)
    spectrum = forward(f).values

    channels = FrameChannels(
        spec=spec,
        lowpass=inverse(SpectrumField(spec.grid, low * spectrum)),
        highpass=inverse(SpectrumField(spec.grid, high * spectrum)),
    )
    for k, band in enumerate(bands):
        banded = band * spectrum
        for alpha, m in riesz.items():
            channels.bands[(k, alpha)] = inverse(SpectrumField(spec.grid, m * banded))
    logger.debug("Analyzed %s into %d channels", spec.grid, len(channels))
    return channels


def synthesize(channels: FrameChannels) -> ScalarField:
    """
    Adjoint of analyze, which is also its inverse.

    Channels are accumulated lowpass, bands by scale then alpha, highpass, so the
    result is bit-reproducible.
    """
    spec = channels.spec
    require_same_grid(channels.lowpass, channels.highpass, *channels.bands.values())
    if channels.lowpass.grid != spec.grid:
        raise GridError(f"Channels live on {channels.lowpass.grid}, frame expects {spec.grid}")
    expected = spec.channel_keys()
    if set(channels.bands) != set(expected):
        missing = sorted(set(expected) - set(channels.bands))
        extra = sorted(set(channels.bands) - set(expected))
        raise ConfigError(f"Channel set does not match the frame (missing {missing}, unexpected {extra})")

    low, bands, high, riesz = _filter_tables(spec)
    total = low * forward(channels.lowpass).values
    for k, alpha in expected:
        total = total + np.conj(riesz[alpha]) * bands[k] * forward(channels.bands[(k, alpha)]).values
    total = total + high * forward(channels.highpass).values
    return inverse(SpectrumField(spec.grid, total))


def tightness_map(spec: FrameSpec) -> ScalarField:
    """
    Per-bin deviation L^2 + H^2 + sum_k psi_k^2 - 1.

    The Riesz factors are left out since their squares sum to one over alpha.
    """
    low, bands, high = spec.channel_profiles().evaluate(spec.grid.frequency_radius)
    total = low ** 2 + high ** 2
    for band in bands:
        total = total + band ** 2
    return ScalarField(spec.grid, total - 1.0, Domain.FREQUENCY)


def write_channels(channels: FrameChannels, directory: Union[str, Path], tag: str = "frame") -> List[Path]:
    """
    Store every channel as a field file plus a ``<tag>_frame.json`` manifest.

    Channel files are named ``<tag>_lowpass``, ``<tag>_highpass`` and
    ``<tag>_scale<k>_alpha<a1-...-ad>``.
    """
    directory = Path(directory)
    manifest = {"version": 1, "tag": tag, "spec": channels.spec.to_dict(), "channels": []}
    written = []
    for name, channel in channels:
        base = directory / f"{tag}_{name}"
        write_field(channel, base)
        manifest["channels"].append(name)
        written.append(base)
    manifest_path = directory / f"{tag}_frame.json"
    try:
        manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise FieldIOError(f"Cannot write frame manifest {manifest_path}: {exc}") from exc
    return written


def read_channels(directory: Union[str, Path], tag: str = "frame") -> FrameChannels:
    """Load channels written by write_channels."""
    manifest_path = Path(directory) / f"{tag}_frame.json"
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        spec = FrameSpec.from_dict(manifest["spec"])
    except OSError as exc:
        raise FieldIOError(f"Cannot read frame manifest {manifest_path}: {exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise FieldHeaderError(f"Malformed frame manifest {manifest_path}: {exc}") from exc

    def load(name: str) -> ScalarField:
        return read_field(Path(directory) / f"{tag}_{name}", expect=ScalarField)

    channels = FrameChannels(spec=spec, lowpass=load("lowpass"), highpass=load("highpass"))
    for k, alpha in spec.channel_keys():
        channels.bands[(k, alpha)] = load(channel_name(k, alpha))
    return channels

"""
Steerwave: Bandlimited Steerable Wavelet Frames

Isotropic Simoncelli-type wavelets (original and Meyer-windowed), first- and
higher-order Riesz transforms as Fourier multipliers, an undecimated steerable
tight frame, and numerical diagnostics for decay and vanishing moments.
"""

__version__ = "0.1.0"

from .steerwave_errors import (
    SteerwaveError,
    GridError,
    IndexRangeError,
    AxisError,
    NumericError,
    MultiIndexError,
    ConfigError,
    InsufficientDataError,
    FieldIOError,
    FieldHeaderError,
    FieldShapeError,
    FieldDtypeError,
    FieldTruncatedError,
)
from .steerwave_grid import Domain, GridSpec, ScalarField, SpectrumField, ShellTable, freq_coord, shell_max
from .steerwave_fieldio import read_field, write_field
from .steerwave_spectral import MultiplierFn, apply_multiplier, derivative_multiplier, filter_field, forward, inverse
from .steerwave_window import MeyerWindow, WindowSpec, eval_G, eval_H, eval_theta
from .steerwave_profiles import (
    ProfileKind,
    RadialProfile,
    build_channel_profiles,
    make_profile,
    sample_radial,
    simoncelli_modified,
    simoncelli_original,
    spatial_wavelet,
    truncated_scale_sum,
)
from .steerwave_riesz import (
    higher_order_multiplier,
    multi_indices,
    riesz_component,
    riesz_higher,
    riesz_invert,
    riesz_multiplier,
    riesz_vector,
)
from .steerwave_frame import FrameChannels, FrameSpec, analyze, synthesize, tightness_map
from .steerwave_diagnostics import (
    decay_comparison,
    decay_fit,
    hermite_wavelet,
    moments,
    poisson_oracle,
    print_decay_table,
    print_moment_table,
    random_field,
    spectrum_flatness_near_zero,
)

__all__ = [
    "SteerwaveError",
    "GridError",
    "IndexRangeError",
    "AxisError",
    "NumericError",
    "MultiIndexError",
    "ConfigError",
    "InsufficientDataError",
    "FieldIOError",
    "FieldHeaderError",
    "FieldShapeError",
    "FieldDtypeError",
    "FieldTruncatedError",
    "Domain",
    "GridSpec",
    "ScalarField",
    "SpectrumField",
    "ShellTable",
    "freq_coord",
    "shell_max",
    "read_field",
    "write_field",
    "MultiplierFn",
    "apply_multiplier",
    "derivative_multiplier",
    "filter_field",
    "forward",
    "inverse",
    "MeyerWindow",
    "WindowSpec",
    "eval_G",
    "eval_H",
    "eval_theta",
    "ProfileKind",
    "RadialProfile",
    "build_channel_profiles",
    "make_profile",
    "sample_radial",
    "simoncelli_modified",
    "simoncelli_original",
    "spatial_wavelet",
    "truncated_scale_sum",
    "higher_order_multiplier",
    "multi_indices",
    "riesz_component",
    "riesz_higher",
    "riesz_invert",
    "riesz_multiplier",
    "riesz_vector",
    "FrameChannels",
    "FrameSpec",
    "analyze",
    "synthesize",
    "tightness_map",
    "decay_comparison",
    "decay_fit",
    "hermite_wavelet",
    "moments",
    "poisson_oracle",
    "print_decay_table",
    "print_moment_table",
    "random_field",
    "spectrum_flatness_near_zero",
]

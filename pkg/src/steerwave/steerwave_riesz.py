"""
Steerwave Riesz - First- and higher-order Riesz transforms as Fourier multipliers.

Component i has the symbol -j * w_i / |w|. The order-n transform indexed by a
multi-index alpha (|alpha| = n) has the fused symbol

    sqrt(n! / alpha!) * (-j)^n * w^alpha / |w|^n

so that the squared symbols over all alpha of one order sum to one. Every symbol
is zero at DC and on Nyquist bins of the axes it acts on.
"""

import math
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from .steerwave_errors import AxisError, GridError, MultiIndexError
from .steerwave_grid import ScalarField, SpectrumField, require_same_grid
from .steerwave_spectral import MultiplierFn, apply_multiplier, filter_field, forward, inverse

logger = logging.getLogger(__name__)

MAX_ORDER = 20

# (-j)^n
_PHASES = (1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j)

MultiIndex = Tuple[int, ...]


def parse_multi_index(alpha: Union[str, Sequence[int]], dim: int = None) -> MultiIndex:
    """
    Validate a multi-index given as a sequence or as text like "1,0".

    Args:
        alpha: Components alpha_1..alpha_d
        dim: Required number of components, if known

    Returns:
        Tuple of non-negative ints
    """
    if isinstance(alpha, str):
        try:
            alpha = [int(part) for part in alpha.split(",")]
        except ValueError:
            raise MultiIndexError(f"Malformed multi-index: {alpha!r}") from None
    try:
        components = tuple(alpha)
    except TypeError:
        raise MultiIndexError(f"Malformed multi-index: {alpha!r}") from None
    if not components:
        raise MultiIndexError("Multi-index must have at least one component")
    for a in components:
        if isinstance(a, bool) or not isinstance(a, (int, np.integer)) or a < 0:
            raise MultiIndexError(f"Multi-index components must be non-negative integers, got {alpha!r}")
    if dim is not None and len(components) != dim:
        raise MultiIndexError(f"Expected {dim} components, got {len(components)} in {components}")
    components = tuple(int(a) for a in components)
    if sum(components) > MAX_ORDER:
        raise MultiIndexError(f"Order {sum(components)} exceeds the supported maximum {MAX_ORDER}")
    return components


def multinomial_weight(alpha: Sequence[int]) -> int:
    """Exact |alpha|! / alpha!."""
    weight = math.factorial(sum(alpha))
    for a in alpha:
        weight //= math.factorial(a)
    return weight


def riesz_normalization(alpha: Sequence[int]) -> float:
    """sqrt(|alpha|! / alpha!), evaluated from ln-factorials."""
    order = sum(alpha)
    log_weight = gammaln(order + 1) - sum(gammaln(a + 1) for a in alpha)
    return float(np.exp(0.5 * log_weight))


def multi_indices(order: int, dim: int) -> List[MultiIndex]:
    """
    All multi-indices of a given order in colexicographic order.

    Examples:
        multi_indices(2, 2) -> [(2, 0), (1, 1), (0, 2)]
    """
    if order < 0:
        raise MultiIndexError(f"Order must be non-negative, got {order}")

    def compositions(remaining: int, slots: int):
        if slots == 1:
            yield (remaining,)
            return
        for head in range(remaining + 1):
            for tail in compositions(remaining - head, slots - 1):
                yield (head,) + tail

    return sorted(compositions(order, dim), key=lambda a: tuple(reversed(a)))


def _symbol(alpha: MultiIndex):
    order = sum(alpha)
    coefficient = _PHASES[order % 4] * riesz_normalization(alpha)

    def evaluate(*omega):
        omega = [np.asarray(w, dtype=np.float64) for w in omega]
        radius = np.sqrt(sum(w ** 2 for w in omega))
        value = np.full(radius.shape, coefficient, dtype=np.complex128)
        if order == 0:
            return value
        safe = np.where(radius > 0, radius, 1.0)
        for w, power in zip(omega, alpha):
            if power:
                value = value * (w / safe) ** power
        return np.where(radius > 0, value, 0.0)

    return evaluate


def higher_order_multiplier(alpha: Sequence[int]) -> MultiplierFn:
    """
    Fused multiplier of R^alpha. The zero multi-index gives the identity.
    """
    alpha = parse_multi_index(alpha)
    active = tuple(axis for axis, a in enumerate(alpha) if a)
    return MultiplierFn(_symbol(alpha), name=f"R{list(alpha)}", nyquist_zero_axes=active)


def _unit(axis: int, dim: int) -> MultiIndex:
    if isinstance(axis, bool) or not isinstance(axis, (int, np.integer)) or not 1 <= axis <= dim:
        raise AxisError(f"Riesz axis must be in 1..{dim}, got {axis!r}")
    return tuple(1 if k == axis - 1 else 0 for k in range(dim))


def riesz_multiplier(i: int, omega: Sequence[float]) -> complex:
    """
    Value of -j * w_i / |w| at one frequency vector (0 at DC).

    Examples:
        riesz_multiplier(1, (1, 0)) -> -1j
        riesz_multiplier(2, (3, 4)) -> -0.8j
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    return higher_order_multiplier(_unit(i, len(omega)))(omega)


def component_multiplier(i: int, dim: int) -> MultiplierFn:
    """Grid multiplier of the first-order component R_i."""
    return higher_order_multiplier(_unit(i, dim))


def riesz_component(f: ScalarField, i: int) -> ScalarField:
    """
    First-order Riesz component R_i f.

    Args:
        f: Real spatial field
        i: Axis, 1 <= i <= d

    Returns:
        Real field R_i f
    """
    return filter_field(f, component_multiplier(i, f.grid.dim))


def riesz_higher(f: ScalarField, alpha: Sequence[int]) -> ScalarField:
    """
    Higher-order Riesz transform R^alpha f in a single multiplier pass.

    Raises:
        MultiIndexError: if alpha is malformed, has the wrong length or |alpha| == 0
    """
    alpha = parse_multi_index(alpha, f.grid.dim)
    if sum(alpha) == 0:
        raise MultiIndexError("Higher-order Riesz transform needs |alpha| >= 1")
    return filter_field(f, higher_order_multiplier(alpha))


def riesz_vector(f: ScalarField) -> List[ScalarField]:
    """All first-order components [R_1 f, ..., R_d f]."""
    return [riesz_component(f, i) for i in range(1, f.grid.dim + 1)]


def riesz_channels(f: ScalarField, order: int) -> List[Tuple[MultiIndex, ScalarField]]:
    """(alpha, R^alpha f) for every alpha of one order, in colexicographic order."""
    if order < 1:
        raise MultiIndexError(f"Riesz order must be at least 1, got {order}")
    spectrum = forward(f)
    channels = []
    for alpha in multi_indices(order, f.grid.dim):
        channels.append((alpha, inverse(apply_multiplier(spectrum, higher_order_multiplier(alpha)))))
    return channels


def riesz_invert(components: Sequence[ScalarField]) -> ScalarField:
    """
    Recover f from its first-order components as -sum_i R_i(component_i).

    DC and Nyquist-touched bins cannot be recovered and come back as zero.
    """
    components = list(components)
    if not components:
        raise GridError("riesz_invert needs one component per axis")
    grid = require_same_grid(*components)
    if len(components) != grid.dim:
        raise AxisError(f"Expected {grid.dim} components, got {len(components)}")
    total = np.zeros(grid.shape, dtype=np.complex128)
    for i, component in enumerate(components, start=1):
        total -= apply_multiplier(forward(component), component_multiplier(i, grid.dim)).values
    return inverse(SpectrumField(grid, total))

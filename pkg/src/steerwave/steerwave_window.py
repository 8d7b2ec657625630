"""
Steerwave Meyer Window - Smooth cutoff windows with a squared partition of unity.

A window theta_eps equals 1 on |x| <= 1-eps, vanishes on |x| >= 1+eps and
satisfies theta(x)^2 + theta(x-2)^2 = 1 on [0, 2]. It is built from a smooth
step G rising from 0 at x=-1 to pi/2 at x=1:

    H(w)     = G((w+1)/eps) - pi/2 + G((w-1)/eps)
    theta(w) = cos(H(w))

Finite smoothness n in {3, 4, 5} uses the closed-form integrals of the bump
(1-t^2)^n; the infinitely smooth window uses lambda(t) = exp(-1/t^2).
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate, special

from .steerwave_errors import ConfigError

logger = logging.getLogger(__name__)

INF = math.inf
SUPPORTED_SMOOTHNESS = (3, 4, 5, INF)
DEFAULT_TRANSITION = 0.125

# G_n(x) = pi * prefactor * sum(coeffs[k] * x^k) on [-1, 1]
_STEP_POLYNOMIALS = {
    3: (Fraction(35, 64),
        [Fraction(16, 35), 1, 0, -1, 0, Fraction(3, 5), 0, Fraction(-1, 7)]),
    4: (Fraction(315, 512),
        [Fraction(128, 315), 1, 0, Fraction(-4, 3), 0, Fraction(6, 5), 0, Fraction(-4, 7), 0, Fraction(1, 9)]),
    5: (Fraction(693, 1024),
        [Fraction(256, 693), 1, 0, Fraction(-5, 3), 0, 2, 0, Fraction(-10, 7), 0, Fraction(5, 9), 0,
         Fraction(-1, 11)]),
}

ArrayLike = Union[float, np.ndarray]


def step_polynomial_coefficients(n: int):
    """Exact (prefactor, coefficients) of the degree 2n+1 step polynomial, without the factor pi."""
    if n not in _STEP_POLYNOMIALS:
        raise ConfigError(f"No closed-form step polynomial for smoothness {n}")
    prefactor, coeffs = _STEP_POLYNOMIALS[n]
    return prefactor, [Fraction(c) for c in coeffs]


def _parse_smoothness(value: Any) -> Union[int, float]:
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinite", "infinity"):
            return INF
        try:
            value = int(text)
        except ValueError:
            raise ConfigError(f"Invalid window smoothness: {value!r}") from None
    if isinstance(value, bool):
        raise ConfigError(f"Invalid window smoothness: {value!r}")
    if isinstance(value, float) and math.isinf(value) and value > 0:
        return INF
    if isinstance(value, (int, np.integer)) and int(value) in (3, 4, 5):
        return int(value)
    raise ConfigError(f"Window smoothness must be one of 3, 4, 5 or inf, got {value!r}")


@dataclass(frozen=True)
class WindowSpec:
    """Smoothness n (3, 4, 5 or inf) and transition half-width eps of a Meyer window."""
    smoothness: Union[int, float] = 3
    transition: float = DEFAULT_TRANSITION

    def __post_init__(self):
        object.__setattr__(self, "smoothness", _parse_smoothness(self.smoothness))
        try:
            transition = float(self.transition)
        except (TypeError, ValueError):
            raise ConfigError(f"Window transition must be a number, got {self.transition!r}") from None
        if not 0.0 < transition < 1.0:
            raise ConfigError(f"Window transition must lie strictly in (0, 1), got {transition}")
        object.__setattr__(self, "transition", transition)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.smoothness)

    @property
    def label(self) -> str:
        return "inf" if self.is_infinite else f"n{self.smoothness}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "smoothness": "inf" if self.is_infinite else self.smoothness,
            "transition": self.transition,
        }


def _lambda(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    positive = t > 0
    out[positive] = np.exp(-1.0 / t[positive] ** 2)
    return out


def _as_output(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values[0]) if scalar else values


class MeyerWindow:
    """
    Evaluators for G, H_eps and theta_eps of one WindowSpec.

    All evaluators accept scalars or arrays and return the same kind.
    """

    def __init__(self, spec: WindowSpec = None):
        self.spec = spec or WindowSpec()
        if self.spec.is_infinite:
            self._poly = None
        else:
            prefactor, coeffs = step_polynomial_coefficients(self.spec.smoothness)
            self._poly = Polynomial([math.pi * float(prefactor * c) for c in coeffs])

    def G(self, x: ArrayLike) -> ArrayLike:
        """Smooth step: 0 for x <= -1, pi/2 for x >= 1."""
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if self._poly is not None:
            values = self._poly(np.clip(x, -1.0, 1.0))
            values[x <= -1.0] = 0.0
            values[x >= 1.0] = math.pi / 2
        else:
            rising, falling = _lambda(x + 1.0), _lambda(1.0 - x)
            values = (math.pi / 2) * rising / (rising + falling)
        return _as_output(values, scalar)

    def H(self, omega: ArrayLike) -> ArrayLike:
        scalar = np.ndim(omega) == 0
        omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
        eps = self.spec.transition
        values = self.G((omega + 1.0) / eps) - math.pi / 2 + self.G((omega - 1.0) / eps)
        return _as_output(values, scalar)

    def theta(self, omega: ArrayLike) -> ArrayLike:
        scalar = np.ndim(omega) == 0
        omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
        eps = self.spec.transition
        values = np.clip(np.cos(self.H(omega)), 0.0, 1.0)
        magnitude = np.abs(omega)
        values[magnitude <= 1.0 - eps] = 1.0
        values[magnitude >= 1.0 + eps] = 0.0
        return _as_output(values, scalar)

    __call__ = theta

    def __repr__(self):
        return f"MeyerWindow({self.spec})"


def eval_G(spec: WindowSpec, x: ArrayLike) -> ArrayLike:
    """
    Smooth step G for a window spec.

    Examples:
        eval_G(WindowSpec(3), -1.0) -> 0.0
        eval_G(WindowSpec(3), 0.0)  -> pi/4
        eval_G(WindowSpec(3), 1.0)  -> pi/2
    """
    return MeyerWindow(spec).G(x)


def eval_H(spec: WindowSpec, omega: ArrayLike) -> ArrayLike:
    """Phase H_eps(omega) = G((omega+1)/eps) - pi/2 + G((omega-1)/eps)."""
    return MeyerWindow(spec).H(omega)


def eval_theta(spec: WindowSpec, omega: ArrayLike) -> ArrayLike:
    """Window value cos(H_eps(omega)), clamped to 1 and 0 outside the transition bands."""
    return MeyerWindow(spec).theta(omega)


def bump_integral_G(n: int, x: float) -> float:
    """
    Quadrature of the bump C*(1-t^2)^n from -1 to x, with C chosen so the full
    integral is pi/2. Cross-checks the closed-form step polynomials.

    Args:
        n: Bump exponent (any positive integer)
        x: Upper integration limit

    Returns:
        G_n(x) to quadrature accuracy
    """
    if n < 1:
        raise ConfigError(f"Bump exponent must be positive, got {n}")
    if x <= -1.0:
        return 0.0
    if x >= 1.0:
        return math.pi / 2
    scale = (math.pi / 2) / special.beta(0.5, n + 1)
    value, abserr = integrate.quad(lambda t: (1.0 - t * t) ** n, -1.0, x, epsabs=1e-14, epsrel=1e-14)
    logger.debug("bump integral n=%d x=%g: %.17g (+/- %.1e)", n, x, value, abserr)
    return scale * value


if __name__ == '__main__':
    for smoothness in SUPPORTED_SMOOTHNESS:
        window = MeyerWindow(WindowSpec(smoothness, DEFAULT_TRANSITION))
        xs = np.linspace(0.0, 2.0, 2001)
        deviation = np.max(np.abs(window(xs) ** 2 + window(xs - 2.0) ** 2 - 1.0))
        print(f"{window.spec.label:>4}: theta(1) = {window(1.0):.15f}  partition deviation = {deviation:.2e}")

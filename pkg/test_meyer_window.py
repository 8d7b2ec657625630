"""
Test suite for Meyer windows and their smooth steps.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from steerwave import ConfigError, MeyerWindow, WindowSpec, eval_G, eval_H, eval_theta
from steerwave.steerwave_window import INF, bump_integral_G, step_polynomial_coefficients


@pytest.mark.parametrize("smoothness", [3, 4, 5, INF])
@pytest.mark.parametrize("transition", [1 / 16, 1 / 8, 1 / 4])
def test_squared_partition_of_unity(smoothness, transition):
    """Test theta(x)^2 + theta(x-2)^2 == 1 over [0, 2]."""
    window = MeyerWindow(WindowSpec(smoothness, transition))
    xs = np.linspace(0.0, 2.0, 2001)

    deviation = np.max(np.abs(window(xs) ** 2 + window(xs - 2.0) ** 2 - 1.0))

    assert deviation < 1e-12


@pytest.mark.parametrize("smoothness", [3, 4, 5, INF])
def test_smooth_step_endpoints(smoothness):
    """Test G(-1) = 0, G(0) = pi/4, G(1) = pi/2 and the flat tails."""
    spec = WindowSpec(smoothness)

    assert eval_G(spec, -1.0) == pytest.approx(0.0, abs=1e-15)
    assert eval_G(spec, 0.0) == pytest.approx(math.pi / 4, abs=1e-15)
    assert eval_G(spec, 1.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert eval_G(spec, -3.0) == 0.0
    assert eval_G(spec, 3.0) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("smoothness", [3, 4, 5, INF])
def test_window_plateau_and_support(smoothness):
    """Test theta is 1 on the plateau, 0 outside the transition and 1/sqrt(2) at 1."""
    eps = 0.125
    spec = WindowSpec(smoothness, eps)

    assert eval_theta(spec, 0.0) == 1.0
    assert eval_theta(spec, 1.0 - eps) == 1.0
    assert eval_theta(spec, -(1.0 - eps)) == 1.0
    assert eval_theta(spec, 1.0 + eps) == 0.0
    assert eval_theta(spec, 1.5) == 0.0
    assert eval_theta(spec, 1.0) == pytest.approx(math.sqrt(0.5), abs=1e-14)
    assert eval_H(spec, 1.0) == pytest.approx(math.pi / 4, abs=1e-14)


@pytest.mark.parametrize("smoothness", [3, INF])
def test_window_is_even_and_monotone(smoothness):
    """Test theta(-x) == theta(x) and that theta falls through the transition band."""
    window = MeyerWindow(WindowSpec(smoothness, 0.25))
    xs = np.linspace(0.0, 1.5, 301)

    values = window(xs)

    assert np.allclose(window(-xs), values, atol=1e-14)
    assert np.all(np.diff(values) <= 1e-15)
    assert np.all((values >= 0.0) & (values <= 1.0))


def test_scalar_in_scalar_out():
    """Test that scalars come back as floats and arrays as arrays."""
    spec = WindowSpec(4)

    assert isinstance(eval_theta(spec, 0.9), float)
    assert isinstance(eval_G(spec, 0.2), float)
    assert eval_theta(spec, np.array([0.0, 2.0])).tolist() == [1.0, 0.0]


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("x", [-0.9, -0.3, 0.0, 0.4, 0.95])
def test_step_polynomials_match_bump_quadrature(n, x):
    """Test the closed-form steps against quadrature of the normalized bump (1-t^2)^n."""
    assert eval_G(WindowSpec(n), x) == pytest.approx(bump_integral_G(n, x), abs=1e-12)


def test_step_polynomial_coefficients_are_exact():
    """Test the rational coefficients: the step climbs exactly half of pi."""
    for n in (3, 4, 5):
        prefactor, coeffs = step_polynomial_coefficients(n)
        assert all(isinstance(c, Fraction) for c in coeffs)
        assert len(coeffs) == 2 * n + 2
        assert prefactor * sum(coeffs) == Fraction(1, 2)
        assert prefactor * sum(c * (-1) ** k for k, c in enumerate(coeffs)) == 0

    with pytest.raises(ConfigError, match="smoothness 6"):
        step_polynomial_coefficients(6)


def test_bump_integral_edges():
    """Test the quadrature oracle outside [-1, 1] and its argument check."""
    assert bump_integral_G(7, -2.0) == 0.0
    assert bump_integral_G(7, 2.0) == math.pi / 2
    assert bump_integral_G(7, 0.0) == pytest.approx(math.pi / 4, abs=1e-13)
    with pytest.raises(ConfigError, match="positive"):
        bump_integral_G(0, 0.5)


def test_window_spec_parsing():
    """Test smoothness parsing and labels."""
    assert WindowSpec("inf").is_infinite
    assert WindowSpec(float("inf")).label == "inf"
    assert WindowSpec("5").smoothness == 5
    assert WindowSpec(3).label == "n3"
    assert WindowSpec(3, 0.25).to_dict() == {"smoothness": 3, "transition": 0.25}
    assert WindowSpec().transition == 0.125


@pytest.mark.parametrize("smoothness,transition", [
    (7, 0.125),
    (2, 0.125),
    ("smooth", 0.125),
    (True, 0.125),
    (3, 0.0),
    (3, 1.0),
    (3, "wide"),
])
def test_invalid_window_specs(smoothness, transition):
    """Test that unsupported windows are rejected."""
    with pytest.raises(ConfigError):
        WindowSpec(smoothness, transition)


def test_cubic_step_at_one_half_matches_exact_rational():
    """Test G_3(1/2) against (35 pi/64)(-x^7/7 + 3x^5/5 - x^3 + x + 16/35) in exact arithmetic."""
    x = Fraction(1, 2)
    exact = Fraction(35, 64) * (-x ** 7 / 7 + Fraction(3, 5) * x ** 5 - x ** 3 + x + Fraction(16, 35))

    assert exact == Fraction(3807, 8192)
    assert eval_G(WindowSpec(3), 0.5) == pytest.approx(math.pi * float(exact), rel=1e-14)


@pytest.mark.parametrize("smoothness", [3, 4, 5, INF])
@pytest.mark.parametrize("transition", [1 / 16, 1 / 4, 1 / 2])
def test_window_stays_in_unit_interval(smoothness, transition):
    """Test 0 <= theta <= 1 everywhere, the transition band included."""
    window = MeyerWindow(WindowSpec(smoothness, transition))
    xs = np.linspace(1.0 - transition, 1.0 + transition, 4001)

    values = window(np.concatenate([xs, -xs]))

    assert values.min() >= 0.0
    assert values.max() <= 1.0


def one_sided_difference(window, x0, h, k, direction):
    """k-th finite difference quotient of theta at x0 from one side (direction -1 or +1)."""
    points = x0 + direction * h * np.arange(k, -1, -1)
    return float(np.diff(window(points), k)[0]) / h ** k


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("edge", [1.0, -1.0])
def test_outer_seam_is_n_times_differentiable(n, edge):
    """Test derivative jumps at +-(1+eps) vanish for k <= n and the (n+1)-th does not."""
    eps = 0.5
    window = MeyerWindow(WindowSpec(n, eps))
    seam = edge * (1.0 + eps)
    inward = -1 if edge > 0 else 1
    h = 5e-3

    for k in range(1, n + 2):
        coarse = abs(one_sided_difference(window, seam, h, k, inward))
        fine = abs(one_sided_difference(window, seam, h / 2, k, inward))
        outside = one_sided_difference(window, seam, h, k, -inward)
        assert outside == 0.0
        if k <= n:
            assert fine < 0.7 * coarse, k
        else:
            assert fine > 0.8 * coarse
            assert fine > 1.0


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("edge", [1.0, -1.0])
def test_inner_seam_is_flat(n, edge):
    """Test derivatives of order k <= n leave the plateau at +-(1-eps) without a jump."""
    eps = 0.5
    window = MeyerWindow(WindowSpec(n, eps))
    seam = edge * (1.0 - eps)
    outward = 1 if edge > 0 else -1

    for k in range(1, n + 1):
        assert one_sided_difference(window, seam, 5e-3, k, -outward) == 0.0
        assert abs(one_sided_difference(window, seam, 5e-3, k, outward)) < 5e-2

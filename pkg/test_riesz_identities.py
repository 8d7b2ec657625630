"""
Test suite for first- and higher-order Riesz transforms.
"""

import math

import numpy as np
import pytest

from steerwave import (
    AxisError,
    GridError,
    GridSpec,
    MultiIndexError,
    ScalarField,
    derivative_multiplier,
    filter_field,
    hermite_wavelet,
    higher_order_multiplier,
    multi_indices,
    random_field,
    riesz_component,
    riesz_higher,
    riesz_invert,
    riesz_multiplier,
    riesz_vector,
)
from steerwave.steerwave_riesz import (
    multinomial_weight,
    parse_multi_index,
    riesz_channels,
    riesz_normalization,
)

IDENTITY_TOL = 1e-10


@pytest.fixture(scope="module")
def field_2d():
    return random_field(GridSpec(2, 256), seed=11)


def relative(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_riesz_multiplier_examples():
    """Test the symbol -j w_i/|w| at a few frequencies."""
    assert riesz_multiplier(1, (1.0, 0.0)) == -1j
    assert riesz_multiplier(2, (3.0, 4.0)) == pytest.approx(-0.8j)
    assert riesz_multiplier(1, (3.0, 4.0)) == pytest.approx(-0.6j)
    assert riesz_multiplier(1, (0.0, 0.0)) == 0
    assert riesz_multiplier(1, (-2.0,)) == 1j


def test_riesz_multiplier_axis_validation():
    """Test that axes are numbered 1..d."""
    with pytest.raises(AxisError, match="1..2"):
        riesz_multiplier(3, (1.0, 0.0))
    with pytest.raises(AxisError):
        riesz_multiplier(0, (1.0, 0.0))


def test_multi_indices_colex_order():
    """Test enumeration order and count of multi-indices."""
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert multi_indices(1, 3) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert multi_indices(0, 2) == [(0, 0)]
    assert len(multi_indices(4, 3)) == math.comb(6, 2)
    with pytest.raises(MultiIndexError):
        multi_indices(-1, 2)


def test_normalization_weights():
    """Test the multinomial weight |alpha|!/alpha! and its square root."""
    assert multinomial_weight((2, 1)) == 3
    assert multinomial_weight((1, 1, 1)) == 6
    assert riesz_normalization((1, 1)) == pytest.approx(math.sqrt(2))
    assert riesz_normalization((10, 10)) == pytest.approx(math.sqrt(multinomial_weight((10, 10))))


def test_parse_multi_index():
    """Test multi-index parsing from text and sequences."""
    assert parse_multi_index("1,0") == (1, 0)
    assert parse_multi_index([0, 2, 1], dim=3) == (0, 2, 1)

    for bad in ("1,x", "", [-1, 0], [1.5, 0], [True, 0], 5):
        with pytest.raises(MultiIndexError):
            parse_multi_index(bad)
    with pytest.raises(MultiIndexError, match="Expected 2 components"):
        parse_multi_index((1, 0, 0), dim=2)
    with pytest.raises(MultiIndexError, match="exceeds"):
        parse_multi_index((15, 15))


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_symbols_square_sum_to_one(order):
    """Test sum over |alpha|=n of |m_alpha(w)|^2 == 1 away from DC."""
    rng = np.random.default_rng(order)
    omega = rng.uniform(-math.pi, math.pi, size=(2, 50))

    total = sum(np.abs(higher_order_multiplier(alpha).evaluate(*omega)) ** 2 for alpha in multi_indices(order, 2))

    assert np.allclose(total, 1.0, atol=1e-13)


def test_zero_multi_index_is_identity():
    """Test that the order-0 multiplier is 1 everywhere, DC included."""
    grid = GridSpec(2, 32)
    assert np.all(higher_order_multiplier((0, 0)).on_grid(grid) == 1.0)


def test_first_order_energy_identity(field_2d):
    """Test sum_i ||R_i f||^2 == ||f||^2 on a band-limited field."""
    energy = field_2d.energy()
    total = sum(component.energy() for component in riesz_vector(field_2d))

    assert abs(total - energy) < IDENTITY_TOL * energy


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_higher_order_energy_identity(field_2d, order):
    """Test sum over |alpha|=n of ||R^alpha f||^2 == ||f||^2."""
    energy = field_2d.energy()
    channels = riesz_channels(field_2d, order)

    assert [alpha for alpha, _ in channels] == multi_indices(order, 2)
    assert abs(sum(channel.energy() for _, channel in channels) - energy) < IDENTITY_TOL * energy


def test_inversion_identity(field_2d):
    """Test -sum_i R_i R_i f == f."""
    recovered = riesz_invert(riesz_vector(field_2d))

    assert relative(recovered.values, field_2d.values) < IDENTITY_TOL


def test_riesz_invert_validation(field_2d):
    """Test component count and grid checks of riesz_invert."""
    with pytest.raises(AxisError, match="Expected 2 components"):
        riesz_invert([field_2d])
    with pytest.raises(GridError):
        riesz_invert([])
    with pytest.raises(GridError, match="mismatch"):
        riesz_invert([field_2d, ScalarField.zeros(GridSpec(2, 128))])


def test_hilbert_transform_of_cosine():
    """Test that in one dimension R turns cos into sin."""
    grid = GridSpec(1, 64)
    x = grid.axis_coords()
    w0 = 2 * math.pi * 4 / 64

    transformed = riesz_component(ScalarField(grid, np.cos(w0 * x)), 1)

    assert np.allclose(transformed.values, np.sin(w0 * x), atol=1e-12)


def test_unit_multi_index_matches_component_bitwise(field_2d):
    """Test R^(1,0) is the same computation as R_1."""
    assert np.array_equal(riesz_higher(field_2d, (1, 0)).values, riesz_component(field_2d, 1).values)
    assert np.array_equal(riesz_higher(field_2d, "0,1").values, riesz_component(field_2d, 2).values)


def test_riesz_higher_validation(field_2d):
    """Test |alpha| >= 1 and the number of components."""
    with pytest.raises(MultiIndexError, match=r"\|alpha\| >= 1"):
        riesz_higher(field_2d, (0, 0))
    with pytest.raises(MultiIndexError, match="Expected 2 components"):
        riesz_higher(field_2d, (1, 0, 0))
    with pytest.raises(MultiIndexError):
        riesz_channels(field_2d, 0)


def test_second_order_mixed_term_factorizes(field_2d):
    """Test R^(1,1) == sqrt(2) * R_1 R_2."""
    mixed = riesz_higher(field_2d, (1, 1))
    iterated = riesz_component(riesz_component(field_2d, 2), 1)

    assert relative(mixed.values, math.sqrt(2) * iterated.values) < 1e-12


def test_riesz_commutes_with_derivatives():
    """Test R_1 D_2 f == D_2 R_1 f."""
    grid = GridSpec(2, 128, 0.5)
    f = hermite_wavelet(grid, (0, 0), sigma=2.0)
    d2 = derivative_multiplier((0, 1))

    left = riesz_component(filter_field(f, d2), 1)
    right = filter_field(riesz_component(f, 1), d2)

    assert np.allclose(left.values, right.values, atol=1e-12)


def test_riesz_commutes_with_dilation():
    """Test R f(./s)(x) == (R f)(x/s) with Gaussian derivatives of two widths."""
    grid = GridSpec(2, 512)
    narrow = riesz_component(hermite_wavelet(grid, (2, 2), sigma=3.0), 1).values
    wide = riesz_component(hermite_wavelet(grid, (2, 2), sigma=6.0), 1).values

    # f_6(2x) = f_3(x) / 2^|beta|
    sampled = 16.0 * wide[136:377:2, 136:377:2]
    reference = narrow[196:317, 196:317]

    assert np.max(np.abs(sampled - reference)) < 1e-6 * np.max(np.abs(reference))


def test_riesz_rotation_covariance(field_2d):
    """Test steerability under a quarter turn g(x) = f(-x2, x1)."""
    n = field_2d.grid.size
    flip = (-np.arange(n)) % n

    def rotate(values):
        return values[flip, :].T

    g = ScalarField(field_2d.grid, rotate(field_2d.values))
    r1f, r2f = (c.values for c in riesz_vector(field_2d))
    r1g, r2g = (c.values for c in riesz_vector(g))

    assert np.allclose(r1g, rotate(r2f), atol=1e-12)
    assert np.allclose(r2g, -rotate(r1f), atol=1e-12)


@pytest.mark.parametrize("dim,axis", [(1, 1), (2, 1), (2, 2), (3, 3)])
def test_riesz_components_are_antisymmetric(dim, axis):
    """Test <R_i f, g> == -<f, R_i g> for real fields."""
    grid = GridSpec(dim, {1: 512, 2: 64, 3: 16}[dim])
    f = random_field(grid, seed=1)
    g = random_field(grid, seed=2)

    left = np.vdot(riesz_component(f, axis).values, g.values)
    right = np.vdot(f.values, riesz_component(g, axis).values)

    assert abs(left + right) < 1e-12 * np.linalg.norm(f.values) * np.linalg.norm(g.values)

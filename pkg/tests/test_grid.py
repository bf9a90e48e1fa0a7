import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from g3vortex.grid import (
    GridMismatch,
    GridSpec,
    ScalarField,
    dealias_product,
    derivative,
    forward,
    helmholtz_inverse,
    inverse,
    laplacian,
    pad_spectrum,
    padded_size,
    truncate_spectrum,
)
from g3vortex.initial import gaussian_derivative, random_bandlimited
from g3vortex.oseen import eval_oseen_G


@pytest.mark.parametrize("n,length", [(15, 1.0), (14, 1.0), (17, 1.0), (64, 0.0), (64, -2.0), (64, np.inf)])
def test_gridspec_rejects_bad_shape(n, length):
    with pytest.raises(ValueError):
        GridSpec(n, length)


def test_wavenumbers_cover_symmetric_range():
    g = GridSpec(16, 4.0)
    k1, k2 = g.wavenumbers
    expected = 2 * np.pi / 4.0 * np.arange(-8, 8)
    assert np.allclose(np.sort(k1.ravel()), expected)
    assert np.allclose(k2.ravel(), 2 * np.pi / 4.0 * np.arange(9))


def test_origin_is_a_node(grid):
    x1, x2 = grid.coords
    assert x1[grid.n // 2, 0] == 0.0 and x2[0, grid.n // 2] == 0.0


def test_field_is_immutable_and_finite(small_grid):
    f = small_grid.zeros()
    with pytest.raises(ValueError):
        f.values[0, 0] = 1.0
    bad = np.zeros((64, 64))
    bad[3, 3] = np.nan
    with pytest.raises(ValueError):
        ScalarField(small_grid, bad)
    with pytest.raises(ValueError):
        ScalarField(small_grid, np.zeros((8, 8)))


def test_mixed_grids_refuse_arithmetic(small_grid):
    other = GridSpec(64, 3.0)
    with pytest.raises(GridMismatch):
        small_grid.zeros() + other.zeros()
    with pytest.raises(GridMismatch):
        dealias_product([small_grid.zeros(), other.zeros()])


def test_round_trip_transform(small_grid, rng):
    v = rng.standard_normal((64, 64))
    back = inverse(forward(v), 64)
    assert np.abs(back - v).max() <= 1e-12 * np.abs(v).max()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_parseval(seed):
    g = GridSpec(32, 5.0)
    v = np.random.default_rng(seed).standard_normal((32, 32))
    c = np.fft.fft2(v)
    grid_sum = np.sum(v**2) * g.spacing**2
    spec_sum = np.sum(np.abs(c) ** 2) / g.n**2 * g.spacing**2
    assert grid_sum == pytest.approx(spec_sum, rel=1e-12)


class TestDerivative:
    def test_single_mode(self):
        g = GridSpec(32, 3.0)
        f = g.sample(lambda a, b: np.sin(2 * np.pi * a / 3.0) + 0 * b)
        d = derivative(f, 1)
        exact = g.sample(lambda a, b: 2 * np.pi / 3.0 * np.cos(2 * np.pi * a / 3.0) + 0 * b)
        assert np.abs(d.values - exact.values).max() < 1e-12

    @pytest.mark.parametrize("axis,order", [(1, 1), (2, 1), (1, 2), (2, 3)])
    def test_constant_has_zero_derivative(self, small_grid, axis, order):
        f = small_grid.sample(lambda a, b: 3.5 + 0 * a * b)
        assert np.abs(derivative(f, axis, order).values).max() < 1e-13

    def test_gaussian_matches_analytic(self, grid):
        d = derivative(eval_oseen_G(grid), 1)
        assert np.abs(d.values - gaussian_derivative(grid, 1, 0).values).max() < 1e-8

    def test_nyquist_dropped_for_odd_orders(self):
        g = GridSpec(16, 2 * np.pi)
        f = g.sample(lambda a, b: np.cos(8 * a) + 0 * b)
        assert np.abs(derivative(f, 1).values).max() < 1e-12
        assert np.abs(derivative(f, 1, 2).values + 64 * f.values).max() < 1e-10

    @pytest.mark.parametrize("axis,order", [(0, 1), (3, 1), (1, 0)])
    def test_bad_arguments(self, small_grid, axis, order):
        with pytest.raises(ValueError):
            derivative(small_grid.zeros(), axis, order)


class TestHelmholtz:
    def test_zero_coefficient_is_identity(self, small_grid, rng):
        f = random_bandlimited(small_grid, rng)
        assert helmholtz_inverse(f, 0.0) is f

    def test_single_mode(self):
        g = GridSpec(32, 3.0)
        f = g.sample(lambda a, b: np.sin(2 * np.pi * a / 3.0) + 0 * b)
        out = helmholtz_inverse(f, 1.0)
        assert np.abs(out.values - f.values / (1 + (2 * np.pi / 3.0) ** 2)).max() < 1e-14

    def test_round_trip(self, grid, rng):
        f = random_bandlimited(grid, rng, k_max=30, mean_zero=False)
        g = helmholtz_inverse(f, 0.1)
        back = g - 0.1 * laplacian(g)
        assert np.abs(back.values - f.values).max() < 1e-10

    def test_commutes_with_derivative(self, grid, rng):
        f = random_bandlimited(grid, rng, k_max=20)
        a = derivative(helmholtz_inverse(f, 0.3), 2)
        b = helmholtz_inverse(derivative(f, 2), 0.3)
        assert np.abs(a.values - b.values).max() < 1e-12

    def test_negative_coefficient(self, small_grid):
        with pytest.raises(ValueError):
            helmholtz_inverse(small_grid.zeros(), -1.0)


class TestDealias:
    @pytest.mark.parametrize("n,arity,m", [(64, 2, 96), (64, 3, 128), (18, 2, 28)])
    def test_padded_size(self, n, arity, m):
        assert padded_size(n, arity) == m

    def test_two_modes_give_sum_mode(self):
        g = GridSpec(32, 2 * np.pi)
        f = g.sample(lambda a, b: np.cos(3 * a) + 0 * b)
        h = g.sample(lambda a, b: np.cos(5 * b) + 0 * a)
        p = dealias_product([f, h])
        exact = g.sample(lambda a, b: np.cos(3 * a) * np.cos(5 * b))
        assert np.abs(p.values - exact.values).max() < 1e-13

    def test_aliased_part_removed(self):
        g = GridSpec(16, 2 * np.pi)
        f = g.sample(lambda a, b: np.cos(6 * a) + 0 * b)
        # cos²(6x) = ½ + ½cos(12x); mode 12 is not representable and must not alias to 4
        p = dealias_product([f, f])
        assert np.abs(p.values - 0.5).max() < 1e-13

    def test_zero_factor(self, small_grid, rng):
        f = random_bandlimited(small_grid, rng)
        assert np.abs(dealias_product([f, small_grid.zeros(), f]).values).max() == 0.0

    def test_cubic_matches_oversampled_direct_product(self, rng):
        g = GridSpec(32, 2 * np.pi)
        fs = [random_bandlimited(g, rng, k_max=15, mean_zero=False) for _ in range(3)]
        p = dealias_product(fs)
        m = 128
        direct = np.ones((m, m))
        for f in fs:
            direct = direct * inverse(pad_spectrum(f.spectrum(), 32, m), m)
        ref = truncate_spectrum(forward(direct), m, 32)
        assert np.abs(p.spectrum() - ref).max() < 1e-12 * np.abs(ref).max()

    def test_cubic_equals_nested_quadratic_for_narrow_bands(self, rng):
        g = GridSpec(48, 2 * np.pi)
        f, h, q = (random_bandlimited(g, rng, k_max=5, mean_zero=False) for _ in range(3))
        nested = dealias_product([dealias_product([f, h]), q])
        assert np.abs(dealias_product([f, h, q]).values - nested.values).max() < 1e-12

    def test_arity_mismatch(self, small_grid):
        with pytest.raises(ValueError):
            dealias_product([small_grid.zeros()] * 2, arity=3)

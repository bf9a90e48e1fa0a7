"""Initial data and the catalog of smooth, rapidly decaying test fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, ScalarField, forward, inverse
from .norms import h2_weighted
from .oseen import oseen_G
from .rng import SplitMix64

__all__ = [
    "WindowedNoise",
    "gaussian",
    "oseen",
    "perturbed_oseen",
    "gaussian_derivative",
    "identity_catalog",
    "random_bandlimited",
    "NORM_GRID",
]

# reference grid for normalizing perturbations in scaled variables
NORM_GRID = GridSpec(256, 40.0)


def _hermite_factor(x, order):
    """``p`` with ``d^k/dx^k e^{-x²/4} = p(x) e^{-x²/4}``."""
    return [
        lambda s: np.ones_like(s),
        lambda s: -s / 2,
        lambda s: s**2 / 4 - 0.5,
        lambda s: -(s**3) / 8 + 3 * s / 4,
    ][order](x)


def gaussian_derivative(grid: GridSpec, k1: int, k2: int) -> ScalarField:
    """``∂1^k1 ∂2^k2 G`` sampled exactly, for ``k1 + k2 <= 3``."""
    if k1 < 0 or k2 < 0 or k1 > 3 or k2 > 3:
        raise ValueError("derivative orders must lie in 0..3")
    return grid.sample(lambda a, b: _hermite_factor(a, k1) * _hermite_factor(b, k2) * oseen_G(a, b))


@dataclass(frozen=True)
class WindowedNoise:
    """Mean-zero ``win(X) Σ c_j cos(κ_j·X + φ_j) - m G(X)`` with a Gaussian window.

    Wavevectors are drawn in the disc ``|κ| <= k_max``; ``m`` removes the mass
    of the windowed sum so the result integrates to zero.
    """

    kappa: np.ndarray
    phase: np.ndarray
    coef: np.ndarray
    sigma: float
    offset: float = 0.0

    @classmethod
    def draw(cls, seed: int, modes: int = 12, k_max: float = 2.0, sigma: float = 1.5) -> "WindowedNoise":
        rng = SplitMix64(seed)
        rad = k_max * np.sqrt(rng.random(modes))
        ang = rng.uniform(0.0, 2 * np.pi, modes)
        kappa = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        phase = rng.uniform(0.0, 2 * np.pi, modes)
        coef = rng.uniform(-1.0, 1.0, modes)
        base = cls(kappa, phase, coef, sigma)
        # mass of the windowed sum, in closed form
        s2 = sigma**2
        m = float(np.sum(coef * np.cos(phase) * 2 * np.pi * s2 * np.exp(-0.5 * s2 * rad**2)))
        return cls(kappa, phase, coef, sigma, m)

    def __call__(self, x1, x2):
        win = np.exp(-(x1**2 + x2**2) / (2 * self.sigma**2))
        total = 0.0
        for (ka, kb), ph, c in zip(self.kappa, self.phase, self.coef):
            total = total + c * np.cos(ka * x1 + kb * x2 + ph)
        return win * total - self.offset * oseen_G(x1, x2)


def gaussian(grid: GridSpec, amplitude: float = 1.0, sigma: float = 1.0) -> ScalarField:
    """``a G(x/σ) / σ²``, which has mass ``a``."""
    return grid.sample(lambda a, b: amplitude * oseen_G(a / sigma, b / sigma) / sigma**2)


def oseen(grid: GridSpec, eta: float, T: float) -> ScalarField:
    """Exact Oseen vorticity ``η/T G(x/√T)`` at ``t = 0``."""
    return gaussian(grid, eta, np.sqrt(T))


def perturbed_oseen(grid: GridSpec, eta: float, T: float, amplitude: float, seed: int,
                    noise_sigma: float = 1.5) -> ScalarField:
    """Physical data whose scaled form at ``τ0`` is ``ηG + a n``, ``‖n‖_{H²(2)} = 1``."""
    noise = WindowedNoise.draw(seed, sigma=noise_sigma)
    scale = h2_weighted(NORM_GRID.sample(noise), 2)
    r = np.sqrt(T)
    return grid.sample(
        lambda a, b: (eta * oseen_G(a / r, b / r) + amplitude / scale * noise(a / r, b / r)) / T
    )


def identity_catalog(grid: GridSpec, n_random: int = 4, seed: int = 2024) -> list[tuple[str, ScalarField]]:
    """Named mean-zero test fields: Gaussian derivatives of orders 1 to 3 and windowed noise."""
    orders = [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (3, 0), (1, 2)]
    out = [(f"d{k1}{k2}G", gaussian_derivative(grid, k1, k2)) for k1, k2 in orders]
    for i in range(n_random):
        out.append((f"noise{i}", grid.sample(WindowedNoise.draw(seed + i))))
    return out


def random_bandlimited(grid: GridSpec, rng: np.random.Generator, k_max: int = 8,
                       mean_zero: bool = True) -> ScalarField:
    """Random periodic field with modes ``|k_i| <= k_max`` (in units of ``2π/L``).

    Coefficients are standard normal; the result is real because it is
    re-projected through the real transform.
    """
    n = grid.n
    coeffs = np.zeros(grid.spectral_shape, dtype=complex)
    idx = np.r_[0 : k_max + 1, n - k_max : n]
    block = rng.standard_normal((idx.size, k_max + 1)) + 1j * rng.standard_normal((idx.size, k_max + 1))
    coeffs[np.ix_(idx, np.arange(k_max + 1))] = block
    values = inverse(coeffs, n)
    values = inverse(forward(values), n)
    if mean_zero:
        values = values - values.mean()
    return ScalarField(grid, values / np.abs(values).max())

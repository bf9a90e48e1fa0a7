"""Right-hand side and time stepping of the third-grade vorticity equation.

The evolution is ``∂t(w - α1 Δw) = R(w)`` with

    R(w) = ν Δw - u·∇(w - α1 Δw) + β div(|A|² ∇w) + β div(∇|A|² ∧ A) - ε Δ²w,

``u`` the Biot-Savart velocity, ``A = ∇u + (∇u)ᵗ`` and ``(b ∧ A)_j = b1 A_2j -
b2 A_1j``.  In Fourier space the linear part is diagonal and integrated
exactly; the rest is advanced with Heun's method on the integrating-factor
variable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .biot_savart import velocity_spectrum
from .grid import GridSpec, ScalarField, forward, inverse, pad_spectrum, padded_size, truncate_spectrum
from .oseen import ScalingFrame

__all__ = [
    "FluidParams",
    "SimState",
    "UnstableStep",
    "StepTooLarge",
    "rhs_vorticity",
    "nonlinear_spectrum",
    "linear_rate",
    "stable_dt",
    "step",
    "regrid",
    "DEFAULT_CFL",
]

DEFAULT_CFL = 0.5
BLOWUP_FACTOR = 1e6


class UnstableStep(RuntimeError):
    """The post-step norm exceeded the blow-up guard."""

    def __init__(self, msg: str, t: float):
        super().__init__(msg)
        self.t = t


class StepTooLarge(ValueError):
    """Requested step exceeds the stability bound of the explicit part."""


@dataclass(frozen=True)
class FluidParams:
    """Material parameters.  ``alpha2`` is carried for the record only."""

    nu: float = 1.0
    alpha1: float = 0.1
    alpha2: float = 0.0
    beta: float = 0.05
    epsilon: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be > 0")
        for name in ("alpha1", "beta", "epsilon"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class SimState:
    w: ScalarField
    t: float
    params: FluidParams
    frame: ScalingFrame

    @property
    def grid(self) -> GridSpec:
        return self.w.grid


def linear_rate(grid: GridSpec, p: FluidParams) -> np.ndarray:
    """Decay rate ``(ν|k|² + ε|k|⁴)/(1 + α1|k|²)`` of each Fourier mode."""
    k2 = grid.k2
    return (p.nu * k2 + p.epsilon * k2**2) / (1.0 + p.alpha1 * k2)


def _ifft_on(coeffs, n, m):
    return inverse(pad_spectrum(coeffs, n, m), m)


def nonlinear_spectrum(w_hat: np.ndarray, grid: GridSpec, p: FluidParams):
    """Spectrum of ``-u·∇(w - α1Δw) + β div(|A|²∇w + ∇|A|² ∧ A)`` and a rate bound.

    The advective product is evaluated on the 3/2-padded grid and the cubic
    flux on the 2x grid, so the retained modes are alias-free.

    Returns
    -------
    n_hat : ndarray
        rfft-layout spectrum on ``grid``.
    rate : float
        Estimate of the largest explicit eigenvalue magnitude (before
        division by ``1 + α1|k|²``), used for the stability bound.
    """
    n = grid.n
    k1, k2 = grid.odd_wavenumbers
    u1h, u2h = velocity_spectrum(w_hat, grid)
    q_hat = (1.0 + p.alpha1 * grid.k2) * w_hat

    m2 = padded_size(n, 2)
    u1 = _ifft_on(u1h, n, m2)
    u2 = _ifft_on(u2h, n, m2)
    adv = u1 * _ifft_on(1j * k1 * q_hat, n, m2) + u2 * _ifft_on(1j * k2 * q_hat, n, m2)
    n_hat = -truncate_spectrum(forward(adv), m2, n)
    umax = float(np.abs(u1).max() + np.abs(u2).max())
    kmax = grid.k_nyquist
    rate = umax * kmax

    if p.beta > 0:
        m3 = padded_size(n, 3)
        a11 = _ifft_on(2j * k1 * u1h, n, m3)
        a12 = _ifft_on(1j * (k1 * u2h + k2 * u1h), n, m3)
        a22 = _ifft_on(2j * k2 * u2h, n, m3)
        w1 = _ifft_on(1j * k1 * w_hat, n, m3)
        w2 = _ifft_on(1j * k2 * w_hat, n, m3)
        s = a11**2 + 2.0 * a12**2 + a22**2
        s_hat = forward(s)
        big = GridSpec(m3, grid.length)
        b1k, b2k = big.odd_wavenumbers
        b1 = inverse(1j * b1k * s_hat, m3)
        b2 = inverse(1j * b2k * s_hat, m3)
        f1 = s * w1 + b1 * a12 - b2 * a11
        f2 = s * w2 + b1 * a22 - b2 * a12
        f1h = truncate_spectrum(forward(f1), m3, n)
        f2h = truncate_spectrum(forward(f2), m3, n)
        n_hat = n_hat + p.beta * (1j * k1 * f1h + 1j * k2 * f2h)
        # the cubic flux acts like a diffusion with coefficient ~ 3β|A|²
        rate = max(rate, 3.0 * p.beta * float(s.max()) * float(np.max(grid.k2 / (1 + p.alpha1 * grid.k2))))
    return n_hat, rate


def rhs_vorticity(w: ScalarField, params: FluidParams) -> ScalarField:
    """``R(w)`` in ``∂t(w - α1Δw) = R(w)``."""
    g = w.grid
    w_hat = w.spectrum()
    n_hat, _ = nonlinear_spectrum(w_hat, g, params)
    lin = -(params.nu * g.k2 + params.epsilon * g.k2**2) * w_hat
    return ScalarField.from_spectrum(g, n_hat + lin)


def stable_dt(w: ScalarField, params: FluidParams, c_cfl: float = DEFAULT_CFL) -> float:
    """Largest step allowed for the explicit part: ``c_cfl / rate``."""
    _, rate = nonlinear_spectrum(w.spectrum(), w.grid, params)
    return np.inf if rate == 0 else c_cfl / rate


def step(state: SimState, dt: float, c_cfl: float | None = DEFAULT_CFL) -> SimState:
    """One integrating-factor Heun step of size ``dt``.

    Raises
    ------
    StepTooLarge
        ``dt`` exceeds ``c_cfl / rate`` (skipped when ``c_cfl`` is None).
    UnstableStep
        The L2 norm grew by more than a factor 1e6.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    g, p = state.grid, state.params
    w_hat = state.w.spectrum()
    helm = 1.0 / (1.0 + p.alpha1 * g.k2)
    decay = np.exp(-linear_rate(g, p) * dt)

    n1, rate = nonlinear_spectrum(w_hat, g, p)
    if c_cfl is not None and rate > 0 and dt > c_cfl / rate:
        raise StepTooLarge(f"dt={dt:.3g} exceeds stability bound {c_cfl / rate:.3g} at t={state.t:.6g}")
    k1 = helm * n1
    pred = decay * (w_hat + dt * k1)
    n2, _ = nonlinear_spectrum(pred, g, p)
    new_hat = decay * w_hat + 0.5 * dt * (decay * k1 + helm * n2)
    new = inverse(new_hat, g.n)

    before = np.linalg.norm(state.w.values)
    after = np.linalg.norm(new)
    if not np.isfinite(after) or after > BLOWUP_FACTOR * max(before, np.finfo(float).tiny):
        raise UnstableStep(f"norm grew from {before:.3e} to {after:.3e}", state.t + dt)
    return replace(state, w=ScalarField(g, new), t=state.t + dt)


def regrid(state: SimState) -> SimState:
    """Double the box at fixed ``n``.

    The samples are embedded in a zero-padded box of twice the side and the
    spectrum is truncated to the coarser grid, which keeps the mass exactly.
    """
    g = state.grid
    n = g.n
    big = np.zeros((2 * n, 2 * n))
    big[n // 2 : n // 2 + n, n // 2 : n // 2 + n] = state.w.values
    coeffs = truncate_spectrum(forward(big), 2 * n, n)
    new_grid = GridSpec(n, 2 * g.length)
    return replace(state, w=ScalarField(new_grid, inverse(coeffs, n)))

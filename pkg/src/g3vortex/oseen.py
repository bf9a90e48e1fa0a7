"""Oseen vortex profiles, the operator 𝓛 and the self-similar change of variables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, ScalarField, VectorField, derivative, laplacian
from .norms import mass

__all__ = [
    "ScalingFrame",
    "OutOfDomain",
    "oseen_G",
    "oseen_V",
    "eval_oseen_G",
    "eval_oseen_V",
    "oseen_profile",
    "operator_L",
    "decompose",
    "to_scaled",
    "interpolate",
]

FOUR_PI = 4.0 * np.pi


class OutOfDomain(ValueError):
    """Scaled sample points would read a significant field outside the physical box."""


@dataclass(frozen=True)
class ScalingFrame:
    """Self-similar frame ``X = x / sqrt(t+T)``, ``τ = log(t+T)``."""

    T: float

    def __post_init__(self):
        if not self.T >= 1:
            raise ValueError(f"T must be >= 1, got {self.T}")

    @property
    def tau0(self) -> float:
        return float(np.log(self.T))

    def tau(self, t: float) -> float:
        return float(np.log(t + self.T))

    def t(self, tau: float) -> float:
        return float(np.exp(tau) - self.T)


def oseen_G(x1, x2):
    return np.exp(-(x1**2 + x2**2) / 4.0) / FOUR_PI


def oseen_V(x1, x2):
    """Closed-form velocity with ``curl V = G``; ``V(0) = 0``."""
    r2 = np.asarray(x1**2 + x2**2, dtype=float)
    small = r2 < 1e-8
    safe = np.where(small, 1.0, r2)
    # (1 - e^{-r²/4}) / r² → 1/4 - r²/32 near the origin
    prof = np.where(small, 0.25 - r2 / 32.0, -np.expm1(-safe / 4.0) / safe) / (2 * np.pi)
    return -x2 * prof, x1 * prof


def eval_oseen_G(grid: GridSpec) -> ScalarField:
    return grid.sample(oseen_G)


def eval_oseen_V(grid: GridSpec) -> VectorField:
    x1, x2 = grid.coords
    v1, v2 = oseen_V(x1, x2)
    shape = (grid.n, grid.n)
    return VectorField(
        ScalarField(grid, np.broadcast_to(v1, shape)), ScalarField(grid, np.broadcast_to(v2, shape))
    )


def oseen_profile(grid: GridSpec, eta: float, s: float) -> ScalarField:
    """Physical vorticity ``η/s · G(x/√s)`` with ``s = t + T``."""
    r = np.sqrt(s)
    return grid.sample(lambda a, b: eta / s * oseen_G(a / r, b / r))


def operator_L(W: ScalarField) -> ScalarField:
    """``𝓛W = ΔW + W + (X/2)·∇W``."""
    x1, x2 = W.grid.coords
    drift = 0.5 * (x1 * derivative(W, 1).values + x2 * derivative(W, 2).values)
    return ScalarField(W.grid, laplacian(W).values + W.values + drift)


def decompose(W: ScalarField) -> tuple[float, ScalarField]:
    """Split ``W = η G + f`` with ``η = ∫W``."""
    eta = mass(W)
    G = eval_oseen_G(W.grid)
    f = W.values - eta * G.values
    # absorb the rectangle-rule defect of ∫G so that ∫f vanishes to rounding
    defect = np.sum(f) * W.grid.cell_area
    if defect:
        f = f - defect * G.values / mass(G)
    return eta, ScalarField(W.grid, f)


def _basis(grid: GridSpec, pts: np.ndarray) -> np.ndarray:
    """Rows ``e^{i k x}`` (cosine for the Nyquist mode) evaluating a full-FFT series."""
    k = grid.dk * np.fft.fftfreq(grid.n, 1.0 / grid.n)
    # the series is periodic in x + L/2 relative to node 0
    s = pts[:, None] + 0.5 * grid.length
    b = np.exp(1j * s * k[None, :])
    b[:, grid.n // 2] = np.cos(s[:, 0] * k[grid.n // 2])
    return b


def interpolate(f: ScalarField, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """Trigonometric interpolant of ``f`` on the tensor product of ``p1`` and ``p2``."""
    g = f.grid
    coeffs = np.fft.fft2(f.values) / g.n**2
    b1 = _basis(g, np.asarray(p1, dtype=float))
    b2 = _basis(g, np.asarray(p2, dtype=float))
    return np.real(b1 @ coeffs @ b2.T)


def to_scaled(
    w: ScalarField, t: float, frame: ScalingFrame, target: GridSpec, tol: float = 1e-14
) -> ScalarField:
    """Scaled vorticity ``W(τ, X) = (t+T) w(t, √(t+T) X)`` on ``target``.

    Target nodes whose physical image leaves the box are set to zero.  That is
    allowed only if the field there is negligible: the scaled interpolant
    evaluated at the clamped (box-edge) image must stay below ``tol`` in
    absolute value.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    s = t + frame.T
    g = w.grid
    half = 0.5 * g.length
    pts = np.sqrt(s) * target.x
    inside = (pts >= -half) & (pts < half)
    W = s * interpolate(w, pts, pts)
    if not inside.all():
        edge = np.clip(pts, -half, half - g.spacing)
        Wc = s * interpolate(w, edge, edge)
        outside = ~(inside[:, None] & inside[None, :])
        worst = np.abs(Wc[outside]).max()
        if worst > tol:
            raise OutOfDomain(
                f"scaled grid samples |x| up to {np.abs(pts).max():.3g} beyond box half-width "
                f"{half:.3g} where the scaled field is {worst:.2e} > {tol:.1e}"
            )
        W = np.where(outside, 0.0, W)
    return ScalarField(target, W)

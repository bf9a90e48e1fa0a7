"""Velocity from vorticity and the kinematic identities of the 2D flow."""

from __future__ import annotations

import numpy as np

from .grid import (
    GridSpec,
    ScalarField,
    VectorField,
    dealias_product,
    derivative,
    forward,
    inverse,
    laplacian,
)
from .norms import PolarQuadrature, _check_mean

__all__ = [
    "velocity_from_vorticity",
    "velocity_spectrum",
    "curl",
    "divergence",
    "velocity_gradient",
    "strain",
    "strain_norm_sq",
    "weighted_velocity_identity_check",
    "curl_pressure_term",
]


def velocity_spectrum(w_hat: np.ndarray, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Biot-Savart multiplier ``û = -i ξ^⊥ ŵ / |ξ|²`` with ``ξ^⊥ = (-ξ2, ξ1)``.

    The zero mode is annihilated (no mean flow).
    """
    k1, k2 = grid.odd_wavenumbers
    ksq = grid.k2.copy()
    ksq[0, 0] = 1.0
    psi = -w_hat / ksq
    psi[0, 0] = 0.0
    return -1j * k2 * psi, 1j * k1 * psi


def velocity_from_vorticity(w: ScalarField) -> VectorField:
    """Divergence-free ``u`` with ``curl u = w - mean(w)`` on the periodic box."""
    u1, u2 = velocity_spectrum(w.spectrum(), w.grid)
    n = w.grid.n
    return VectorField(ScalarField(w.grid, inverse(u1, n)), ScalarField(w.grid, inverse(u2, n)))


def curl(u: VectorField) -> ScalarField:
    """Scalar curl ``∂1 u2 - ∂2 u1``."""
    return derivative(u.c2, 1) - derivative(u.c1, 2)


def divergence(u: VectorField) -> ScalarField:
    return derivative(u.c1, 1) + derivative(u.c2, 2)


def velocity_gradient(u: VectorField) -> list[list[ScalarField]]:
    """``L[i][j] = ∂_j u_i``."""
    return [[derivative(ui, j) for j in (1, 2)] for ui in u]


def strain(u: VectorField) -> list[list[ScalarField]]:
    """``A = ∇u + (∇u)^t`` as a nested 2x2 list."""
    L = velocity_gradient(u)
    return [[L[i][j] + L[j][i] for j in range(2)] for i in range(2)]


def strain_norm_sq(u: VectorField) -> ScalarField:
    """``|A|² = A:A`` (dealiased)."""
    A = strain(u)
    total = None
    for i in range(2):
        for j in range(2):
            term = dealias_product([A[i][j], A[i][j]])
            total = term if total is None else total + term
    return total


def curl_pressure_term(u: VectorField) -> VectorField:
    """``A·Δu + 2 div(L Lᵗ)``, whose curl vanishes for planar divergence-free ``u``."""
    A = strain(u)
    L = velocity_gradient(u)
    lap = [laplacian(ui) for ui in u]
    out = []
    for i in range(2):
        adv = dealias_product([A[i][0], lap[0]]) + dealias_product([A[i][1], lap[1]])
        div = None
        for k in range(2):
            m_ik = dealias_product([L[i][0], L[k][0]]) + dealias_product([L[i][1], L[k][1]])
            term = derivative(m_ik, k + 1)
            div = term if div is None else div + term
        out.append(adv + 2.0 * div)
    return VectorField(*out)


def weighted_velocity_identity_check(w: ScalarField, quad: PolarQuadrature | None = None):
    """Both sides of ``‖|x| ∇u‖² = ‖|x| w‖² + 2‖u‖²`` for mean-zero ``w``.

    ``u`` is the whole-plane Biot-Savart velocity.  Its ``1/|x|^2`` tail makes
    the periodic velocity unusable here, so both velocity terms are evaluated
    with the continuous transform: ``x_k ∂_j u_i`` has transform
    ``i ∂_{ξ_k}(i ξ_j û_i)`` and ``∂_k ŵ`` is the transform of ``-i x_k w``.
    The ``‖|x| w‖²`` term is a plain grid sum.

    Returns
    -------
    (lhs, rhs) : tuple of float
    """
    _check_mean(w)
    g = w.grid
    x1, x2 = g.coords
    weighted_w = float(np.sum(g.r2 * w.values**2) * g.cell_area)
    if not np.any(w.values):
        return 0.0, 0.0
    xw = [ScalarField(g, x1 * w.values), ScalarField(g, x2 * w.values)]
    if quad is None:
        quad = PolarQuadrature(g, [w])
    wh = quad.transform(w)
    dwh = [-1j * quad.transform(f) for f in xw]

    c = np.cos(quad.phi)[None, :]
    s = np.sin(quad.phi)[None, :]
    rho = quad.rho[:, None]
    xi = (rho * c, rho * s)
    # m = -i ξ^⊥/|ξ|²  so that û_i = m_i ŵ
    m = (1j * xi[1] / rho**2, -1j * xi[0] / rho**2)
    r2 = rho**2

    def dm(i, k):
        # ∂_k of m_i
        if i == 0:
            return 1j * ((1.0 if k == 1 else 0.0) / r2 - 2 * xi[1] * xi[k] / r2**2)
        return -1j * ((1.0 if k == 0 else 0.0) / r2 - 2 * xi[0] * xi[k] / r2**2)

    total = np.zeros(quad.n_radial)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                # ∂_k (ξ_j m_i ŵ)
                d = (
                    ((1.0 if j == k else 0.0) * m[i] + xi[j] * dm(i, k)) * wh
                    + xi[j] * m[i] * dwh[k]
                )
                total += 2 * np.pi * np.mean(np.abs(d) ** 2, axis=1)
    lhs = float(quad._weights(1.0) @ total) / (2 * np.pi) ** 2
    u_sq = quad.integrate(wh, wh, -1.0, mean_zero=True)
    return lhs, weighted_w + 2.0 * u_sq

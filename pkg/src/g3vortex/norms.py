"""Weighted Lebesgue/Sobolev norms, moments and fractional Laplacians.

Two routes to fractional quantities live here.  ``fractional_neg_laplacian``
is the grid Fourier multiplier.  :class:`PolarQuadrature` evaluates the
continuous Fourier transform of a decaying field at polar nodes and integrates
``|xi|^{2 sigma}`` weighted spectra with product quadrature in the radius; it
is the route to use whenever a negative power meets the origin singularity,
where a lattice sum over ``k != 0`` converges only algebraically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre
from scipy.special import roots_jacobi, roots_legendre

from .grid import GridSpec, ScalarField, derivative, forward, inverse

__all__ = [
    "MeanNotZero",
    "WeightedNorms",
    "inner",
    "l2",
    "lp_norm",
    "mass",
    "weighted_l2",
    "weighted_norms",
    "h2_weighted",
    "fractional_neg_laplacian",
    "fractional_power",
    "weight_interpolation_check",
    "interpolation_inequality",
    "PolarQuadrature",
]

MEAN_TOL = 1e-10


class MeanNotZero(ValueError):
    """A negative fractional power was requested for a field with nonzero mass."""


def inner(f: ScalarField, g: ScalarField) -> float:
    return float(np.sum(f.values * g.values) * f.grid.cell_area)


def l2(f: ScalarField) -> float:
    return float(np.sqrt(np.sum(f.values**2) * f.grid.cell_area))


def lp_norm(values: np.ndarray, grid: GridSpec, p: float) -> float:
    """``(∫ |v|^p)^{1/p}`` by the rectangle rule."""
    return float((np.sum(np.abs(values) ** p) * grid.cell_area) ** (1.0 / p))


def mass(f: ScalarField) -> float:
    return float(np.sum(f.values) * f.grid.cell_area)


def weighted_l2(f: ScalarField, m: int) -> float:
    """Norm of ``L^2(m)``: ``(∫ (1+|x|^2)^m f^2)^{1/2}``."""
    if m < 0:
        raise ValueError("weight exponent must be nonnegative")
    w = (1.0 + f.grid.r2) ** m
    return float(np.sqrt(np.sum(w * f.values**2) * f.grid.cell_area))


@dataclass(frozen=True)
class WeightedNorms:
    """``L^2(m)``, ``H^1(m)`` and ``H^2(m)`` norms with their squared pieces.

    ``terms`` maps ``"f"``, ``"grad"`` and ``"hess"`` to the squared ``L^2(m)``
    norms of ``f``, ``∇f`` and ``∇²f``; ``weights`` holds the plain,
    ``|x|``- and ``|x|²``-weighted squared norms of ``f``.
    """

    m: int
    l2m: float
    h1m: float
    h2m: float
    terms: dict
    weights: dict


def weighted_norms(f: ScalarField, m: int) -> WeightedNorms:
    g = f.grid
    w = (1.0 + g.r2) ** m
    da = g.cell_area
    d1, d2 = derivative(f, 1), derivative(f, 2)
    hess = [derivative(d1, 1), derivative(d1, 2), derivative(d2, 2)]
    sq_f = float(np.sum(w * f.values**2) * da)
    sq_grad = float(np.sum(w * (d1.values**2 + d2.values**2)) * da)
    sq_hess = float(
        np.sum(w * (hess[0].values ** 2 + 2 * hess[1].values ** 2 + hess[2].values ** 2)) * da
    )
    weights = {
        "plain": float(np.sum(f.values**2) * da),
        "x": float(np.sum(g.r2 * f.values**2) * da),
        "x2": float(np.sum(g.r2**2 * f.values**2) * da),
    }
    return WeightedNorms(
        m=m,
        l2m=np.sqrt(sq_f),
        h1m=np.sqrt(sq_f + sq_grad),
        h2m=np.sqrt(sq_f + sq_grad + sq_hess),
        terms={"f": sq_f, "grad": sq_grad, "hess": sq_hess},
        weights=weights,
    )


def h2_weighted(f: ScalarField, m: int = 2) -> float:
    return weighted_norms(f, m).h2m


def _check_mean(f: ScalarField):
    total = mass(f)
    scale = l2(f)
    if abs(total) > MEAN_TOL * max(scale, np.finfo(float).tiny):
        raise MeanNotZero(f"field mass {total:.3e} is not zero (L2 norm {scale:.3e})")


def fractional_power(f: ScalarField, sigma: float) -> ScalarField:
    """Apply the multiplier ``|k|^{2 sigma}`` with the zero mode set to zero."""
    if sigma < 0:
        _check_mean(f)
    k2 = f.grid.k2
    mult = np.zeros_like(k2)
    nz = k2 > 0
    mult[nz] = k2[nz] ** sigma
    return ScalarField(f.grid, inverse(forward(f.values) * mult, f.grid.n))


def fractional_neg_laplacian(f: ScalarField, s: float) -> ScalarField:
    """``(-Δ)^{-s} f`` for ``0 < s <= 1``; requires ``∫f = 0``."""
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    return fractional_power(f, -s)


def weight_interpolation_check(f: ScalarField, p: float) -> bool:
    """``‖|x| f‖_p <= ‖f‖_p^{1/2} ‖|x|² f‖_p^{1/2}`` with constant one."""
    if p < 1:
        raise ValueError("p must be >= 1")
    g = f.grid
    r = np.sqrt(g.r2)
    lhs = lp_norm(r * f.values, g, p)
    rhs = np.sqrt(lp_norm(f.values, g, p) * lp_norm(g.r2 * f.values, g, p))
    return bool(lhs <= rhs * (1 + 1e-12) + 1e-300)


def interpolation_inequality(f: ScalarField, theta: float) -> tuple[float, float]:
    """Both sides of ``‖f‖² <= ¼‖∇f‖² + 5‖(-Δ)^{-(1+θ)/4} f‖²``."""
    d1, d2 = derivative(f, 1), derivative(f, 2)
    grad_sq = l2(d1) ** 2 + l2(d2) ** 2
    neg = l2(fractional_neg_laplacian(f, (1 + theta) / 4)) ** 2
    return l2(f) ** 2, 0.25 * grad_sq + 5.0 * neg


class PolarQuadrature:
    """Continuous-transform quadrature for fractional Sobolev inner products.

    Fields are treated as compactly supported on the box and transformed with
    ``f̂(ξ) = ∫ f(x) e^{-i x·ξ} dx`` (rectangle rule, exact for resolved
    fields) at nodes ``ξ = ρ (cos φ, sin φ)``.  Angles are uniform on
    ``[0, π)`` since real fields satisfy ``f̂(-ξ) = conj f̂(ξ)``; radii are
    Gauss-Legendre nodes on ``[0, R]``.  Radial integrals against ``ρ^a`` use
    product weights built from the Legendre interpolant, so algebraic
    singularities at the origin are integrated exactly.

    Parameters
    ----------
    grid : GridSpec
    fields : list of ScalarField
        Used only to choose the radial cutoff ``R`` and angular resolution.
    n_radial : int
    rel_tol : float
        Spectral amplitude (relative) below which the spectrum is cut off.
    """

    def __init__(self, grid: GridSpec, fields=(), n_radial: int = 72, rel_tol: float = 1e-14,
                 k_max: float | None = None, n_angular: int | None = None):
        self.grid = grid
        self.n_radial = n_radial
        r_max, extent, crop = self._envelope(grid, fields, rel_tol)
        if k_max is not None:
            r_max = k_max
        self.k_max = r_max
        if n_angular is None:
            n_angular = int(np.ceil(r_max * extent)) + 24
            n_angular += n_angular % 2
        self.n_angular = n_angular
        t, w = roots_legendre(n_radial)
        self._t = t
        self.rho = 0.5 * r_max * (t + 1.0)
        self.phi = np.pi * np.arange(n_angular) / n_angular
        self._crop = crop
        x = grid.x[crop]
        p1 = np.outer(self.rho, np.cos(self.phi)).ravel()
        p2 = np.outer(self.rho, np.sin(self.phi)).ravel()
        self._e1 = np.exp(-1j * np.outer(p1, x))
        self._e2 = np.exp(-1j * np.outer(p2, x))
        self._vander_inv = np.linalg.inv(legendre.legvander(t, n_radial - 1))
        self._weights_cache: dict[float, np.ndarray] = {}

    @staticmethod
    def _envelope(grid, fields, rel_tol):
        if not fields:
            return grid.k_nyquist, grid.length / 2 * np.sqrt(2), slice(0, grid.n)
        k = np.sqrt(grid.k2)
        r_max = 0.0
        spatial = np.zeros((grid.n, grid.n))
        for f in fields:
            c = np.abs(forward(f.values))
            peak = c.max()
            if peak == 0:
                continue
            r_max = max(r_max, float(k[c > rel_tol * peak].max()))
            spatial = np.maximum(spatial, np.abs(f.values) / np.abs(f.values).max())
        if r_max == 0.0:
            return grid.k_nyquist, 1.0, slice(0, grid.n)
        r_max = min(r_max + 2 * grid.dk, grid.k_nyquist)
        support = spatial > 0.1 * rel_tol
        rows = np.flatnonzero(support.any(axis=1))
        cols = np.flatnonzero(support.any(axis=0))
        lo = max(min(rows.min(), cols.min()) - 2, 0)
        hi = min(max(rows.max(), cols.max()) + 3, grid.n)
        extent = float(np.sqrt(grid.r2[support].max()))
        return r_max, extent, slice(lo, hi)

    def transform(self, f: ScalarField) -> np.ndarray:
        """``f̂`` at the nodes, shape ``(n_radial, n_angular)``."""
        if f.grid != self.grid:
            raise ValueError("field grid differs from quadrature grid")
        v = f.values[self._crop, self._crop]
        t = self._e2 @ v.T
        out = np.einsum("pa,pa->p", self._e1, t) * self.grid.cell_area
        return out.reshape(self.n_radial, self.n_angular)

    def _weights(self, a: float) -> np.ndarray:
        """Weights ``w_i`` with ``Σ w_i g(ρ_i) ≈ ∫_0^R ρ^a g(ρ) dρ`` for smooth ``g``."""
        key = round(a, 14)
        if key not in self._weights_cache:
            if a <= -1:
                raise ValueError(f"radial weight exponent {a} is not integrable")
            tj, wj = roots_jacobi(2 * self.n_radial + 40, 0.0, a)
            vals = legendre.legvander(tj, self.n_radial - 1)
            moments = (0.5 * self.k_max) ** (a + 1) * (wj @ vals)
            self._weights_cache[key] = moments @ self._vander_inv
        return self._weights_cache[key]

    def integrate(self, fa: np.ndarray, fb: np.ndarray, sigma: float, mean_zero: bool = False) -> float:
        """``(2π)^{-2} ∫ |ξ|^{2σ} Re(f̂_a conj f̂_b) dξ`` from transformed nodes.

        With ``mean_zero`` both spectra are assumed to vanish linearly at the
        origin, which makes negative ``σ`` down to ``-2`` integrable.
        """
        h = 2.0 * np.pi * np.real(fa * np.conj(fb)).mean(axis=1)
        a = 1.0 + 2.0 * sigma
        if mean_zero:
            h = h / self.rho**2
            a += 2.0
        return float(self._weights(a) @ h) / (2.0 * np.pi) ** 2

    def frac_inner(self, f: ScalarField, g: ScalarField, sigma: float) -> float:
        """``((-Δ)^{σ/2} f, (-Δ)^{σ/2} g)`` with the continuous transform."""
        mz = sigma < 0
        if mz:
            _check_mean(f)
            _check_mean(g)
        return self.integrate(self.transform(f), self.transform(g), sigma, mean_zero=mz)

    def frac_norm_sq(self, f: ScalarField, sigma: float) -> float:
        """``‖(-Δ)^{σ/2} f‖²``."""
        return self.frac_inner(f, f, sigma)

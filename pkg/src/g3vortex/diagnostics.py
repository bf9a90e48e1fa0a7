"""Energy functionals, exact integral identities and decay-rate fitting.

All functionals act on the scaled vorticity ``W`` through the perturbation
``f = W - ηG``.  Write ``a = α1 e^{-τ}`` for the time-dependent second-grade
coefficient in scaled variables; then

    E1 = ½(‖(-Δ)^{-(3+θ)/4} f‖² + a ‖(-Δ)^{-(1+θ)/4} f‖²)
    E2 = ½(‖f‖² + a ‖∇f‖²)
    E4 = ½(‖∇f‖² + a ‖Δf‖²)
    E6 = ½‖|X|²(f - aΔf)‖²
    E3 = 6E1 + E2,  E5 = 16E3 + E4,  E7 = K/(1-θ) E5 + E6.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .biot_savart import velocity_spectrum
from .grid import ScalarField, derivative, inverse, laplacian
from .norms import PolarQuadrature, _check_mean, inner, lp_norm, mass
from .oseen import ScalingFrame, decompose, operator_L, oseen_profile

__all__ = [
    "EnergySnapshot",
    "DecayFit",
    "InsufficientSamples",
    "NonPositiveValue",
    "energies",
    "sandwich_norm",
    "theorem_lhs",
    "corollary_errors",
    "lemma41_identities",
    "lemma51_identities",
    "IdentityPair",
    "fit_decay",
    "fit_slope",
]


class InsufficientSamples(ValueError):
    pass


class NonPositiveValue(ValueError):
    pass


@dataclass(frozen=True)
class EnergySnapshot:
    tau: float
    t: float
    eta: float
    E1: float
    E2: float
    E3: float
    E4: float
    E5: float
    E6: float
    E7: float
    theorem_lhs: float
    lp_errors: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DecayFit:
    theta_est: float
    log_prefactor: float
    window: tuple[float, float]
    residual: float

    def as_dict(self) -> dict:
        return {
            "theta_est": self.theta_est,
            "log_prefactor": self.log_prefactor,
            "window": list(self.window),
            "residual": self.residual,
        }


def _norm_sq(f: ScalarField, weight=None) -> float:
    v = f.values**2 if weight is None else weight * f.values**2
    return float(np.sum(v) * f.grid.cell_area)


def _grad_sq(f: ScalarField, weight=None) -> float:
    return _norm_sq(derivative(f, 1), weight) + _norm_sq(derivative(f, 2), weight)


def _alpha1(params) -> float:
    return float(getattr(params, "alpha1", params))


def energies(W: ScalarField, tau: float, params, theta: float = 0.8, K: float = 200.0,
             t: float = np.nan, quad: PolarQuadrature | None = None) -> EnergySnapshot:
    """E1 to E7 of the perturbation of ``W``; ``theorem_lhs`` is filled in too.

    ``params`` is a :class:`FluidParams` or a bare ``alpha1``.  Fractional
    norms in E1 use the continuous-transform quadrature.
    """
    alpha1 = _alpha1(params)
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    # decompose projects f to zero mass; a round-off remainder cannot pass a relative mean test
    eta, f = decompose(W)
    a = alpha1 * np.exp(-tau)
    if np.any(f.values):
        if quad is None:
            quad = PolarQuadrature(f.grid, [f])
        fh = quad.transform(f)
        neg3 = quad.integrate(fh, fh, -(3 + theta) / 2, mean_zero=True)
        neg1 = quad.integrate(fh, fh, -(1 + theta) / 2, mean_zero=True)
    else:
        neg3 = neg1 = 0.0
    lap = laplacian(f)
    r4 = f.grid.r2**2
    E1 = 0.5 * (neg3 + a * neg1)
    E2 = 0.5 * (_norm_sq(f) + a * _grad_sq(f))
    E4 = 0.5 * (_grad_sq(f) + a * _norm_sq(lap))
    E6 = 0.5 * _norm_sq(f - a * lap, r4)
    E3 = 6 * E1 + E2
    E5 = 16 * E3 + E4
    E7 = K / (1 - theta) * E5 + E6
    lhs = _norm_sq(f - a * lap, (1 + f.grid.r2) ** 2)
    return EnergySnapshot(tau, t, eta, E1, E2, E3, E4, E5, E6, E7, lhs)


def sandwich_norm(f: ScalarField, tau: float, alpha1: float) -> float:
    """``‖f‖²_{H¹} + a‖Δf‖² + ‖|X|²f‖² + a²‖|X|²Δf‖²``, the scale E7 is equivalent to."""
    a = alpha1 * np.exp(-tau)
    lap = laplacian(f)
    r4 = f.grid.r2**2
    return (_norm_sq(f) + _grad_sq(f) + a * _norm_sq(lap) + _norm_sq(f, r4)
            + a**2 * _norm_sq(lap, r4))


def theorem_lhs(W: ScalarField, tau: float, alpha1: float) -> float:
    """``‖(1 - α1 e^{-τ} Δ)(W - ηG)‖²_{L²(2)}``."""
    _, f = decompose(W)
    a = alpha1 * np.exp(-tau)
    g = f - a * laplacian(f)
    return _norm_sq(g, (1 + f.grid.r2) ** 2)


def corollary_errors(w: ScalarField, t: float, frame: ScalingFrame, params, p: float,
                     kind: str = "vorticity") -> float:
    """Unscaled distance to the Oseen profile in ``L^p``.

    ``kind="vorticity"``: ``‖(1-α1Δ)(w - η/(t+T) G(x/√(t+T)))‖_p`` for ``1 <= p <= 2``.
    ``kind="velocity"``: ``‖(1-α1Δ)(u - η/√(t+T) V(x/√(t+T)))‖_q`` for ``2 < q < ∞``;
    the difference is the Biot-Savart velocity of the (mean-zero) vorticity
    difference, the profile part being exactly ``η/√(t+T) V``.
    """
    alpha1 = _alpha1(params)
    s = t + frame.T
    eta = mass(w)
    diff = w - oseen_profile(w.grid, eta, s)
    g = w.grid
    helm = 1.0 + alpha1 * g.k2
    if kind == "vorticity":
        if not 1 <= p <= 2:
            raise ValueError("vorticity exponent must lie in [1, 2]")
        d = inverse(helm * diff.spectrum(), g.n)
        return lp_norm(d, g, p)
    if kind == "velocity":
        if not 2 < p < np.inf:
            raise ValueError("velocity exponent must lie in (2, inf)")
        u1h, u2h = velocity_spectrum(diff.spectrum(), g)
        mag = np.hypot(inverse(helm * u1h, g.n), inverse(helm * u2h, g.n))
        return lp_norm(mag, g, p)
    raise ValueError(f"unknown kind {kind!r}")


class IdentityPair(tuple):
    """``(lhs, rhs)`` of an exact identity plus the size of its terms.

    ``scale`` is the sum of the magnitudes of the terms on both sides, so that
    ``rel_error`` stays meaningful when the terms cancel to nearly zero.
    """

    def __new__(cls, lhs: float, rhs_terms):
        terms = [float(t) for t in rhs_terms]
        self = super().__new__(cls, (float(lhs), float(sum(terms))))
        self.scale = abs(float(lhs)) + sum(abs(t) for t in terms)
        return self

    @property
    def lhs(self) -> float:
        return self[0]

    @property
    def rhs(self) -> float:
        return self[1]

    @property
    def rel_error(self) -> float:
        return abs(self[0] - self[1]) / self.scale if self.scale > 0 else 0.0


def lemma41_identities(f: ScalarField, s: float, quad: PolarQuadrature | None = None):
    """The three fractional identities for mean-zero ``f`` and ``½ <= s < 1``.

    Each left side is the inner product of transformed fields; each right side
    is the closed norm formula.  Returns three :class:`IdentityPair`.
    """
    if not 0.5 <= s < 1:
        raise ValueError("s must lie in [1/2, 1)")
    _check_mean(f)
    if not np.any(f.values):
        return [IdentityPair(0.0, [0.0]) for _ in range(3)]
    g = f.grid
    x1, x2 = g.coords
    drift = ScalarField(g, 0.5 * (x1 * derivative(f, 1).values + x2 * derivative(f, 2).values))
    lf = operator_L(f)
    lap = laplacian(f)
    drift_lap = ScalarField(g, 0.5 * (x1 * derivative(lap, 1).values + x2 * derivative(lap, 2).values))
    if quad is None:
        quad = PolarQuadrature(g, [f])
    fh = quad.transform(f)
    sig = -2.0 * s
    neg = quad.integrate(fh, fh, sig, mean_zero=True)
    half = quad.integrate(fh, fh, 1.0 - 2.0 * s, mean_zero=True)
    return [
        IdentityPair(quad.integrate(quad.transform(drift), fh, sig, True), [-(s + 0.5) * neg]),
        IdentityPair(quad.integrate(quad.transform(lf), fh, sig, True), [-half, -(s - 0.5) * neg]),
        IdentityPair(quad.integrate(quad.transform(drift_lap), fh, sig, True), [(s + 1.0) * half]),
    ]


def lemma51_identities(f: ScalarField, tau: float, alpha1: float, epsilon: float):
    """The six weighted identities against ``H = |X|⁴(f - α1 e^{-τ} Δf)``.

    Left sides are direct inner products with ``H``; right sides are the
    closed combinations of weighted norms.  Returns six :class:`IdentityPair`.
    """
    g = f.grid
    a = alpha1 * np.exp(-tau)
    x1, x2 = g.coords
    r2 = g.r2
    r4 = r2**2
    lap = laplacian(f)
    H = ScalarField(g, r4 * (f.values - a * lap.values))
    grad_lap = (derivative(lap, 1), derivative(lap, 2))
    x_grad_lap = ScalarField(g, x1 * grad_lap[0].values + x2 * grad_lap[1].values)
    x_grad = ScalarField(g, x1 * derivative(f, 1).values + x2 * derivative(f, 2).values)
    bilap = laplacian(lap)

    n_x2f = _norm_sq(f, r4)
    n_xf = _norm_sq(f, r2)
    n_x2grad = _grad_sq(f, r4)
    n_x2lap = _norm_sq(lap, r4)
    n_xlap = _norm_sq(lap, r2)
    n_xgrad = _grad_sq(f, r2)
    n_x2gradlap = _norm_sq(grad_lap[0], r4) + _norm_sq(grad_lap[1], r4)
    cross = inner(x_grad_lap, ScalarField(g, r4 * f.values))
    eps = epsilon * np.exp(-tau)
    ea = epsilon * alpha1 * np.exp(-2 * tau)

    return [
        IdentityPair(inner(-f, H), [-n_x2f, 8 * a * n_xf, -a * n_x2grad]),
        IdentityPair(inner(-lap, H), [a * n_x2lap, -8 * n_xf, n_x2grad]),
        IdentityPair(inner(-0.5 * x_grad, H),
                     [1.5 * n_x2f, -24 * a * n_xf, 3 * a * n_x2grad, -0.5 * a * cross]),
        IdentityPair(inner(-operator_L(f), H),
                     [0.5 * n_x2f, (1 + 2 * a) * n_x2grad, a * n_x2lap, -(8 + 16 * a) * n_xf,
                      -0.5 * a * cross]),
        IdentityPair(inner(0.5 * a * x_grad_lap, H), [0.5 * a * cross, 1.5 * a**2 * n_x2lap]),
        IdentityPair(eps * inner(bilap, H),
                     [ea * n_x2gradlap, -8 * ea * n_xlap, eps * n_x2lap, -8 * eps * n_xgrad,
                      32 * eps * _norm_sq(f), -16 * eps * _norm_sq(x_grad)]),
    ]


def _window(x, window, frac):
    x = np.asarray(x, dtype=float)
    if window is None:
        lo = x[0] + frac * (x[-1] - x[0]) if len(x) else 0.0
        window = (lo, x[-1] if len(x) else 0.0)
    return window


def fit_slope(x, y, window=None, drop_frac: float = 0.3):
    """Least-squares line through ``(x, log y)`` on ``window``.

    Returns ``(slope, intercept, window, rms_residual)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    window = _window(x, window, drop_frac)
    lo, hi = window
    if not hi > lo:
        raise InsufficientSamples(f"empty window {window}")
    sel = (x >= lo) & (x <= hi)
    if sel.sum() < 8:
        raise InsufficientSamples(f"{int(sel.sum())} samples in window {window}; need >= 8")
    if np.any(y[sel] <= 0):
        raise NonPositiveValue("decay series must be positive in the fit window")
    xs, ly = x[sel], np.log(y[sel])
    design = np.column_stack([xs, np.ones_like(xs)])
    (slope, icpt), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * xs + icpt)
    return float(slope), float(icpt), (float(lo), float(hi)), float(np.sqrt(np.mean(resid**2)))


def fit_decay(series, window=None, drop_frac: float = 0.3) -> DecayFit:
    """Fit ``value ≈ C e^{-θ τ}``; by default drops the first 30% of the τ span."""
    data = np.asarray(list(series), dtype=float).reshape(-1, 2)
    slope, icpt, win, res = fit_slope(data[:, 0], data[:, 1], window, drop_frac)
    return DecayFit(theta_est=-slope, log_prefactor=icpt, window=win, residual=res)

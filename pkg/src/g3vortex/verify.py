"""Self-checks of the exact identities, grouped into suites.

Each check records the measured error next to its tolerance.  The ``verify``
subcommand runs :func:`run_all` and exits nonzero if anything fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biot_savart import (
    curl,
    curl_pressure_term,
    divergence,
    velocity_from_vorticity,
    weighted_velocity_identity_check,
)
from .diagnostics import lemma41_identities, lemma51_identities
from .grid import GridSpec, ScalarField, VectorField, derivative, laplacian
from .initial import WindowedNoise, gaussian_derivative, identity_catalog, random_bandlimited
from .norms import interpolation_inequality, l2, mass, weight_interpolation_check
from .oseen import (
    ScalingFrame,
    eval_oseen_G,
    eval_oseen_V,
    operator_L,
    oseen_G,
    oseen_V,
    to_scaled,
)

__all__ = ["Check", "SUITES", "run_suite", "run_all", "vortex_pair"]

GRID = GridSpec(256, 40.0)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.error) and self.error <= self.tol)


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _max(f) -> float:
    return float(np.abs(f.values if isinstance(f, ScalarField) else f).max())


def vortex_pair(grid: GridSpec, sigma: float = 1.5):
    """``G - G_σ`` with ``G_σ = G(x/σ)/σ²`` and its closed-form velocity ``V - V(x/σ)/σ``.

    The pair has zero circulation, so its velocity decays like a Gaussian and
    the periodic Biot-Savart law reproduces the whole-plane velocity.
    """
    x1, x2 = grid.coords
    w = oseen_G(x1, x2) - oseen_G(x1 / sigma, x2 / sigma) / sigma**2
    v1, v2 = oseen_V(x1, x2)
    s1, s2 = oseen_V(x1 / sigma, x2 / sigma)
    shape = (grid.n, grid.n)
    u = VectorField(ScalarField(grid, np.broadcast_to(v1 - s1 / sigma, shape)),
                    ScalarField(grid, np.broadcast_to(v2 - s2 / sigma, shape)))
    return ScalarField(grid, np.broadcast_to(w, shape)), u


def suite_field_algebra(seed: int = 11) -> list[Check]:
    out = []
    worst = {}
    for i in range(100):
        f = GRID.sample(WindowedNoise.draw(seed + i, sigma=1.0 + 0.02 * i))
        for p in (1.0, 2.0, 4.0):
            ok = weight_interpolation_check(f, p)
            worst[p] = worst.get(p, 0.0) + (0.0 if ok else 1.0)
    for p, bad in worst.items():
        out.append(Check("field_algebra", f"weight interpolation p={p:g} (failures of 100)", bad, 0.0))
    rng = np.random.default_rng(seed)
    small = GridSpec(64, 2 * np.pi)
    for theta in (0.1, 0.5, 0.9):
        excess = -np.inf
        for _ in range(100):
            f = random_bandlimited(small, rng, k_max=int(rng.integers(1, 20)))
            lhs, rhs = interpolation_inequality(f, theta)
            excess = max(excess, (lhs - rhs) / rhs)
        out.append(Check("field_algebra", f"interpolation inequality theta={theta} (max (lhs-rhs)/rhs)",
                         max(excess, 0.0), 0.0))
    return out


def suite_biot_savart(seed: int = 12) -> list[Check]:
    out = []
    rng = np.random.default_rng(seed)
    div_err = curl_err = press_err = 0.0
    for _ in range(10):
        w = random_bandlimited(GRID, rng, k_max=24)
        u = velocity_from_vorticity(w)
        div_err = max(div_err, l2(divergence(u)) / l2(w))
        curl_err = max(curl_err, _max(curl(u) - w) / _max(w))
        q = curl_pressure_term(u)
        c = curl(q)
        scale = l2(derivative(q.c2, 1)) + l2(derivative(q.c1, 2))
        press_err = max(press_err, l2(c) / scale)
    out.append(Check("biot_savart", "div of Biot-Savart velocity", div_err, 1e-12))
    out.append(Check("biot_savart", "curl of Biot-Savart velocity equals w", curl_err, 1e-10))
    out.append(Check("biot_savart", "curl(A.Lap u + 2 div(L L^t)) vanishes", press_err, 1e-8))

    w, u_exact = vortex_pair(GRID)
    u = velocity_from_vorticity(w)
    err = max(_max(u.c1 - u_exact.c1), _max(u.c2 - u_exact.c2))
    out.append(Check("biot_savart", "velocity of zero-circulation Oseen pair matches closed form", err, 1e-6))
    out.append(Check("biot_savart", "curl of closed-form pair velocity equals pair vorticity",
                     _max(curl(u_exact) - w), 1e-6))

    lhs, rhs = weighted_velocity_identity_check(gaussian_derivative(GRID, 1, 0))
    out.append(Check("biot_savart", "weighted velocity identity for d1 G", _rel(lhs, rhs), 1e-8))
    worst = 0.0
    for i in range(20):
        f = GRID.sample(WindowedNoise.draw(100 + i))
        lhs, rhs = weighted_velocity_identity_check(f)
        worst = max(worst, _rel(lhs, rhs))
    out.append(Check("biot_savart", "weighted velocity identity, 20 windowed fields", worst, 1e-6))
    return out


def suite_oseen_frame() -> list[Check]:
    out = []
    G = eval_oseen_G(GRID)
    out.append(Check("oseen_frame", "mass of G is one", abs(mass(G) - 1.0), 1e-12))
    out.append(Check("oseen_frame", "L(G) vanishes", _max(operator_L(G)), 1e-10))
    d1 = gaussian_derivative(GRID, 1, 0)
    out.append(Check("oseen_frame", "L(d1 G) = -d1 G / 2", _max(operator_L(d1) + 0.5 * d1), 1e-9))
    worst = 0.0
    for k in ((2, 0), (1, 1), (0, 2)):
        h = gaussian_derivative(GRID, *k)
        worst = max(worst, _max(operator_L(h) + h))
    out.append(Check("oseen_frame", "L(d_i d_j G) = -d_i d_j G", worst, 1e-8))

    V = eval_oseen_V(GRID)
    grad = (derivative(G, 1), derivative(G, 2))
    gnorm = max(_max(grad[0]), _max(grad[1]))
    adv = V.c1 * grad[0] + V.c2 * grad[1]
    out.append(Check("oseen_frame", "V.grad G vanishes", _max(adv) / gnorm, 1e-10))
    lap = laplacian(G)
    gl = (derivative(lap, 1), derivative(lap, 2))
    adv = V.c1 * gl[0] + V.c2 * gl[1]
    out.append(Check("oseen_frame", "V.grad Lap G vanishes", _max(adv) / max(_max(gl[0]), _max(gl[1])), 1e-10))
    rng = np.random.default_rng(13)
    p = rng.uniform(-10, 10, (2, 1000))
    v1, v2 = oseen_V(p[0], p[1])
    out.append(Check("oseen_frame", "V(X).X vanishes at 1000 points", float(np.abs(v1 * p[0] + v2 * p[1]).max()), 1e-15))

    target = GridSpec(256, 32.0)
    worst = 0.0
    for t, T in ((0.0, 1.0), (0.5, 2.0), (1.0, 1.5)):
        w = GRID.sample(lambda a, b: oseen_G(a / 1.3, b / 1.3) / 1.69 + 0.1 * WindowedNoise.draw(5)(a, b))
        W = to_scaled(w, t, ScalingFrame(T), target)
        worst = max(worst, abs(mass(W) - mass(w)) / abs(mass(w)))
    out.append(Check("oseen_frame", "to_scaled preserves mass", worst, 1e-10))
    return out


def suite_diagnostics() -> list[Check]:
    out = []
    catalog = identity_catalog(GRID)
    w41 = w51 = 0.0
    for _, f in catalog:
        for s in (0.5, 0.75, 0.9):
            w41 = max([w41] + [p.rel_error for p in lemma41_identities(f, s)])
        for tau in (0.0, 1.0):
            for a in (0.0, 0.5):
                for eps in (0.0, 1e-2):
                    w51 = max([w51] + [p.rel_error for p in lemma51_identities(f, tau, a, eps)])
    out.append(Check("diagnostics", f"fractional identities, {len(catalog)} fields", w41, 1e-6))
    out.append(Check("diagnostics", f"weighted |X|^4 identities, {len(catalog)} fields", w51, 1e-6))
    return out


SUITES = {
    "field_algebra": suite_field_algebra,
    "biot_savart": suite_biot_savart,
    "oseen_frame": suite_oseen_frame,
    "diagnostics": suite_diagnostics,
}


def run_suite(name: str) -> list[Check]:
    return SUITES[name]()


def run_all(names=None) -> dict[str, list[Check]]:
    return {name: run_suite(name) for name in (names or SUITES)}

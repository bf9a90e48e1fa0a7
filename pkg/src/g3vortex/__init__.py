"""Pseudo-spectral simulation and verification of 2D third-grade fluid vortices.

The dynamics run in physical variables on a periodic box; convergence to the
Oseen vortex is measured in self-similar variables through :func:`to_scaled`.
"""

from .biot_savart import curl, divergence, velocity_from_vorticity, weighted_velocity_identity_check
from .config import ConfigError, RunConfig, parse_config, serialize
from .diagnostics import DecayFit, EnergySnapshot, energies, fit_decay, theorem_lhs
from .dynamics import FluidParams, SimState, StepTooLarge, UnstableStep, rhs_vorticity, step
from .grid import GridSpec, ScalarField, VectorField, dealias_product, derivative, helmholtz_inverse
from .norms import MeanNotZero, fractional_neg_laplacian, mass, weighted_l2
from .oseen import OutOfDomain, ScalingFrame, decompose, eval_oseen_G, eval_oseen_V, operator_L, to_scaled
from .simulation import Trajectory, simulate

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DecayFit", "EnergySnapshot", "FluidParams", "GridSpec", "MeanNotZero",
    "OutOfDomain", "RunConfig", "ScalarField", "ScalingFrame", "SimState", "StepTooLarge",
    "Trajectory", "UnstableStep", "VectorField", "curl", "dealias_product", "decompose",
    "derivative", "divergence", "energies", "eval_oseen_G", "eval_oseen_V", "fit_decay",
    "fractional_neg_laplacian", "helmholtz_inverse", "mass", "operator_L", "parse_config",
    "rhs_vorticity", "serialize", "simulate", "step", "theorem_lhs", "to_scaled",
    "velocity_from_vorticity", "weighted_l2", "weighted_velocity_identity_check",
]

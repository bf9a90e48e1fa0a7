"""Run orchestration: initial data, time loop, sampling and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import initial
from .config import RunConfig
from .diagnostics import EnergySnapshot, corollary_errors, energies
from .dynamics import SimState, regrid, step
from .io import read_checkpoint
from .oseen import to_scaled

__all__ = ["Trajectory", "initial_state", "snapshot", "simulate"]


@dataclass
class Trajectory:
    """Sampled states with their diagnostics, in time order."""

    config: RunConfig
    states: list[SimState] = field(default_factory=list)
    snapshots: list[EnergySnapshot] = field(default_factory=list)
    steps: int = 0
    regrids: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.snapshots)

    def column(self, name: str) -> np.ndarray:
        if name in ("l1", "l2", "velocity_lq"):
            return np.array([s.lp_errors[name] for s in self.snapshots])
        return np.array([getattr(s, name) for s in self.snapshots])


def initial_state(cfg: RunConfig) -> SimState:
    ini = cfg.initial
    params, frame = cfg.params(), cfg.frame()
    if ini.kind == "file":
        loaded = read_checkpoint(ini.path)
        return SimState(loaded.w, loaded.t, params, frame)
    grid = cfg.grid_spec()
    if ini.kind == "gaussian":
        w = initial.gaussian(grid, ini.amplitude, ini.sigma)
    elif ini.kind == "oseen":
        w = initial.oseen(grid, ini.eta, frame.T)
    else:
        w = initial.perturbed_oseen(grid, ini.eta, frame.T, ini.amplitude, ini.seed)
    return SimState(w, 0.0, params, frame)


def snapshot(state: SimState, cfg: RunConfig) -> EnergySnapshot:
    """Diagnostics of one state: scaled energies plus the unscaled profile errors."""
    d = cfg.diagnostics
    W = to_scaled(state.w, state.t, state.frame, cfg.scaled_grid(), tol=d.outside_tol)
    tau = state.frame.tau(state.t)
    snap = energies(W, tau, state.params, d.theta, d.K, t=state.t)
    lp = {
        "l1": corollary_errors(state.w, state.t, state.frame, state.params, 1.0),
        "l2": corollary_errors(state.w, state.t, state.frame, state.params, 2.0),
        "velocity_lq": corollary_errors(state.w, state.t, state.frame, state.params, d.velocity_q,
                                        kind="velocity"),
    }
    return replace(snap, lp_errors=lp)


def simulate(cfg: RunConfig, progress=None) -> Trajectory:
    """Integrate from the configured initial data to ``run.t_end``.

    A sample is taken initially, every ``run.sample_every`` steps and at the
    final time.  ``progress``, if given, is called with each new state.
    """
    r = cfg.run
    state = initial_state(cfg)
    traj = Trajectory(cfg)

    def record(s):
        traj.states.append(s)
        traj.snapshots.append(snapshot(s, cfg))
        if progress is not None:
            progress(s)

    def cover(s):
        if r.regrid_cover > 0:
            while 0.5 * s.grid.length < r.regrid_cover * np.sqrt(s.t + s.frame.T):
                s = regrid(s)
                traj.regrids.append(s.t)
        return s

    state = cover(state)
    record(state)
    t_end = r.t_end
    tiny = 1e-12 * max(1.0, abs(t_end))
    while t_end - state.t > tiny:
        state = cover(state)
        dt = r.dt
        if r.schedule == "self_similar":
            dt *= (state.t + state.frame.T) / state.frame.T
        remaining = t_end - state.t
        final = dt >= remaining - tiny
        state = step(state, remaining if final else dt, r.c_cfl)
        if final:
            state = replace(state, t=t_end)
        traj.steps += 1
        if traj.steps % r.sample_every == 0 or final:
            record(state)
    return traj

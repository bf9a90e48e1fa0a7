"""Run configuration: a nested YAML document with validated defaults.

Sections and keys (defaults in parentheses)::

    grid:        n (256), length (40.0)
    fluid:       nu (1.0), alpha1 (0.1), alpha2 (0.0), beta (0.05), epsilon (0.0)
    scaling:     T (2.0)
    run:         t_end (1.0), dt (0.001), sample_every (100), schedule (fixed),
                 c_cfl (0.5), regrid_cover (0.0)
    diagnostics: theta (0.8), K (200.0), fit_window_frac (0.3), velocity_q (4.0),
                 scaled_n (128), scaled_length (24.0), outside_tol (1e-14)
    initial:     kind (perturbed_oseen), eta (1.0), amplitude (0.01), sigma (1.0),
                 seed (1), path (null)
    output:      dir (out), write_checkpoints (false)

``run.schedule = self_similar`` grows the step as ``dt (t+T)/T``, which keeps
the step uniform in ``τ``.  ``run.regrid_cover > 0`` doubles the box whenever
its half-width drops below ``regrid_cover √(t+T)``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields

import yaml

from .dynamics import FluidParams
from .grid import GridSpec
from .oseen import ScalingFrame

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "serialize",
    "load_config",
    "apply_overrides",
    "INITIAL_KINDS",
]

INITIAL_KINDS = ("gaussian", "oseen", "perturbed_oseen", "file")
SCHEDULES = ("fixed", "self_similar")


class ConfigError(ValueError):
    """Validation failure; ``key`` is the dotted path of the offending entry."""

    def __init__(self, key: str, msg: str):
        super().__init__(f"{key}: {msg}")
        self.key = key


@dataclass(frozen=True)
class GridSection:
    n: int = 256
    length: float = 40.0


@dataclass(frozen=True)
class FluidSection:
    nu: float = 1.0
    alpha1: float = 0.1
    alpha2: float = 0.0
    beta: float = 0.05
    epsilon: float = 0.0


@dataclass(frozen=True)
class ScalingSection:
    T: float = 2.0


@dataclass(frozen=True)
class RunSection:
    t_end: float = 1.0
    dt: float = 1e-3
    sample_every: int = 100
    schedule: str = "fixed"
    c_cfl: float = 0.5
    regrid_cover: float = 0.0


@dataclass(frozen=True)
class DiagnosticsSection:
    theta: float = 0.8
    K: float = 200.0
    fit_window_frac: float = 0.3
    velocity_q: float = 4.0
    scaled_n: int = 128
    scaled_length: float = 24.0
    outside_tol: float = 1e-14


@dataclass(frozen=True)
class InitialSection:
    kind: str = "perturbed_oseen"
    eta: float = 1.0
    amplitude: float = 0.01
    sigma: float = 1.0
    seed: int = 1
    path: str | None = None


@dataclass(frozen=True)
class OutputSection:
    dir: str = "out"
    write_checkpoints: bool = False


@dataclass(frozen=True)
class RunConfig:
    grid: GridSection = field(default_factory=GridSection)
    fluid: FluidSection = field(default_factory=FluidSection)
    scaling: ScalingSection = field(default_factory=ScalingSection)
    run: RunSection = field(default_factory=RunSection)
    diagnostics: DiagnosticsSection = field(default_factory=DiagnosticsSection)
    initial: InitialSection = field(default_factory=InitialSection)
    output: OutputSection = field(default_factory=OutputSection)

    def grid_spec(self) -> GridSpec:
        return GridSpec(self.grid.n, self.grid.length)

    def scaled_grid(self) -> GridSpec:
        return GridSpec(self.diagnostics.scaled_n, self.diagnostics.scaled_length)

    def params(self) -> FluidParams:
        return FluidParams(**dataclasses.asdict(self.fluid))

    def frame(self) -> ScalingFrame:
        return ScalingFrame(self.scaling.T)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **sections) -> "RunConfig":
        """Update individual keys, e.g. ``cfg.replace(run={"t_end": 2.0})``."""
        data = self.to_dict()
        for sec, vals in sections.items():
            if sec not in data:
                raise ConfigError(sec, "unknown section")
            data[sec].update(vals)
        return parse_config(data)


def _coerce(key: str, value, default):
    kind = type(default)
    if default is None:
        if value is None or isinstance(value, str):
            return value
        raise ConfigError(key, f"expected a string or null, got {value!r}")
    if kind is bool:
        if isinstance(value, bool):
            return value
        raise ConfigError(key, f"expected true/false, got {value!r}")
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    if kind is float:
        # YAML 1.1 reads "1e-3" (no dot) as a string
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        return float(value)
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(key, f"expected a string, got {value!r}")
        return value
    raise ConfigError(key, "unsupported type")


def _check(cfg: RunConfig):
    def need(key, ok, msg):
        if not ok:
            raise ConfigError(key, msg)

    g, fl, r, d, ini = cfg.grid, cfg.fluid, cfg.run, cfg.diagnostics, cfg.initial
    need("grid.n", g.n >= 16 and g.n % 2 == 0, "must be even and >= 16")
    need("grid.length", g.length > 0, "must be > 0")
    need("fluid.nu", fl.nu > 0, "must be > 0")
    for name in ("alpha1", "beta", "epsilon"):
        need(f"fluid.{name}", getattr(fl, name) >= 0, "must be >= 0")
    need("scaling.T", cfg.scaling.T >= 1, "must be >= 1")
    need("run.t_end", r.t_end >= 0, "must be >= 0")
    need("run.dt", r.dt > 0, "must be > 0")
    need("run.sample_every", r.sample_every >= 1, "must be >= 1")
    need("run.schedule", r.schedule in SCHEDULES, f"must be one of {SCHEDULES}")
    need("run.c_cfl", r.c_cfl > 0, "must be > 0")
    need("run.regrid_cover", r.regrid_cover >= 0, "must be >= 0")
    need("diagnostics.theta", 0 < d.theta < 1, "must lie in (0, 1)")
    need("diagnostics.K", d.K > 0, "must be > 0")
    need("diagnostics.fit_window_frac", 0 <= d.fit_window_frac < 1, "must lie in [0, 1)")
    need("diagnostics.velocity_q", d.velocity_q > 2, "must be > 2")
    need("diagnostics.scaled_n", d.scaled_n >= 16 and d.scaled_n % 2 == 0, "must be even and >= 16")
    need("diagnostics.scaled_length", d.scaled_length > 0, "must be > 0")
    need("diagnostics.outside_tol", d.outside_tol >= 0, "must be >= 0")
    need("initial.kind", ini.kind in INITIAL_KINDS, f"must be one of {INITIAL_KINDS}")
    need("initial.sigma", ini.sigma > 0, "must be > 0")
    need("initial.amplitude", ini.amplitude >= 0, "must be >= 0")
    need("initial.seed", ini.seed >= 0, "must be >= 0")
    need("initial.path", ini.kind != "file" or bool(ini.path), "required when kind is file")


def parse_config(doc) -> RunConfig:
    """Build a validated :class:`RunConfig` from YAML text or a mapping."""
    if isinstance(doc, str):
        try:
            doc = yaml.safe_load(doc)
        except yaml.YAMLError as exc:
            raise ConfigError("<document>", f"malformed YAML: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "top level must be a mapping")
    sections = {f.name: f for f in fields(RunConfig)}
    built = {}
    for name, value in doc.items():
        if name not in sections:
            raise ConfigError(str(name), "unknown section")
        if value is None:
            value = {}
        if not isinstance(value, dict):
            raise ConfigError(name, "section must be a mapping")
        cls = sections[name].default_factory
        defaults = cls()
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, v in value.items():
            dotted = f"{name}.{key}"
            if key not in known:
                raise ConfigError(dotted, "unknown key")
            kwargs[key] = _coerce(dotted, v, getattr(defaults, key))
        built[name] = cls(**kwargs)
    cfg = RunConfig(**built)
    _check(cfg)
    return cfg


def serialize(cfg: RunConfig) -> str:
    """Complete YAML form of ``cfg``; ``parse_config`` inverts it exactly."""
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)


def apply_overrides(doc: dict | None, overrides) -> dict:
    """Merge ``section.key=value`` strings into a raw document."""
    out = {k: dict(v or {}) for k, v in (doc or {}).items()}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like section.key=value")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        if len(parts) != 2 or not all(parts):
            raise ConfigError(key, "override key must be section.key")
        out.setdefault(parts[0], {})[parts[1]] = yaml.safe_load(raw) if raw.strip() else None
    return out


def load_config(path: str | None = None, overrides=()) -> RunConfig:
    doc = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        except yaml.YAMLError as exc:
            raise ConfigError("--config", f"malformed YAML: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("<document>", "top level must be a mapping")
    return parse_config(apply_overrides(doc, overrides))

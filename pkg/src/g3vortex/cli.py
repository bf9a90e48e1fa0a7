"""Command-line entry point: ``g3vortex {run,verify,fit,resample,norms}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config, serialize
from .diagnostics import InsufficientSamples, NonPositiveValue, fit_decay
from .dynamics import SimState, StepTooLarge, UnstableStep
from .grid import GridSpec
from .io import CheckpointError, read_checkpoint, read_csv, write_checkpoint, write_csv
from .norms import mass, weighted_norms
from .oseen import OutOfDomain, to_scaled

__all__ = ["main", "build_parser"]


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="YAML run configuration")
    p.add_argument("--output", metavar="DIR", help="output directory (overrides output.dir)")
    p.add_argument("overrides", nargs="*", metavar="section.key=value", help="configuration overrides")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="g3vortex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate and write diagnostics CSV and checkpoints")
    _common(p)

    p = sub.add_parser("verify", help="run the identity suites; nonzero exit on any failure")
    p.add_argument("--suite", action="append", help="restrict to a suite (repeatable)")
    _common(p)

    p = sub.add_parser("fit", help="fit exp(-theta tau) to a diagnostics CSV column")
    p.add_argument("csv", help="diagnostics CSV")
    p.add_argument("--column", default="theorem_lhs")
    p.add_argument("--window", nargs=2, type=float, metavar=("TAU_A", "TAU_B"))
    _common(p)

    p = sub.add_parser("resample", help="checkpoint to scaled-variable checkpoint")
    p.add_argument("checkpoint")
    _common(p)

    p = sub.add_parser("norms", help="weighted-norm report of a checkpoint")
    p.add_argument("checkpoint")
    _common(p)
    return parser


def _config(args):
    overrides = list(args.overrides)
    if args.output:
        overrides.append(f"output.dir={args.output}")
    return load_config(args.config, overrides)


def _out_dir(cfg) -> Path:
    out = Path(cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    from .simulation import simulate

    cfg = _config(args)
    out = _out_dir(cfg)
    traj = simulate(cfg)
    (out / "config.yaml").write_text(serialize(cfg), encoding="utf-8")
    write_csv(out / "diagnostics.csv", traj.snapshots)
    if cfg.output.write_checkpoints:
        for i, state in enumerate(traj.states):
            write_checkpoint(out / f"checkpoint_{i:05d}.g3w", state)
    write_checkpoint(out / "final.g3w", traj.states[-1])
    last = traj.snapshots[-1]
    print(f"{traj.steps} steps, {len(traj)} samples, tau={last.tau:.6g}, "
          f"theorem_lhs={last.theorem_lhs:.6e}, output in {out}")
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, run_all

    for name in args.suite or ():
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results = run_all(args.suite)
    failed = 0
    for name, checks in results.items():
        bad = [c for c in checks if not c.passed]
        failed += len(bad)
        print(f"{name}: {len(checks) - len(bad)}/{len(checks)} passed")
        for c in bad:
            print(f"  FAIL {c.name}: error {c.error:.3e} > tol {c.tol:.1e}")
    return 1 if failed else 0


def cmd_fit(args) -> int:
    cfg = _config(args)
    cols = read_csv(args.csv)
    if args.column not in cols:
        raise ValueError(f"column {args.column!r} not in {args.csv}")
    fit = fit_decay(zip(cols["tau"], cols[args.column]), window=args.window,
                    drop_frac=cfg.diagnostics.fit_window_frac)
    print(json.dumps(fit.as_dict()))
    return 0


def cmd_resample(args) -> int:
    cfg = _config(args)
    state = read_checkpoint(args.checkpoint)
    W = to_scaled(state.w, state.t, state.frame, cfg.scaled_grid(), tol=cfg.diagnostics.outside_tol)
    out = _out_dir(cfg) / (Path(args.checkpoint).stem + "_scaled.g3w")
    write_checkpoint(out, SimState(W, state.t, state.params, state.frame))
    print(f"tau={state.frame.tau(state.t):.6g}, mass={mass(W):.17g}, written to {out}")
    return 0


def cmd_norms(args) -> int:
    state = read_checkpoint(args.checkpoint)
    g: GridSpec = state.grid
    report = {"n": g.n, "length": g.length, "t": state.t, "mass": mass(state.w)}
    for m in (0, 1, 2):
        wn = weighted_norms(state.w, m)
        report[f"m{m}"] = {"l2m": wn.l2m, "h1m": wn.h1m, "h2m": wn.h2m, "terms": wn.terms}
    report["moments"] = weighted_norms(state.w, 0).weights
    print(json.dumps(report, default=float))
    return 0


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "fit": cmd_fit, "resample": cmd_resample,
            "norms": cmd_norms}

_EXPECTED = (ConfigError, CheckpointError, OSError, ValueError, UnstableStep, StepTooLarge,
             OutOfDomain, InsufficientSamples, NonPositiveValue)


def main(argv=None) -> int:
    parser = build_parser()
    # overrides may follow options that come after a positional argument
    args, extra = parser.parse_known_args(argv)
    stray = [e for e in extra if e.startswith("-") or "=" not in e]
    if stray:
        parser.error(f"unrecognized arguments: {' '.join(stray)}")
    args.overrides = list(getattr(args, "overrides", [])) + extra
    try:
        return COMMANDS[args.command](args)
    except _EXPECTED as exc:
        print(f"g3vortex {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

import json
import subprocess
import sys

import numpy as np
import pytest

from g3vortex.cli import build_parser, main
from g3vortex.io import read_checkpoint, read_csv

SMALL = ["grid.n=64", "grid.length=24", "diagnostics.scaled_n=64", "diagnostics.scaled_length=16"]


def test_parser_has_subcommands():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == {"run", "verify", "fit", "resample", "norms"}


def test_run_zero_time(tmp_path, capsys):
    assert main(["run", "--output", str(tmp_path), "run.t_end=0", *SMALL]) == 0
    cols = read_csv(tmp_path / "diagnostics.csv")
    assert cols["tau"].shape == (1,)
    assert (tmp_path / "config.yaml").exists()
    assert read_checkpoint(tmp_path / "final.g3w").t == 0.0
    assert "0 steps" in capsys.readouterr().out


def test_run_writes_checkpoints(tmp_path):
    args = ["run", "--output", str(tmp_path), "run.t_end=0.02", "run.dt=0.01", "run.sample_every=1",
            "output.write_checkpoints=true", *SMALL]
    assert main(args) == 0
    assert sorted(p.name for p in tmp_path.glob("checkpoint_*.g3w")) == [
        "checkpoint_00000.g3w", "checkpoint_00001.g3w", "checkpoint_00002.g3w"]


def test_run_with_config_file(tmp_path):
    cfgfile = tmp_path / "c.yaml"
    cfgfile.write_text("grid:\n  n: 64\n  length: 24\ndiagnostics:\n  scaled_n: 64\n  scaled_length: 16\n"
                       "run:\n  t_end: 0\n")
    assert main(["run", "--config", str(cfgfile), "--output", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "diagnostics.csv").exists()


def test_fit_synthetic(tmp_path, capsys):
    tau = np.linspace(0, 5, 60)
    lines = ["tau,theorem_lhs"] + [f"{t:.17g},{3 * np.exp(-0.9 * t):.17g}" for t in tau]
    (tmp_path / "d.csv").write_text("\n".join(lines) + "\n")
    assert main(["fit", str(tmp_path / "d.csv")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["theta_est"] == pytest.approx(0.9, abs=1e-9)
    assert out["window"] == pytest.approx([1.5, 5.0])


def test_fit_window_and_column(tmp_path, capsys):
    tau = np.linspace(0, 5, 60)
    lines = ["tau,theorem_lhs,E7"] + [f"{t:.17g},1.0,{np.exp(-2 * t):.17g}" for t in tau]
    (tmp_path / "d.csv").write_text("\n".join(lines) + "\n")
    assert main(["fit", str(tmp_path / "d.csv"), "--column", "E7", "--window", "0", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["theta_est"] == pytest.approx(2.0, abs=1e-9)


def test_resample_and_norms(tmp_path, capsys):
    assert main(["run", "--output", str(tmp_path), "run.t_end=0", *SMALL]) == 0
    capsys.readouterr()
    assert main(["resample", str(tmp_path / "final.g3w"), "--output", str(tmp_path), *SMALL]) == 0
    scaled = read_checkpoint(tmp_path / "final_scaled.g3w")
    assert scaled.grid.n == 64 and scaled.grid.length == 16.0
    capsys.readouterr()
    assert main(["norms", str(tmp_path / "final.g3w")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["n"] == 64
    assert report["mass"] == pytest.approx(1.0, abs=1e-8)
    assert report["m0"]["l2m"] <= report["m2"]["l2m"]


@pytest.mark.parametrize("argv", [
    ["run", "fluid.alpha1=-1"],
    ["run", "nokey"],
    ["norms", "/nonexistent/file.g3w"],
    ["fit", "/nonexistent/file.csv"],
    ["verify", "--suite", "nope"],
])
def test_errors_exit_nonzero(argv, capsys):
    assert main(argv) == 2
    err = capsys.readouterr().err
    assert err.startswith(f"g3vortex {argv[0]}:") and err.count("\n") == 1


def test_fit_too_few_samples(tmp_path):
    (tmp_path / "d.csv").write_text("tau,theorem_lhs\n0,1\n1,0.5\n")
    assert main(["fit", str(tmp_path / "d.csv")]) == 2


def test_verify_subset(capsys):
    assert main(["verify", "--suite", "oseen_frame"]) == 0
    assert capsys.readouterr().out.startswith("oseen_frame: 8/8 passed")


def test_console_module():
    out = subprocess.run([sys.executable, "-m", "g3vortex.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "resample" in out.stdout

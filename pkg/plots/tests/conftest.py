import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "cartpend.cli"]


def run_cartpend(*args):
    proc = subprocess.run([*CLI, *args], capture_output=True, text=True)
    assert proc.returncode == 0, f"cartpend {' '.join(args)} failed: {proc.stderr}"
    return proc


@pytest.fixture(scope="session")
def cli_outputs(tmp_path_factory):
    """Real cartpend CLI artifacts: three trajectory CSVs and two sweep JSONs."""
    root = tmp_path_factory.mktemp("cli-outputs")
    csvs = {}
    for name in ("x_u", "x_c", "x_s"):
        csv = root / f"{name}.csv"
        run_cartpend(
            "simulate", "--plant", "linearized", "--initial", name,
            "--t-final", "5", "--csv", str(csv), "--json", str(root / f"{name}.json"),
        )
        csvs[name] = csv

    zero_csv = root / "zero.csv"
    run_cartpend(
        "simulate", "--initial", "0,0,0,0", "--t-final", "1",
        "--csv", str(zero_csv), "--json", str(root / "zero.json"),
    )

    sweeps = {}
    for flag, name in (("--redesign", "redesigned"), ("--no-redesign", "fixed")):
        out = root / f"sweep_{name}.json"
        run_cartpend(
            "sweep", "--Ts", "0.1,0.2,0.5", flag, "--t-final", "3", "--json", str(out),
        )
        sweeps[name] = out

    return {"csvs": csvs, "zero_csv": zero_csv, "sweeps": sweeps, "root": root}


@pytest.fixture
def bad_sweep(tmp_path):
    """Structurally valid summary whose sweep table is empty."""
    path = tmp_path / "empty_sweep.json"
    path.write_text(
        json.dumps(
            {
                "config": {},
                "system": None,
                "gains": None,
                "metrics": {"redesign": True, "sweep": []},
                "residuals": None,
            }
        )
    )
    return path

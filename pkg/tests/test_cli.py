import csv
import json
import math
import os
import re
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from phason import cli, dynamics
from phason.cli import EXIT_BUDGET, EXIT_NUMERICAL, EXIT_OK, EXIT_REGIME, EXIT_VALIDATION, run

SNAPSHOTS = Path(__file__).parent / "snapshots"
COMMANDS = ["evolve", "gate-extract", "dressed", "plan", "qft", "sweep", "constants"]
UNIT_SUFFIXES = ("-s", "-nm", "-um", "-cm", "-rad", "-rad-s", "-v-m")
DIMENSIONLESS = {
    "--carrier-ratio", "--n-photons", "--n-qubits", "--tol", "--samples", "--refraction", "--edge-fraction",
    "--cap", "--workers",
}
NON_NUMERIC = {
    "--help", "--config", "--out", "--strict", "--method", "--state", "--envelope", "--scenario",
    "--scenario-file", "--chain", "--report", "--verify", "--format", "--x", "--y", "--outputs",
}


def ok(argv):
    code, out, err = run(argv)
    assert code == EXIT_OK, err
    return out


def table(text):
    rows = [line for line in text.split("\r\n") if line and not line.startswith("#")]
    return list(csv.DictReader(rows))


def payload(argv):
    data = json.loads(ok(argv))
    assert data["schema"] == "phason/1"
    return data


def help_text(command, monkeypatch):
    monkeypatch.setenv("COLUMNS", "100")
    parser = cli.build_parser()
    sub = next(a for a in parser._actions if a.dest == "command").choices[command]
    return sub.format_help()


# help and flag naming

@pytest.mark.parametrize("command", COMMANDS)
def test_help_snapshot(command, monkeypatch):
    text = help_text(command, monkeypatch)
    snap = SNAPSHOTS / f"help_{command}.txt"
    if os.environ.get("PHASON_UPDATE_SNAPSHOTS"):
        snap.write_text(text)
    assert text == snap.read_text()
    assert "Precedence: flags > --config JSON file > built-in defaults." in " ".join(text.split())


@pytest.mark.parametrize("command", COMMANDS)
def test_every_physical_flag_has_a_unit(command, monkeypatch):
    flags = set(re.findall(r"(--[a-z][a-z0-9-]*)", help_text(command, monkeypatch)))
    for flag in flags - NON_NUMERIC:
        assert flag in DIMENSIONLESS or flag.endswith(UNIT_SUFFIXES), flag


def test_unsuffixed_and_abbreviated_flags_rejected():
    code, _, err = run(["plan", "--t0", "1e-7", "--theta-rad", "1", "--spot-um", "3"])
    assert code == EXIT_VALIDATION and "--t0" in err
    code, _, _ = run(["plan", "--theta", "1", "--spot-um", "3", "--t0-s", "1e-7"])
    assert code == EXIT_VALIDATION


# evolve

def test_evolve_identity_trajectory():
    rows = table(ok(["evolve", "--method", "rwa-resonant", "--theta-rad", "0", "--state", "+", "--samples", "5"]))
    assert len(rows) == 5
    for r in rows:
        assert float(r["re_c0"]) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert float(r["re_c1"]) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert float(r["im_c0"]) == 0 and float(r["im_c1"]) == 0


def test_evolve_csv_format():
    text = ok(["evolve", "--method", "rwa-resonant", "--theta-rad", "1", "--samples", "3"])
    lines = text.split("\r\n")
    assert lines[0] == "# schema: phason/1"
    assert lines[1] == ",".join(dynamics.Trajectory.CSV_COLUMNS)
    assert re.fullmatch(r"-?\d\.\d{16}e[+-]\d{2}", lines[3].split(",")[1])


def test_evolve_ode_agrees_with_closed_form():
    common = ["--lambda-nm", "472.3", "--dipole-cm", "6e-10", "--carrier-ratio", "1e4", "--theta-rad", str(math.pi / 2)]
    ode = table(ok(["evolve", "--method", "ode", *common]))[-1]
    rwa = table(ok(["evolve", "--method", "rwa-resonant", *common, "--samples", "11"]))[-1]
    vec = lambda r: np.array([float(r["re_c0"]) + 1j * float(r["im_c0"]), float(r["re_c1"]) + 1j * float(r["im_c1"])])
    assert abs(np.vdot(vec(ode), vec(rwa))) ** 2 >= 1 - 1e-3


def test_evolve_detuned_with_system():
    rows = table(ok([
        "evolve", "--method", "rwa-detuned", "--omega1-rad-s", "1e6", "--dipole-cm", "1e-9",
        "--amplitude-v-m", "1e3", "--duration-s", "1e-3", "--delta-rad-s", "1e5", "--samples", "4",
    ]))
    assert len(rows) == 4
    assert all(abs(float(r["pop0"]) + float(r["pop1"]) - 1) < 1e-12 for r in rows)


def test_evolve_missing_flag_named():
    code, _, err = run(["evolve", "--method", "ode", "--lambda-nm", "472.3", "--carrier-ratio", "1e3", "--theta-rad", "1"])
    assert code == EXIT_VALIDATION and "--dipole-cm" in err
    code, _, err = run(["evolve", "--theta-rad", "1"])
    assert code == EXIT_VALIDATION and "--method" in err


def test_evolve_regime_warning_and_strict():
    args = ["evolve", "--method", "rwa-resonant", "--lambda-nm", "472.3", "--dipole-cm", "6e-10",
            "--carrier-ratio", "10", "--theta-rad", "1", "--samples", "3"]
    proc = subprocess.run([sys.executable, "-m", "phason.cli", *args], capture_output=True, text=True)
    assert proc.returncode == 0 and "warning" in proc.stderr
    assert proc.stdout.startswith("# schema: phason/1")
    code, _, err = run([*args, "--strict"])
    assert code == EXIT_REGIME and "resonant" in err


def test_numerical_failure_exit(monkeypatch):
    def boom(*a, **k):
        raise dynamics.IntegrationError("step size underflow", 1e-9)

    monkeypatch.setattr(dynamics, "evolve_full", boom)
    code, _, err = run(["evolve", "--method", "ode", "--lambda-nm", "472.3", "--dipole-cm", "6e-10",
                        "--carrier-ratio", "100", "--theta-rad", "1"])
    assert code == EXIT_NUMERICAL and "reached t" in err


# gate-extract

def test_gate_extract_phase_gate():
    d = payload(["gate-extract", "--theta-rad", str(math.pi), "--phi-rad", "-1.0"])
    name = d["nearest"]["name"]
    assert name.startswith("Z(") and float(name[2:-1]) == pytest.approx(1.0, abs=1e-12)
    assert d["nearest"]["distance"] <= 1e-10


def test_gate_extract_not_and_identity():
    d = payload(["gate-extract", "--theta-rad", str(math.pi / 2), "--phi-rad", "0"])
    assert d["diagonal_phase_equivalent"]["X"] is True
    assert d["distances"]["X"] == pytest.approx(0, abs=1e-12)
    d = payload(["gate-extract", "--theta-rad", "0"])
    assert d["nearest"] == {"name": "I", "distance": 0.0}
    assert d["matrix"][0][0] == [1.0, 0.0]


def test_gate_extract_from_ode():
    d = payload(["gate-extract", "--method", "ode", "--omega1-rad-s", "1e9", "--dipole-cm", "1e-8",
                 "--carrier-ratio", "100", "--theta-rad", str(math.pi / 2)])
    assert d["distances"]["X"] < 2e-2


# dressed

def test_dressed_record():
    d = payload(["dressed", "--n-photons", "3", "--spot-um", "3", "--t0-s", "1e-7"])
    assert d["dipole_source"] == "published"
    assert d["phase_difference_rad"] == pytest.approx(d["phi0_rad"] - d["phi1_rad"])
    assert d["dressed"]["c_ground"] == pytest.approx(1 / math.sqrt(2))


# plan

def test_plan_reference_budget():
    d = payload(["plan", "--scenario", "CaF2_Tm", "--theta-rad", "6.2832", "--spot-um", "3", "--t0-s", "1e-7"])
    assert 10 <= d["budget"]["n_photons"] <= 1000
    assert d["post_check_rad"] >= 6.2832
    assert d["budget"]["dipole_source"] == "published"


def test_plan_formula_chain_labelled():
    d = payload(["plan", "--chain", "formula", "--theta-rad", "1", "--spot-um", "3", "--t0-s", "1e-7", "--report"])
    assert d["budget"]["dipole_source"] == "formula"
    assert set(d["report"]["chains"]) == {"formula", "published"}


def test_plan_rejects_zero_target():
    code, _, err = run(["plan", "--theta-rad", "0", "--spot-um", "3", "--t0-s", "1e-7"])
    assert code == EXIT_VALIDATION and "positive" in err


def test_plan_budget_exceeded():
    code, _, err = run(["plan", "--theta-rad", "1e4", "--spot-um", "3", "--t0-s", "1e-7", "--cap", "100"])
    assert code == EXIT_BUDGET and "phase at cap" in err


def test_plan_strict_adiabaticity():
    code, _, err = run(["plan", "--theta-rad", "6.2832", "--spot-um", "3", "--t0-s", "1e-7", "--strict"])
    assert code == EXIT_REGIME and "adiabatic" in err


def test_plan_scenario_file(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"name": "strong", "lambda_nm": 600, "dipole_cm": 1e-7}))
    d = payload(["plan", "--scenario-file", str(f), "--theta-rad", "1", "--spot-um", "3", "--t0-s", "1e-7"])
    assert d["scenario"] == "strong" and d["budget"]["dipole_source"] == "direct"


def test_plan_scenario_dir(tmp_path, monkeypatch):
    (tmp_path / "extra.json").write_text(json.dumps({"name": "extra", "lambda_nm": 600, "dipole_cm": 1e-7}))
    monkeypatch.setenv("PHASON_SCENARIO_DIR", str(tmp_path))
    assert payload(["plan", "--scenario", "extra", "--theta-rad", "1", "--spot-um", "3", "--t0-s", "1e-7"])["scenario"] == "extra"
    code, _, _ = run(["plan", "--scenario", "missing", "--theta-rad", "1", "--spot-um", "3", "--t0-s", "1e-7"])
    assert code == EXIT_VALIDATION


# qft

def test_qft_verify_json():
    d = payload(["qft", "--n-qubits", "3", "--verify"])
    assert d["verification"]["max_deviation"] <= 1e-12


def test_qft_schedules():
    assert payload(["qft", "--n-qubits", "1"])["schedule"]["entries"] == []
    rows = table(ok(["qft", "--n-qubits", "4", "--format", "csv"]))
    assert [int(r["multiplicity"]) for r in rows] == [3, 2, 1]


def test_qft_csv_carries_verification():
    text = ok(["qft", "--n-qubits", "2", "--format", "csv", "--verify"])
    assert "# verification max_deviation" in text


def test_qft_verify_range():
    code, _, err = run(["qft", "--n-qubits", "11", "--verify"])
    assert code == EXIT_VALIDATION and "10" in err
    assert payload(["qft", "--n-qubits", "12"])["schedule"]["n_qubits"] == 12


# sweep

def test_sweep_photon_number_monotone():
    rows = table(ok(["sweep", "--x", "n_photons:1:100:100", "--outputs", "phase_difference_rad"]))
    vals = [float(r["phase_difference_rad"]) for r in rows]
    assert [int(r["n_photons"]) for r in rows] == list(range(1, 101))
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_sweep_inverse_spot_law():
    lam_um = 0.4723
    rows = table(ok(["sweep", "--x", f"spot_um:{lam_um / 2}:{10 * lam_um}:25", "--outputs", "phi1_rad"]))
    d = np.array([float(r["spot_um"]) for r in rows])
    phi = np.array([float(r["phi1_rad"]) for r in rows])
    norm = phi * d / (phi[0] * d[0])
    assert np.max(np.abs(norm - 1)) <= 1e-9


def test_sweep_two_axes_order_and_workers():
    args = ["sweep", "--x", "n_photons:1:4:4", "--y", "t0_s:1e-8:1e-6:3:log",
            "--outputs", "phase_difference_rad,rabi_rad_s,adiabatic_ratio"]
    serial = ok(args)
    assert ok([*args, "--workers", "4"]) == serial
    rows = table(serial)
    assert [(int(r["n_photons"]), float(r["t0_s"])) for r in rows][:4] == [(1, 1e-8), (1, 1e-7), (1, 1e-6), (2, 1e-8)]


@pytest.mark.parametrize("spec", ["n_photons:1:5:0", "n_photons:1:5", "mass:1:5:3", "t0_s:0:1:3:log", "spot_um:1:2:3:cubic"])
def test_sweep_rejects_bad_specs(spec):
    code, _, _ = run(["sweep", "--x", spec])
    assert code == EXIT_VALIDATION


def test_sweep_rejects_unknown_output():
    code, _, err = run(["sweep", "--x", "n_photons:1:2:2", "--outputs", "colour"])
    assert code == EXIT_VALIDATION and "colour" in err


# config, determinism, output files

def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"theta_rad": 3.0, "spot_um": 3, "t0_s": 1e-7}))
    from_file = payload(["plan", "--config", str(cfg)])
    assert from_file["budget"]["target_phase"] == 3.0
    overridden = payload(["plan", "--config", str(cfg), "--theta-rad", "1.0"])
    assert overridden["budget"]["target_phase"] == 1.0
    assert overridden["budget"]["chain"] == "published"  # built-in default


def test_config_accepts_sweep_objects(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"x": {"name": "n_photons", "min": 1, "max": 3, "points": 3}, "outputs": "phi0_rad"}))
    assert len(table(ok(["sweep", "--config", str(cfg)]))) == 3


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"theta": 1.0}))
    code, _, err = run(["plan", "--config", str(cfg)])
    assert code == EXIT_VALIDATION and "theta" in err


def test_deterministic_output():
    args = ["qft", "--n-qubits", "5", "--verify"]
    assert ok(args) == ok(args)
    args = ["plan", "--theta-rad", "2", "--spot-um", "5", "--t0-s", "1e-7", "--report"]
    assert ok(args) == ok(args)


def test_out_file(tmp_path):
    target = tmp_path / "c.json"
    code, out, _ = run(["constants", "--out", str(target)])
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["constants"]["z0_ohm"] == 376.7


def test_console_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "phason.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for c in COMMANDS:
        assert c in proc.stdout

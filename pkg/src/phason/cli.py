"""
Command-line front end.

Every physical flag carries its unit in the name (``--t0-s``,
``--lambda-nm``, ``--spot-um``, ...).  Values come from, in order of
precedence: command-line flags, the JSON file given by ``--config``,
built-in defaults.  Structured output is JSON, tabular output is CSV;
both carry the schema tag ``phason/1``.  Warnings go to stderr.

Exit codes: 0 success, 2 validation error, 3 physics-regime error under
``--strict``, 4 photon budget exceeded, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import dressed, dynamics, gates, planner, qft
from .serialize import SCHEMA, csv_text, dumps
from .units import CONSTANTS, NM, UM, DomainError, dipole_from_length

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_REGIME = 3
EXIT_BUDGET = 4
EXIT_NUMERICAL = 5


class ValidationError(Exception):
    pass


class RegimeError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


PRECEDENCE = "Precedence: flags > --config JSON file > built-in defaults."

STATES = {
    "0": (1.0, 0.0),
    "1": (0.0, 1.0),
    "+": (1 / math.sqrt(2), 1 / math.sqrt(2)),
    "-": (1 / math.sqrt(2), -1 / math.sqrt(2)),
    "+i": (1 / math.sqrt(2), 1j / math.sqrt(2)),
}

DEFAULTS = {
    "evolve": {"state": "0", "phi_rad": 0.0, "delta_rad_s": 0.0, "tol": 1e-9, "envelope": "rectangular",
               "edge_fraction": 0.05},
    "gate-extract": {"phi_rad": 0.0, "delta_rad_s": 0.0, "tol": 1e-9, "envelope": "rectangular",
                     "edge_fraction": 0.05, "method": "rwa-resonant"},
    "dressed": {"scenario": "CaF2_Tm", "chain": "published", "n_photons": 1, "delta_rad_s": 0.0,
                "refraction": 1.0, "t0_s": 1e-7},
    "plan": {"scenario": "CaF2_Tm", "chain": "published", "delta_rad_s": 0.0, "refraction": 1.0,
             "cap": 10**9},
    "qft": {"scenario": "CaF2_Tm", "chain": "published", "spot_um": 3.0, "t0_s": 1e-7,
            "delta_rad_s": 0.0, "refraction": 1.0, "format": "json", "cap": 10**9},
    "sweep": {"scenario": "CaF2_Tm", "chain": "published", "n_photons": 1, "t0_s": 1e-7,
              "delta_rad_s": 0.0, "refraction": 1.0, "outputs": "phase_difference_rad", "workers": 1},
    "constants": {},
}


def _add_common(p):
    p.add_argument("--config", metavar="PATH", help="JSON file of flag values (keys: flag names)")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--strict", action="store_true", default=None,
                   help="turn regime warnings into errors (exit 3)")


def _add_system(p):
    g = p.add_argument_group("two-level system")
    g.add_argument("--lambda-nm", type=float, help="transition wavelength, nm")
    g.add_argument("--omega1-rad-s", type=float, help="transition angular frequency, rad/s")
    g.add_argument("--dipole-cm", type=float, help="dipole matrix element <0|r|1>, cm")


def _add_pulse(p):
    g = p.add_argument_group("pulse")
    g.add_argument("--theta-rad", type=float, help="closed-form rotation angle, rad")
    g.add_argument("--phi-rad", type=float, help="initial carrier phase, rad (default 0)")
    g.add_argument("--delta-rad-s", type=float, help="detuning omega - omega1, rad/s (default 0)")
    g.add_argument("--amplitude-v-m", type=float, help="envelope peak, V/m")
    g.add_argument("--carrier-ratio", type=float,
                   help="dimensionless omega/(kappa E); sets the amplitude when --amplitude-v-m is absent")
    g.add_argument("--duration-s", type=float,
                   help="pulse duration, s (default: set from --theta-rad as area 2*theta)")
    g.add_argument("--edge-fraction", type=float, help="dimensionless edge width / duration (default 0.05)")
    g.add_argument("--sigma-s", type=float, help="gaussian envelope width, s")
    g.add_argument("--envelope", choices=["rectangular", "gaussian"], help="envelope shape (default rectangular)")
    g.add_argument("--tol", type=float, help="dimensionless integrator tolerance (default 1e-9)")


def _add_beam(p, spot_default: str = "diffraction limit"):
    g = p.add_argument_group("scenario and beam")
    g.add_argument("--scenario", help="preset name or name found in PHASON_SCENARIO_DIR (default CaF2_Tm)")
    g.add_argument("--scenario-file", metavar="PATH", help="JSON scenario {name, lambda_nm, gamma_per_s | dipole_cm, notes}")
    g.add_argument("--chain", choices=list(planner.CHAINS), help="dipole/field provenance (default published)")
    g.add_argument("--spot-um", type=float, help=f"focal spot side, um (default {spot_default})")
    g.add_argument("--t0-s", type=float, help="beam duration, s")
    g.add_argument("--delta-rad-s", type=float, help="detuning, rad/s (default 0)")
    g.add_argument("--refraction", type=float, help="dimensionless refractive index (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phason", description=__doc__.split("\n\n")[0].strip(), epilog=PRECEDENCE,
                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    add = sub.add_parser

    def _sub(name, **kw):
        # no prefix matching: "--t0" must not silently stand in for "--t0-s"
        return add(name, allow_abbrev=False, epilog=PRECEDENCE, **kw)

    p = _sub("evolve", help="two-level trajectory as CSV")
    _add_common(p)
    p.add_argument("--method", choices=["ode", "rwa-resonant", "rwa-detuned"],
                   help="exact equations or one of the two closed forms")
    p.add_argument("--state", choices=list(STATES), help="initial state (default 0)")
    p.add_argument("--samples", type=int, help="number of output rows")
    _add_system(p)
    _add_pulse(p)

    p = _sub("gate-extract", help="propagator and nearest named gate as JSON")
    _add_common(p)
    p.add_argument("--method", choices=["ode", "rwa-resonant", "rwa-detuned"], help="exact equations or a closed form (default rwa-resonant)")
    _add_system(p)
    _add_pulse(p)

    p = _sub("dressed", help="dressed states and phase shifts as JSON")
    _add_common(p)
    p.add_argument("--n-photons", type=int, help="photon number N0 (default 1)")
    _add_beam(p)

    p = _sub("plan", help="photon budget for a target phase as JSON")
    _add_common(p)
    p.add_argument("--theta-rad", type=float, help="target phase, rad")
    p.add_argument("--cap", type=int, help="photon cap (default 1e9)")
    p.add_argument("--report", action="store_true", default=None, help="append the scenario report")
    _add_beam(p)

    p = _sub("qft", help="QFT phase schedule and verification")
    _add_common(p)
    p.add_argument("--n-qubits", type=int, help="number of qubits")
    p.add_argument("--verify", action="store_true", default=None, help="compare with the DFT (n <= 10)")
    p.add_argument("--format", choices=["json", "csv"], help="schedule output format (default json)")
    p.add_argument("--cap", type=int, help="photon cap (default 1e9)")
    _add_beam(p, spot_default="3 um")

    p = _sub("sweep", help="dressed-model outputs over a parameter grid as CSV")
    _add_common(p)
    p.add_argument("--x", metavar="SPEC", help="NAME:MIN:MAX:POINTS[:linear|log]; NAME in " + ",".join(SWEEPABLE))
    p.add_argument("--y", metavar="SPEC", help="optional second swept parameter, same syntax")
    p.add_argument("--outputs", help="comma list from " + ",".join(SWEEP_OUTPUTS))
    p.add_argument("--n-photons", type=int, help="photon number N0 (default 1)")
    p.add_argument("--workers", type=int, help="thread pool size (default 1)")
    _add_beam(p)

    p = _sub("constants", help="physical constants as JSON")
    _add_common(p)
    return parser


SWEEPABLE = ("n_photons", "spot_um", "t0_s", "delta_rad_s", "refraction")
SWEEP_OUTPUTS = (
    "phase_difference_rad",
    "phase_estimate_rad",
    "phi0_rad",
    "phi1_rad",
    "rabi_rad_s",
    "field_v_m",
    "adiabatic_ratio",
)


def _resolve(command: str, args: argparse.Namespace) -> dict:
    cfg = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read --config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValidationError("--config must hold a JSON object")
        known = set(vars(args))
        for key, value in raw.items():
            dest = key.lstrip("-").replace("-", "_")
            if dest not in known or dest in ("config", "command"):
                raise ValidationError(f"unknown config key {key!r}")
            cfg[dest] = value
    values = dict(DEFAULTS[command])
    values.update(cfg)
    for key, value in vars(args).items():
        if value is not None:
            values[key] = value
    return values


def _need(values: dict, *names: str):
    missing = [n for n in names if values.get(n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ValidationError(f"missing required flag {flags}")
    return [values[n] for n in names]


def _warn(msg: str, values: dict):
    if values.get("strict"):
        raise RegimeError(msg)
    print(f"warning: {msg}", file=sys.stderr)


def _system(values: dict) -> dynamics.TwoLevelSystem:
    if values.get("lambda_nm") is None and values.get("omega1_rad_s") is None:
        raise ValidationError("missing required flag --lambda-nm (or --omega1-rad-s)")
    (dip,) = _need(values, "dipole_cm")
    if values.get("omega1_rad_s") is not None:
        omega1 = float(values["omega1_rad_s"])
    else:
        omega1 = 2 * math.pi * CONSTANTS.c / (float(values["lambda_nm"]) * NM)
    return dynamics.TwoLevelSystem(omega1=omega1, dipole=dipole_from_length(dip))


def _pulse(values: dict, sys_: dynamics.TwoLevelSystem) -> dynamics.PulseSpec:
    delta = float(values["delta_rad_s"])
    phi = float(values["phi_rad"])
    omega = sys_.omega1 + delta
    amp = values.get("amplitude_v_m")
    if amp is None:
        if values.get("carrier_ratio") is None:
            raise ValidationError("missing required flag --amplitude-v-m (or --carrier-ratio)")
        amp = omega / (sys_.kappa * float(values["carrier_ratio"]))
    amp = float(amp)
    if values["envelope"] == "gaussian":
        (sigma,) = _need(values, "sigma_s")
        env = dynamics.Envelope.gaussian(amp, float(sigma))
    else:
        duration = values.get("duration_s")
        if duration is None:
            (theta,) = _need(values, "theta_rad")
            # area 2*theta reproduces the closed form at theta
            duration = 2 * abs(float(theta)) / (sys_.kappa * amp)
        duration = float(duration)
        env = dynamics.Envelope.rectangular(amp, duration, edge=float(values["edge_fraction"]) * duration)
    return dynamics.PulseSpec.for_system(sys_, env, delta=delta, phi=phi)


def cmd_evolve(values: dict) -> str:
    (method,) = _need(values, "method")
    c0, c1 = STATES[values["state"]]
    state = dynamics.QubitState(c0, c1)
    phi = float(values["phi_rad"])
    if method == "ode":
        sys_ = _system(values)
        pulse = _pulse(values, sys_)
        report = dynamics.rwa_regime_check(sys_, pulse)
        if not report.quasi_monochromatic:
            _warn("envelope is not quasi-monochromatic", values)
        traj = dynamics.evolve_full(state, sys_, pulse, tol=float(values["tol"]), samples=values.get("samples"))
        if traj.norm_drift() > 10 * float(values["tol"]):
            raise FloatingPointError(f"norm drift {traj.norm_drift():.3e} exceeds 10*tol")
        return traj.to_csv(header_comment=f"schema: {SCHEMA}")
    samples = int(values.get("samples") or 201)
    if samples < 2:
        raise ValidationError("--samples must be >= 2")
    have_pulse = values.get("amplitude_v_m") is not None or values.get("carrier_ratio") is not None
    if have_pulse and (values.get("lambda_nm") is not None or values.get("omega1_rad_s") is not None):
        sys_ = _system(values)
        pulse = _pulse(values, sys_)
        report = dynamics.rwa_regime_check(sys_, pulse)
        lo, hi = pulse.envelope.support()
        times = np.linspace(lo, hi, samples)
        if method == "rwa-resonant":
            if not report.resonant_ok:
                _warn("pulse is outside the resonant regime", values)
            thetas = [dynamics.rotation_angle(pulse.envelope, sys_, t) / 2 for t in times]
        else:
            if not report.detuned_ok:
                _warn("|delta| <= kappa*E: outside the near-resonant regime", values)
            thetas = [dynamics.detuned_rotation_angle(pulse.envelope, sys_, pulse.delta, t) for t in times]
    else:
        (theta,) = _need(values, "theta_rad")
        # without a physical pulse the time axis is the unit interval unless --duration-s is given
        times = np.linspace(0.0, float(values.get("duration_s") or 1.0), samples)
        thetas = np.linspace(0.0, float(theta), samples)
    evolve = dynamics.evolve_resonant if method == "rwa-resonant" else dynamics.evolve_detuned
    amps = np.array([evolve(state, th, phi).vector for th in thetas])
    traj = dynamics.Trajectory(times=np.asarray(times), amplitudes=amps)
    return traj.to_csv(header_comment=f"schema: {SCHEMA}")


def cmd_gate_extract(values: dict) -> str:
    method = values["method"]
    phi = float(values["phi_rad"])
    if method == "ode":
        sys_ = _system(values)
        pulse = _pulse(values, sys_)
        report = dynamics.rwa_regime_check(sys_, pulse)
        if not report.resonant_ok and not report.detuned_ok:
            _warn("pulse is outside both closed-form regimes", values)
        g = gates.extract_propagator(dynamics.evolve_full, sys=sys_, pulse=pulse,
                                     tol=float(values["tol"]), samples=2)
    else:
        (theta,) = _need(values, "theta_rad")
        evolver = dynamics.evolve_resonant if method == "rwa-resonant" else dynamics.evolve_detuned
        key = "theta" if method == "rwa-resonant" else "theta_tilde"
        g = gates.extract_propagator(evolver, **{key: float(theta), "phi": phi})
    name, dist, dists = gates.nearest_named_gate(g)
    diag_eq = {
        n: gates.equivalent_up_to_diagonal_phase(g, gates.named_gate(n), tol=1e-9)
        for n in ("I", "H", "X", "Y")
    }
    payload = {
        "command": "gate-extract",
        "method": method,
        "matrix": g.to_list(),
        "nearest": {"name": name, "distance": dist},
        "distances": dists,
        "diagonal_phase_equivalent": diag_eq,
        "unitarity_defect": g.unitarity_defect(),
    }
    return dumps(payload)


def _scenario(values: dict) -> planner.Scenario:
    if values.get("scenario_file"):
        found = planner.load_scenario_file(values["scenario_file"])
        for s in found:
            if s.name == values.get("scenario"):
                return s
        if len(found) == 1:
            return found[0]
        raise ValidationError(f"scenario {values.get('scenario')!r} not in {values['scenario_file']}")
    try:
        return planner.get_scenario(values["scenario"])
    except KeyError as exc:
        raise ValidationError(str(exc)) from exc


def _beam(values, scenario, n_photons=None) -> dressed.PhotonBeam:
    chain = values["chain"]
    scale = planner.PUBLISHED_FIELD_SCALE if chain == "published" else 1.0
    n = int(values["n_photons"] if n_photons is None else n_photons)
    refr = float(values["refraction"])
    (t0,) = _need(values, "t0_s")
    if values.get("spot_um") is None:
        return dressed.PhotonBeam.diffraction_limited(n, scenario.omega, float(t0), refr, scale)
    return dressed.PhotonBeam(n, scenario.omega, float(t0), float(values["spot_um"]) * UM, refr, scale)


def _dressed_record(sys_, beam, delta) -> dict:
    pd = dressed.phase_difference(sys_, beam, delta)
    phi0, phi1 = dressed.state_phase_shifts(sys_, beam, delta)
    ok, ratio = dressed.adiabaticity_check(sys_, beam, delta)
    rec = {
        "field_v_m": dressed.photon_field(beam),
        "rabi_rad_s": dressed.rabi_frequency(sys_, beam, delta),
        "phi0_rad": phi0,
        "phi1_rad": phi1,
        "phase_difference_rad": pd.exact,
        "phase_estimate_rad": pd.estimate,
        "regime_ok": pd.regime_ok,
        "adiabatic_ratio": ratio,
        "adiabatic_ok": ok,
        "vacuum": beam.is_vacuum,
    }
    if beam.n_photons >= 1:
        pair = dressed.dressed_states(sys_, beam, delta)
        rec["dressed"] = {"c_ground": pair.c_ground, "c_excited": pair.c_excited}
    return rec


def cmd_dressed(values: dict) -> str:
    scen = _scenario(values)
    chain = values["chain"]
    sys_ = scen.system(chain)
    beam = _beam(values, scen)
    delta = float(values["delta_rad_s"])
    rec = _dressed_record(sys_, beam, delta)
    if not rec["regime_ok"]:
        _warn("Omega - |delta/2| < |delta/2|: asymptotic estimate not applicable", values)
    payload = {
        "command": "dressed",
        "scenario": scen.name,
        "chain": chain,
        "dipole_source": scen.dipole_source(chain),
        "n_photons": beam.n_photons,
        "spot_side_m": beam.spot_side,
        "t0_s": beam.t0,
        "delta_rad_s": delta,
        **rec,
    }
    return dumps(payload)


def cmd_plan(values: dict) -> str:
    scen = _scenario(values)
    theta, spot, t0 = _need(values, "theta_rad", "spot_um", "t0_s")
    try:
        req = planner.BudgetRequest(float(theta), float(spot) * UM, float(t0),
                                    delta=float(values["delta_rad_s"]), refraction=float(values["refraction"]))
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc
    res = planner.photons_required(scen, req, chain=values["chain"], cap=int(values["cap"]))
    # independent post-check through the dressed module
    sys_ = scen.system(values["chain"])
    check = abs(dressed.phase_difference(sys_, req.beam(scen, res.n_photons, values["chain"]), req.delta).exact)
    if check < req.target_phase:
        raise FloatingPointError("post-check failed: achieved phase below target")
    if not res.adiabatic_ok:
        _warn(f"adiabatic ratio t0*Omega = {res.adiabatic_ratio:.3g} below 10", values)
    payload = {"command": "plan", "scenario": scen.name, "budget": res.as_dict(), "post_check_rad": check}
    if values.get("report"):
        payload["report"] = planner.scenario_report(scen, float(t0)).to_dict()
    return dumps(payload)


def cmd_qft(values: dict) -> str:
    (n,) = _need(values, "n_qubits")
    n = int(n)
    if n < 1:
        raise ValidationError("--n-qubits must be >= 1")
    verification = None
    if values.get("verify"):
        if n > qft.MAX_MATERIALIZED_QUBITS:
            raise ValidationError(f"--verify needs --n-qubits <= {qft.MAX_MATERIALIZED_QUBITS}")
        verification = qft.verify_circuit(qft.build_qft(n)).as_dict()
    scen = _scenario(values)
    sched = qft.phase_schedule(
        n, scen, float(values["spot_um"]) * UM, float(values["t0_s"]),
        delta=float(values["delta_rad_s"]), refraction=float(values["refraction"]),
        chain=values["chain"], cap=int(values["cap"]),
    )
    if values["format"] == "csv":
        text = sched.to_csv(header_comment=f"schema: {SCHEMA}")
        if verification is not None:
            extra = "".join(
                f"# verification {k}: {verification[k]}\r\n" for k in ("max_deviation", "unitarity_defect")
            )
            first, rest = text.split("\r\n", 1)
            text = f"{first}\r\n{extra}{rest}"
        return text
    payload = {"command": "qft", "schedule": sched.to_dict()}
    if verification is not None:
        payload["verification"] = verification
    return dumps(payload)


def parse_sweep_spec(spec) -> dict:
    """``NAME:MIN:MAX:POINTS[:SCALE]`` or an equivalent dict -> dict."""
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) not in (4, 5):
            raise ValidationError(f"malformed sweep spec {spec!r}")
        spec = {"name": parts[0], "min": parts[1], "max": parts[2], "points": parts[3],
                "scale": parts[4] if len(parts) == 5 else "linear"}
    if not isinstance(spec, dict):
        raise ValidationError("sweep spec must be a string or object")
    try:
        name = str(spec["name"])
        lo, hi = float(spec["min"]), float(spec["max"])
        points = int(spec["points"])
        scale = str(spec.get("scale", "linear"))
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"malformed sweep spec {spec!r}") from exc
    if name not in SWEEPABLE:
        raise ValidationError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
    if points < 1:
        raise ValidationError("sweep needs at least one point")
    if scale not in ("linear", "log"):
        raise ValidationError(f"unknown sweep scale {scale!r}")
    if scale == "log" and (lo <= 0 or hi <= 0):
        raise ValidationError("log sweep needs positive bounds")
    grid = np.geomspace(lo, hi, points) if scale == "log" else np.linspace(lo, hi, points)
    if name == "n_photons":
        grid = np.rint(grid).astype(int)
    return {"name": name, "grid": grid}


def cmd_sweep(values: dict) -> str:
    specs = []
    if values.get("x") is not None:
        specs.append(parse_sweep_spec(values["x"]))
    if values.get("y") is not None:
        specs.append(parse_sweep_spec(values["y"]))
    if not specs:
        raise ValidationError("missing required flag --x")
    if len(specs) == 2 and specs[0]["name"] == specs[1]["name"]:
        raise ValidationError("--x and --y sweep the same parameter")
    outputs = [o.strip() for o in str(values["outputs"]).split(",") if o.strip()]
    bad = [o for o in outputs if o not in SWEEP_OUTPUTS]
    if bad or not outputs:
        raise ValidationError(f"unknown sweep outputs {bad}; choose from {', '.join(SWEEP_OUTPUTS)}")
    scen = _scenario(values)
    sys_ = scen.system(values["chain"])

    if len(specs) == 1:
        points = [(v,) for v in specs[0]["grid"]]
    else:
        points = [(a, b) for a in specs[0]["grid"] for b in specs[1]["grid"]]
    names = [s["name"] for s in specs]

    def evaluate(point):
        local = dict(values)
        for name, v in zip(names, point):
            local[name] = v
        beam = _beam(local, scen)
        rec = _dressed_record(sys_, beam, float(local["delta_rad_s"]))
        return [*point, *(rec[o] for o in outputs)]

    workers = max(1, int(values["workers"]))
    try:
        if workers == 1:
            rows = [evaluate(p) for p in points]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(evaluate, points))  # map keeps grid order
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc
    return csv_text([*names, *outputs], rows)


def cmd_constants(values: dict) -> str:
    return dumps({"command": "constants", "constants": CONSTANTS.as_dict()})


COMMANDS = {
    "evolve": cmd_evolve,
    "gate-extract": cmd_gate_extract,
    "dressed": cmd_dressed,
    "plan": cmd_plan,
    "qft": cmd_qft,
    "sweep": cmd_sweep,
    "constants": cmd_constants,
}


def run(argv=None) -> tuple[int, str, str]:
    """Run a command; returns (exit code, stdout text, error message)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        values = _resolve(args.command, args)
        text = COMMANDS[args.command](values)
    except ValidationError as exc:
        return EXIT_VALIDATION, "", f"error: {exc}"
    except (DomainError, ValueError, KeyError) as exc:
        return EXIT_VALIDATION, "", f"error: {exc}"
    except RegimeError as exc:
        return EXIT_REGIME, "", f"error: {exc}"
    except planner.BudgetExceeded as exc:
        return EXIT_BUDGET, "", f"error: {exc}"
    except (dynamics.IntegrationError, gates.NonUnitaryError, FloatingPointError) as exc:
        return EXIT_NUMERICAL, "", f"error: {exc}"
    if getattr(args, "out", None):
        Path(args.out).write_text(text, newline="")
        return EXIT_OK, "", ""
    return EXIT_OK, text, ""


def main(argv=None) -> int:
    try:
        code, out, err = run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if out:
        sys.stdout.write(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

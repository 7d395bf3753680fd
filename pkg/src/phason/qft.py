"""
Quantum Fourier transform circuits and their phase-gate photon schedules.

Qubit 0 is the most significant bit of the basis index.  The circuit is
the textbook one (Hadamard then controlled R_k on each qubit) followed
by the qubit-reversal swaps, so the materialised matrix is literally

    F[j, k] = exp(2 pi i j k / 2**n) / sqrt(2**n).
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .gates import named_gate
from .planner import BudgetRequest, Scenario, photons_required

__all__ = [
    "MAX_MATERIALIZED_QUBITS",
    "GateOp",
    "PhaseSchedule",
    "QftCircuit",
    "ScheduleEntry",
    "VerificationReport",
    "build_qft",
    "dft_matrix",
    "phase_schedule",
    "qft_gates",
    "verify_circuit",
]

MAX_MATERIALIZED_QUBITS = 10
CONVENTION = "qubit 0 is the most significant bit; reversal swaps included"


@dataclass(frozen=True)
class GateOp:
    """One circuit element: ``H`` on ``target``, ``CPHASE`` (controlled Z(theta)), or ``SWAP``."""

    kind: str
    target: int
    control: Optional[int] = None
    theta: float = 0.0
    k: Optional[int] = None


def qft_gates(n: int) -> tuple[GateOp, ...]:
    ops = []
    for j in range(n):
        ops.append(GateOp("H", j))
        for k in range(2, n - j + 1):
            ops.append(GateOp("CPHASE", j, control=j + k - 1, theta=2 * math.pi / 2**k, k=k))
    for j in range(n // 2):
        ops.append(GateOp("SWAP", j, control=n - 1 - j))
    return tuple(ops)


def _apply_single(tensor: np.ndarray, gate: np.ndarray, q: int) -> np.ndarray:
    tensor = np.tensordot(gate, tensor, axes=([1], [q]))
    return np.moveaxis(tensor, 0, q)


def _apply_op(tensor: np.ndarray, op: GateOp) -> np.ndarray:
    if op.kind == "H":
        return _apply_single(tensor, named_gate("H").entries, op.target)
    if op.kind == "CPHASE":
        # phase exp(i theta) where both qubits are 1
        idx = [slice(None)] * tensor.ndim
        idx[op.target] = 1
        idx[op.control] = 1
        tensor = tensor.copy()
        tensor[tuple(idx)] *= np.exp(1j * op.theta)
        return tensor
    if op.kind == "SWAP":
        return np.swapaxes(tensor, op.target, op.control)
    raise ValueError(f"unknown gate kind {op.kind!r}")


@dataclass(frozen=True)
class QftCircuit:
    n_qubits: int
    gates: tuple[GateOp, ...] = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")

    @property
    def hadamard_count(self) -> int:
        return sum(op.kind == "H" for op in self.gates)

    @property
    def cphase_count(self) -> int:
        return sum(op.kind == "CPHASE" for op in self.gates)

    @property
    def swap_count(self) -> int:
        return sum(op.kind == "SWAP" for op in self.gates)

    def apply(self, states: np.ndarray) -> np.ndarray:
        """Apply the circuit to a state vector or to the columns of a (2**n, m) array."""
        n = self.n_qubits
        states = np.asarray(states, dtype=complex)
        vec = states.ndim == 1
        cols = states.reshape(2**n, -1)
        t = cols.reshape((2,) * n + (cols.shape[1],))
        for op in self.gates:
            t = _apply_op(t, op)
        out = t.reshape(2**n, -1)
        return out[:, 0] if vec else out

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.n_qubits > MAX_MATERIALIZED_QUBITS:
            raise ValueError(f"matrix materialisation is capped at {MAX_MATERIALIZED_QUBITS} qubits")
        return self.apply(np.eye(2**self.n_qubits, dtype=complex))

    def perturbed(self, index: int, dtheta: float) -> "QftCircuit":
        """Copy with the angle of controlled-phase gate number ``index`` shifted by ``dtheta``."""
        ops = list(self.gates)
        positions = [i for i, op in enumerate(ops) if op.kind == "CPHASE"]
        i = positions[index]
        ops[i] = replace(ops[i], theta=ops[i].theta + dtheta)
        return QftCircuit(self.n_qubits, tuple(ops))


def build_qft(n: int) -> QftCircuit:
    """QFT circuit on ``n`` qubits, 1 <= n <= 10."""
    if int(n) != n or not 1 <= n <= MAX_MATERIALIZED_QUBITS:
        raise ValueError(f"n must be an integer in [1, {MAX_MATERIALIZED_QUBITS}], got {n!r}")
    n = int(n)
    return QftCircuit(n, qft_gates(n))


def dft_matrix(n: int) -> np.ndarray:
    """Direct construction of the 2**n point DFT matrix with e^{+2 pi i jk/N} / sqrt(N)."""
    N = 2**n
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / math.sqrt(N)


@dataclass(frozen=True)
class VerificationReport:
    n_qubits: int
    max_deviation: float
    worst_entry: tuple[int, int]
    unitarity_defect: float

    def as_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "max_deviation": self.max_deviation,
            "worst_entry": list(self.worst_entry),
            "unitarity_defect": self.unitarity_defect,
            "convention": CONVENTION,
        }


def verify_circuit(circuit: QftCircuit) -> VerificationReport:
    """Compare the circuit's matrix with :func:`dft_matrix` entry by entry."""
    m = circuit.matrix
    dev = np.abs(m - dft_matrix(circuit.n_qubits))
    worst = np.unravel_index(int(np.argmax(dev)), dev.shape)
    unit = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    return VerificationReport(
        n_qubits=circuit.n_qubits,
        max_deviation=float(dev[worst]),
        worst_entry=(int(worst[0]), int(worst[1])),
        unitarity_defect=float(unit),
    )


@dataclass(frozen=True)
class ScheduleEntry:
    k: int
    theta_rad: float
    multiplicity: int
    photons: int
    achieved_rad: float


@dataclass(frozen=True)
class PhaseSchedule:
    n_qubits: int
    scenario: str
    chain: str
    entries: tuple[ScheduleEntry, ...]
    spot_side_m: float
    t0_s: float
    delta_rad_s: float

    @property
    def total_photons(self) -> int:
        return sum(e.multiplicity * e.photons for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "scenario": self.scenario,
            "chain": self.chain,
            "spot_side_m": self.spot_side_m,
            "t0_s": self.t0_s,
            "delta_rad_s": self.delta_rad_s,
            "entries": [e.__dict__ for e in self.entries],
            "total_photons": self.total_photons,
            "note": "photons budget the single-qubit phase rotation only; the control is assumed ideal",
            "convention": CONVENTION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    CSV_COLUMNS = ("k", "theta_rad", "multiplicity", "photons", "total_photons")

    def to_csv(self, header_comment: Optional[str] = None) -> str:
        buf = io.StringIO()
        if header_comment:
            buf.write(f"# {header_comment}\r\n")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.CSV_COLUMNS)
        total = self.total_photons
        for e in self.entries:
            w.writerow([e.k, f"{e.theta_rad:.16e}", e.multiplicity, e.photons, total])
        return buf.getvalue()


def phase_schedule(
    circuit: Union[QftCircuit, int],
    scenario: Scenario,
    spot_side: float,
    t0: float,
    delta: float = 0.0,
    refraction: float = 1.0,
    chain: str = "published",
    cap: int = 10**9,
) -> PhaseSchedule:
    """Photon budget for every distinct R_k (k >= 2) in the circuit.

    ``circuit`` may be an integer qubit count, for which no matrix is built.
    Planner errors (:class:`~phason.planner.BudgetExceeded`) propagate.
    """
    if not isinstance(circuit, QftCircuit):
        circuit = QftCircuit(int(circuit), qft_gates(int(circuit)))
    counts = Counter(op.k for op in circuit.gates if op.kind == "CPHASE")
    entries = []
    for k in sorted(counts):
        theta = 2 * math.pi / 2**k
        res = photons_required(
            scenario,
            BudgetRequest(theta, spot_side, t0, delta=delta, refraction=refraction),
            chain=chain,
            cap=cap,
        )
        entries.append(ScheduleEntry(k, theta, counts[k], res.n_photons, res.achieved_phase))
    return PhaseSchedule(
        n_qubits=circuit.n_qubits,
        scenario=scenario.name,
        chain=chain,
        entries=tuple(entries),
        spot_side_m=spot_side,
        t0_s=t0,
        delta_rad_s=delta,
    )

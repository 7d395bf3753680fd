"""
Single-qubit gate algebra: named gates, propagator extraction and
phase-insensitive comparisons.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "GateMatrix",
    "NonUnitaryError",
    "PAULI_Z",
    "distance_up_to_global_phase",
    "equivalent_up_to_diagonal_phase",
    "extract_propagator",
    "named_gate",
    "nearest_named_gate",
    "phase_gate",
    "dyadic_phase_gate",
]


class NonUnitaryError(RuntimeError):
    """An extracted propagator is not unitary within tolerance."""


@dataclass(frozen=True, eq=False)
class GateMatrix:
    """A 2x2 complex matrix with an optional label."""

    entries: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"gate must be 2x2, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(self.entries @ np.asarray(other))

    @property
    def dagger(self) -> "GateMatrix":
        return GateMatrix(self.entries.conj().T)

    def unitarity_defect(self) -> float:
        """max |G G^dagger - I| elementwise."""
        m = self.entries
        return float(np.max(np.abs(m @ m.conj().T - np.eye(2))))

    def is_unitary(self, atol: float = 1e-10) -> bool:
        return self.unitarity_defect() <= atol

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, np.asarray(other), rtol=0.0, atol=atol))

    def to_list(self) -> list:
        """Row-major nested list of [re, im] pairs."""
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.entries]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_list(cls, data, name: Optional[str] = None) -> "GateMatrix":
        arr = np.array(data, dtype=float)
        if arr.shape != (2, 2, 2):
            raise ValueError("expected a 2x2 array of [re, im] pairs")
        return cls(arr[..., 0] + 1j * arr[..., 1], name=name)

    @classmethod
    def from_json(cls, text: str) -> "GateMatrix":
        return cls.from_list(json.loads(text))

    def __repr__(self) -> str:
        label = f"{self.name}, " if self.name else ""
        return f"GateMatrix({label}{np.array2string(self.entries, precision=6)})"


_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def phase_gate(theta: float) -> GateMatrix:
    """Z(theta) = diag(1, exp(i theta))."""
    return GateMatrix(np.diag([1.0, np.exp(1j * theta)]), name=f"Z({theta:.12g})")


def dyadic_phase_gate(k: int) -> GateMatrix:
    """R_k = Z(2 pi / 2**k); R_0 is the identity."""
    if int(k) != k or k < 0:
        raise ValueError(f"R_k needs an integer k >= 0, got {k!r}")
    k = int(k)
    g = phase_gate(2 * math.pi / 2**k)
    return GateMatrix(g.entries, name=f"R_{k}")


PAULI_Z = GateMatrix(np.diag([1.0, -1.0]), name="Zpauli")

_Z_RE = re.compile(r"^Z\((?P<theta>[^)]+)\)$")
_R_RE = re.compile(r"^R_?(?P<k>\d+)$")


def named_gate(name: str, theta: Optional[float] = None, k: Optional[int] = None) -> GateMatrix:
    """Look up a gate by name.

    Accepts ``"I"``, ``"H"``, ``"X"``, ``"Y"``, ``"Z"`` with ``theta``,
    ``"R"`` with ``k``, and the spelled-out forms ``"Z(0.5)"`` / ``"R_3"``.
    """
    if name in _FIXED:
        return GateMatrix(_FIXED[name], name=name)
    if name == "Z":
        if theta is None:
            raise ValueError("Z gate needs theta")
        return phase_gate(theta)
    if name in ("R", "R_k"):
        if k is None:
            raise ValueError("R_k gate needs k")
        return dyadic_phase_gate(k)
    m = _Z_RE.match(name)
    if m:
        return phase_gate(float(m.group("theta")))
    m = _R_RE.match(name)
    if m:
        return dyadic_phase_gate(int(m.group("k")))
    raise ValueError(f"unknown gate {name!r}")


def distance_up_to_global_phase(a, b) -> float:
    """min over |lambda| = 1 of the Frobenius norm ||a - lambda b||.

    The minimiser is lambda = tr(b^dagger a) / |tr(b^dagger a)|, taken as 1
    when the trace vanishes.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    tr = np.trace(b.conj().T @ a)
    lam = tr / abs(tr) if abs(tr) > 0 else 1.0
    return float(np.linalg.norm(a - lam * b))


def equivalent_up_to_diagonal_phase(a, b, tol: float = 1e-9) -> bool:
    """True iff a = lambda * diag(1, mu) @ b @ diag(1, nu) for unit-modulus lambda, mu, nu.

    Entrywise this reads a_ij = lambda mu^i nu^j b_ij.  Moduli must agree
    and, when every entry is non-zero, the phase cross-ratio
    a00 a11 / (a01 a10) must match that of b.  Diagonal and anti-diagonal
    patterns leave enough freedom that the moduli test is sufficient.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not np.allclose(np.abs(a), np.abs(b), rtol=0.0, atol=tol):
        return False
    nonzero = np.abs(b) > tol
    if not nonzero.all():
        return True
    r = a / b
    cross = r[0, 0] * r[1, 1] - r[0, 1] * r[1, 0]
    return bool(abs(cross) <= 4 * tol / float(np.min(np.abs(b))))


def extract_propagator(evolver: Callable, atol: Optional[float] = None, **params) -> GateMatrix:
    """Gate whose columns are the images of |0> and |1> under ``evolver``.

    ``evolver(state, **params)`` may return a ``QubitState`` or a
    ``Trajectory`` (whose final state is used).  Unitarity is enforced
    within ``atol``: 1e-12 for closed forms and 1e-8 for trajectories
    unless given.

    Raises
    ------
    NonUnitaryError
        If the result is not unitary within ``atol``.
    """
    from .dynamics import QubitState, Trajectory

    cols = []
    trajectory = False
    for basis in (QubitState.ground(), QubitState.excited()):
        out = evolver(basis, **params)
        if isinstance(out, Trajectory):
            trajectory = True
            out = out.final_state
        cols.append(out.vector)
    gate = GateMatrix(np.column_stack(cols))
    if atol is None:
        atol = 1e-8 if trajectory else 1e-12
    defect = gate.unitarity_defect()
    if defect > atol:
        raise NonUnitaryError(f"propagator unitarity defect {defect:.3e} exceeds {atol:.1e}")
    return gate


def nearest_named_gate(g) -> tuple[str, float, dict]:
    """Closest of I, H, X, Y and a best-fit Z(theta), up to global phase.

    Returns the winning name, its distance, and a dict of all distances.
    """
    g = np.asarray(g, dtype=complex)
    cands = {name: _FIXED[name] for name in ("I", "H", "X", "Y")}
    # best Z(theta): phase of g11 relative to g00 (or 0 if one is ~0)
    theta = float(np.angle(g[1, 1] * np.conj(g[0, 0]))) if abs(g[0, 0] * g[1, 1]) > 0 else 0.0
    zname = f"Z({theta:.12g})"
    cands[zname] = phase_gate(theta).entries
    dists = {name: distance_up_to_global_phase(g, m) for name, m in cands.items()}
    # ties go to the fixed gates, in listing order
    best = min(dists, key=lambda n: (round(dists[n], 12), n.startswith("Z(")))
    return best, dists[best], dists

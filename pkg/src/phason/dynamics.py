"""
Two-level amplitude dynamics under a classical, slowly modulated pulse.

The state is the pair (C0, C1) of the interaction-frame ansatz
``|psi> = (C0, C1 exp(-i omega1 t))``.  Three propagators are provided:

* :func:`evolve_full` integrates the exact amplitude equations with the
  full carrier ``E(t) = envelope(t) cos(omega t + phi)`` (no RWA);
* :func:`evolve_resonant` is the strict-resonance closed form;
* :func:`evolve_detuned` is the near-resonant closed form, driven by the
  quadratic rotation angle.

The closed forms are implemented exactly as printed, with the rotation angle
inside the trigonometric functions.  Under that convention a population
inversion happens at ``theta = pi/2`` and the diagonal phase map at
``theta = pi``.  The exact equations carry the usual factor 1/2 from
``cos x = (e^{ix} + e^{-ix})/2``, so a pulse of area ``kappa * int E dt = 2 theta``
reproduces ``evolve_resonant(theta, phi)`` followed by ``diag(1, e^{i phi})``.
:func:`ode_equivalent_gate` makes that correspondence explicit.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .units import CONSTANTS, DomainError

__all__ = [
    "Envelope",
    "IntegrationError",
    "PulseSpec",
    "QubitState",
    "RegimeReport",
    "Trajectory",
    "TwoLevelSystem",
    "closed_form_matrix",
    "detuned_rotation_angle",
    "evolve_detuned",
    "evolve_full",
    "evolve_resonant",
    "full_propagator",
    "ode_equivalent_gate",
    "resonant_pulse",
    "rotation_angle",
    "rwa_regime_check",
]

NORM_ATOL = 1e-9
DRIFT_FACTOR = 10.0
MIN_INNER_TOL = 1e-13


class IntegrationError(RuntimeError):
    """The adaptive integrator gave up before the end of the pulse."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(f"{message} (reached t = {t_reached:.6e} s)")
        self.t_reached = t_reached


@dataclass(frozen=True)
class QubitState:
    """Normalized amplitude pair (C0, C1)."""

    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))
        if abs(self.norm() - 1.0) > NORM_ATOL:
            raise DomainError(f"state is not normalized: |c0|^2+|c1|^2 = {self.norm()!r}")

    @classmethod
    def _trusted(cls, c0: complex, c1: complex) -> "QubitState":
        # integrator output may drift by up to 10*tol; skip the 1e-9 check
        obj = object.__new__(cls)
        object.__setattr__(obj, "c0", complex(c0))
        object.__setattr__(obj, "c1", complex(c1))
        return obj

    @classmethod
    def ground(cls) -> "QubitState":
        return cls(1.0, 0.0)

    @classmethod
    def excited(cls) -> "QubitState":
        return cls(0.0, 1.0)

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> "QubitState":
        vec = np.asarray(vec, dtype=complex).reshape(2)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(vec[0], vec[1])

    def norm(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c1) ** 2

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    @property
    def populations(self) -> tuple[float, float]:
        return abs(self.c0) ** 2, abs(self.c1) ** 2

    def overlap(self, other: "QubitState") -> complex:
        """<self|other>."""
        return self.c0.conjugate() * other.c0 + self.c1.conjugate() * other.c1

    def fidelity(self, other: "QubitState") -> float:
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True)
class TwoLevelSystem:
    """Transition frequency ``omega1`` (rad/s) and dipole ``e<0|r|1>`` (C·m)."""

    omega1: float
    dipole: float

    def __post_init__(self):
        if not self.omega1 > 0:
            raise DomainError(f"omega1 must be positive, got {self.omega1!r}")
        if self.dipole < 0:
            raise DomainError(f"dipole must be non-negative, got {self.dipole!r}")

    @property
    def kappa(self) -> float:
        """Coupling constant 2 e<0|r|1> / hbar in rad/s per V/m."""
        return 2.0 * self.dipole / CONSTANTS.hbar

    @classmethod
    def from_coupling(cls, omega1: float, kappa: float) -> "TwoLevelSystem":
        return cls(omega1=omega1, dipole=kappa * CONSTANTS.hbar / 2.0)


_KINDS = ("rectangular", "gaussian", "sampled")


@dataclass(frozen=True)
class Envelope:
    """Slowly varying, non-negative field amplitude (V/m).

    Build instances through :meth:`rectangular`, :meth:`gaussian`,
    :meth:`sampled` or :meth:`zero`.

    The rectangular kind has raised-cosine edges of width ``edge`` centred on
    ``t = 0`` and ``t = duration``, so its area is exactly
    ``amplitude * duration`` whatever the edge width.
    """

    kind: str
    amplitude: float
    duration: float = 0.0
    edge: float = 0.0
    sigma: float = 0.0
    center: float = 0.0
    times: Optional[np.ndarray] = field(default=None, compare=False)
    values: Optional[np.ndarray] = field(default=None, compare=False)

    GAUSSIAN_WINDOW = 8.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.amplitude < 0:
            raise DomainError("envelope amplitude must be non-negative")
        if self.kind == "rectangular":
            if self.duration < 0 or self.edge < 0 or self.edge > self.duration:
                raise DomainError("rectangular envelope needs 0 <= edge <= duration")
        elif self.kind == "gaussian":
            if not self.sigma > 0:
                raise DomainError("gaussian envelope needs sigma > 0")
        else:
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise ValueError("sampled envelope needs matching 1-d times/values, >= 2 points")
            if np.any(np.diff(t) <= 0):
                raise ValueError("sample times must be strictly increasing")
            if np.any(v < 0):
                raise DomainError("envelope samples must be non-negative")
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)

    @classmethod
    def rectangular(cls, amplitude: float, duration: float, edge: Optional[float] = None):
        """Flat-top pulse; ``edge`` defaults to 5% of ``duration``."""
        if edge is None:
            edge = 0.05 * duration
        return cls("rectangular", float(amplitude), duration=float(duration), edge=float(edge))

    @classmethod
    def gaussian(cls, amplitude: float, sigma: float, center: float = 0.0):
        return cls("gaussian", float(amplitude), sigma=float(sigma), center=float(center))

    @classmethod
    def sampled(cls, times: Sequence[float], values: Sequence[float]):
        """Piecewise-linear envelope through the samples, zero outside them."""
        v = np.asarray(values, dtype=float)
        return cls("sampled", float(v.max(initial=0.0)), times=np.asarray(times, float), values=v)

    @classmethod
    def zero(cls, duration: float):
        return cls("rectangular", 0.0, duration=float(duration), edge=0.0)

    @property
    def peak(self) -> float:
        return self.amplitude

    def support(self) -> tuple[float, float]:
        """Interval outside which the envelope vanishes (numerically, for gaussians)."""
        if self.kind == "rectangular":
            return -self.edge / 2, self.duration + self.edge / 2
        if self.kind == "gaussian":
            w = self.GAUSSIAN_WINDOW * self.sigma
            return self.center - w, self.center + w
        return float(self.times[0]), float(self.times[-1])

    def breakpoints(self) -> list[float]:
        if self.kind == "rectangular":
            h = self.edge / 2
            return sorted({-h, h, self.duration - h, self.duration + h})
        if self.kind == "sampled":
            return list(self.times)
        return [self.center]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "rectangular":
            return self._rect(t)
        if self.kind == "gaussian":
            return self.amplitude * np.exp(-0.5 * ((t - self.center) / self.sigma) ** 2)
        return np.interp(t, self.times, self.values, left=0.0, right=0.0)

    def value(self, t: float) -> float:
        """Scalar evaluation; same result as ``self(t)`` without numpy overhead."""
        if self.kind == "rectangular":
            E, T, tau = self.amplitude, self.duration, self.edge
            if tau == 0.0:
                return E if 0.0 <= t <= T else 0.0
            h = tau / 2
            if t < -h or t > T + h:
                return 0.0
            if t <= h:
                return 0.5 * E * (1 - math.cos(math.pi * (t + h) / tau))
            if t >= T - h:
                return 0.5 * E * (1 + math.cos(math.pi * (t - T + h) / tau))
            return E
        if self.kind == "gaussian":
            x = (t - self.center) / self.sigma
            return self.amplitude * math.exp(-0.5 * x * x)
        return float(np.interp(t, self.times, self.values, left=0.0, right=0.0))

    def _rect(self, t):
        E, T, tau = self.amplitude, self.duration, self.edge
        if tau == 0.0:
            return np.where((t >= 0) & (t <= T), E, 0.0)
        h = tau / 2
        rise = 0.5 * E * (1 - np.cos(np.pi * (t + h) / tau))
        fall = 0.5 * E * (1 + np.cos(np.pi * (t - T + h) / tau))
        out = np.where((t > h) & (t < T - h), E, 0.0)
        out = np.where((t >= -h) & (t <= h), rise, out)
        out = np.where((t >= T - h) & (t <= T + h), fall, out)
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "rectangular":
            E, T, tau = self.amplitude, self.duration, self.edge
            if tau == 0.0:
                return np.zeros_like(t)
            h = tau / 2
            k = np.pi / tau
            out = np.zeros_like(t)
            out = np.where((t >= -h) & (t <= h), 0.5 * E * k * np.sin(k * (t + h)), out)
            out = np.where((t >= T - h) & (t <= T + h), -0.5 * E * k * np.sin(k * (t - T + h)), out)
            return out
        if self.kind == "gaussian":
            x = (t - self.center) / self.sigma
            return -self(t) * x / self.sigma
        slopes = np.diff(self.values) / np.diff(self.times)
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, slopes.size - 1)
        inside = (t >= self.times[0]) & (t < self.times[-1])
        return np.where(inside, slopes[idx], 0.0)

    def max_relative_slope(self) -> float:
        """max |dE/dt| / E_peak, in 1/s."""
        if self.amplitude == 0:
            return 0.0
        if self.kind == "rectangular":
            if self.edge == 0:
                return math.inf if self.duration > 0 else 0.0
            return 0.5 * math.pi / self.edge
        if self.kind == "gaussian":
            return math.exp(-0.5) / self.sigma
        slopes = np.abs(np.diff(self.values) / np.diff(self.times))
        return float(slopes.max()) / self.amplitude

    def is_quasi_monochromatic(self, omega: float) -> bool:
        """Whether the envelope changes slowly on the scale of the carrier."""
        return self.max_relative_slope() <= 0.01 * omega

    def integral(self, t: Optional[float] = None, power: int = 1) -> float:
        """Integral of ``envelope**power`` from -inf to ``t`` (default: whole pulse)."""
        if power not in (1, 2):
            raise ValueError("power must be 1 or 2")
        lo, hi = self.support()
        upper = hi if t is None else min(float(t), hi)
        if upper <= lo or self.amplitude == 0:
            return 0.0
        if self.kind == "sampled":
            return self._sampled_integral(upper, power)
        if self.kind == "gaussian":
            val, _ = integrate.quad(
                lambda s: self.value(s) ** power, -np.inf, upper,
                epsabs=0.0, epsrel=1e-13, limit=400,
            )
            return val
        pts = [p for p in self.breakpoints() if lo < p < upper]
        val, _ = integrate.quad(
            lambda s: self.value(s) ** power, lo, upper,
            points=pts or None, epsabs=0.0, epsrel=1e-13, limit=400,
        )
        return val

    def _sampled_integral(self, upper: float, power: int) -> float:
        t = self.times
        v = self.values
        mask = t < upper
        tt = np.append(t[mask], upper)
        vv = np.append(v[mask], float(self(upper)))
        h = np.diff(tt)
        a, b = vv[:-1], vv[1:]
        if power == 1:
            return float(np.sum(h * (a + b) / 2))
        return float(np.sum(h * (a * a + a * b + b * b) / 3))


@dataclass(frozen=True)
class PulseSpec:
    """Classical pulse ``E(t) = envelope(t) cos(omega t + phi)``.

    ``delta`` is the detuning ``omega - omega1`` of the system the pulse was
    built for; :func:`evolve_full` checks the two are consistent.
    """

    envelope: Envelope
    omega: float
    phi: float = 0.0
    delta: float = 0.0

    @classmethod
    def for_system(cls, sys: TwoLevelSystem, envelope: Envelope, delta: float = 0.0, phi: float = 0.0):
        return cls(envelope=envelope, omega=sys.omega1 + delta, phi=phi, delta=delta)

    def check_bound(self, sys: TwoLevelSystem) -> None:
        if abs(self.omega - (sys.omega1 + self.delta)) > 1e-12 * max(self.omega, sys.omega1):
            raise ValueError("pulse carrier does not equal omega1 + delta for this system")

    def field(self, t):
        return self.envelope(t) * np.cos(self.omega * np.asarray(t) + self.phi)


def rotation_angle(env: Envelope, sys: TwoLevelSystem, t: Optional[float] = None) -> float:
    """kappa * integral of the envelope up to ``t`` (the whole pulse by default)."""
    return sys.kappa * env.integral(t, power=1)


def detuned_rotation_angle(
    env: Envelope, sys: TwoLevelSystem, delta: float, t: Optional[float] = None
) -> float:
    """(kappa^2 / delta) * integral of envelope^2 up to ``t``."""
    if delta == 0:
        raise DomainError("detuned rotation angle is singular at zero detuning; use the resonant map")
    return sys.kappa**2 / delta * env.integral(t, power=2)


def closed_form_matrix(theta: float, phi: float) -> np.ndarray:
    """2x2 matrix of the closed-form map for rotation angle ``theta`` and phase ``phi``."""
    c, s = math.cos(theta), math.sin(theta)
    p = complex(math.cos(phi), -math.sin(phi))
    return np.array([[c, -1j * s], [-1j * s * p, c * p]], dtype=complex)


def _apply(matrix: np.ndarray, state: QubitState) -> QubitState:
    out = matrix @ state.vector
    return QubitState(out[0], out[1])


def evolve_resonant(state0: QubitState, theta: float, phi: float) -> QubitState:
    """State after a strictly resonant pulse of rotation angle ``theta``."""
    return _apply(closed_form_matrix(theta, phi), state0)


def evolve_detuned(state0: QubitState, theta_tilde: float, phi: float) -> QubitState:
    """State after a near-resonant pulse of quadratic rotation angle ``theta_tilde``.

    Valid only for |delta| > kappa * E; see :func:`rwa_regime_check`.
    """
    return _apply(closed_form_matrix(theta_tilde, phi), state0)


def ode_equivalent_gate(theta: float, phi: float) -> np.ndarray:
    """Propagator the exact equations produce for a resonant pulse of area 2*theta.

    Equal to ``closed_form_matrix(theta, phi) @ diag(1, exp(i phi))``; the two
    agree outright only when ``phi = 0``.
    """
    return closed_form_matrix(theta, phi) @ np.diag([1.0, np.exp(1j * phi)])


def resonant_pulse(
    sys: TwoLevelSystem,
    theta: float,
    carrier_ratio: float,
    phi: float = 0.0,
    delta: float = 0.0,
    edge_fraction: float = 0.05,
) -> PulseSpec:
    """Rectangular pulse whose exact evolution matches the closed form at ``theta``.

    ``carrier_ratio`` is omega / (kappa E).  The pulse area is ``2*theta``
    (see the module docstring for the factor 2).
    """
    if not carrier_ratio > 0:
        raise DomainError("carrier_ratio must be positive")
    if sys.kappa == 0:
        raise DomainError("system has zero coupling")
    omega = sys.omega1 + delta
    amplitude = omega / (sys.kappa * carrier_ratio)
    duration = 2.0 * abs(theta) / (sys.kappa * amplitude)
    env = Envelope.rectangular(amplitude, duration, edge=edge_fraction * duration)
    return PulseSpec.for_system(sys, env, delta=delta, phi=phi)


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: ``times`` (s) and ``amplitudes`` of shape (n, 2)."""

    times: np.ndarray
    amplitudes: np.ndarray
    tol: float = 0.0

    def __len__(self) -> int:
        return self.times.size

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norms(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))

    def state(self, i: int) -> QubitState:
        c0, c1 = self.amplitudes[i]
        return QubitState._trusted(c0, c1)

    @property
    def final_state(self) -> QubitState:
        return self.state(-1)

    CSV_COLUMNS = ("t_s", "re_c0", "im_c0", "re_c1", "im_c1", "pop0", "pop1")

    def rows(self):
        pops = self.populations
        for t, (c0, c1), (p0, p1) in zip(self.times, self.amplitudes, pops):
            yield (t, c0.real, c0.imag, c1.real, c1.imag, p0, p1)

    def to_csv(self, fh=None, header_comment: Optional[str] = None) -> Optional[str]:
        """Write the trajectory as CSV; returns the text when ``fh`` is None."""
        buf = io.StringIO() if fh is None else fh
        if header_comment:
            buf.write(f"# {header_comment}\r\n")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.CSV_COLUMNS)
        for row in self.rows():
            w.writerow([f"{x:.16e}" for x in row])
        return buf.getvalue() if fh is None else None


def _rhs(sys: TwoLevelSystem, pulse: PulseSpec):
    kappa, w1, w, phi = sys.kappa, sys.omega1, pulse.omega, pulse.phi
    env = pulse.envelope

    def f(t, y):
        e = kappa * env.value(t) * math.cos(w * t + phi)
        rot = complex(math.cos(w1 * t), math.sin(w1 * t))
        # y holds columns [C0..., C1...] flattened as (2, m)
        y = y.reshape(2, -1)
        d0 = -1j * e * y[1] * rot.conjugate()
        d1 = -1j * e * y[0] * rot
        return np.concatenate([d0, d1])

    return f


def _integrate(sys, pulse, y0: np.ndarray, tol: float, samples: Optional[int], method: str):
    if not (1e-12 <= tol <= 1e-4):
        raise DomainError("tol must lie in [1e-12, 1e-4]")
    pulse.check_bound(sys)
    t_start, t_end = pulse.envelope.support()
    if t_end <= t_start:
        t_end = t_start + 1e-30
    peak_rate = sys.kappa * pulse.envelope.peak
    span = t_end - t_start
    if samples is None:
        periods = span * peak_rate / (2 * math.pi)
        samples = int(min(max(201, math.ceil(200 * periods) + 1), 2_000_000))
    t_eval = np.linspace(t_start, t_end, samples)
    if peak_rate == 0:
        y = np.repeat(y0.reshape(1, -1), samples, axis=0)
        return t_eval, y
    carrier = 2 * math.pi / max(sys.omega1, pulse.omega)
    max_step = carrier / 2
    max_step = min(max_step, 2 * math.pi / peak_rate / 20)
    if pulse.envelope.kind == "rectangular" and pulse.envelope.edge > 0:
        max_step = min(max_step, pulse.envelope.edge / 4)
    y0 = y0.astype(complex)
    norm0 = _column_norms(y0[None, :])[0]
    # local control at tol lets the norm wander by ~steps*tol on long pulses;
    # tighten until the drift bound of 10*tol holds
    inner = tol
    while True:
        sol = integrate.solve_ivp(
            _rhs(sys, pulse),
            (t_start, t_end),
            y0,
            method=method,
            t_eval=t_eval,
            rtol=inner,
            atol=inner,
            max_step=max_step,
        )
        if sol.status != 0:
            t_reached = float(sol.t[-1]) if sol.t.size else t_start
            raise IntegrationError(f"integration failed: {sol.message}", t_reached)
        y = sol.y.T
        drift = float(np.max(np.abs(_column_norms(y) - norm0)))
        if drift <= DRIFT_FACTOR * tol:
            return sol.t, y
        if inner <= MIN_INNER_TOL:
            raise IntegrationError(
                f"norm drift {drift:.2e} exceeds {DRIFT_FACTOR:g}*tol at the tightest inner tolerance", t_end
            )
        inner = max(MIN_INNER_TOL, inner * min(0.1, DRIFT_FACTOR * tol / drift / 2))


def _column_norms(y: np.ndarray) -> np.ndarray:
    """Squared norms of the state columns packed as [C0 of each column..., C1 of each column...]."""
    k = y.shape[1] // 2
    return np.abs(y[:, :k]) ** 2 + np.abs(y[:, k:]) ** 2


def evolve_full(
    state0: QubitState,
    sys: TwoLevelSystem,
    pulse: PulseSpec,
    tol: float = 1e-9,
    samples: Optional[int] = None,
    method: str = "DOP853",
) -> Trajectory:
    """Integrate the exact amplitude equations (no rotating-wave approximation).

    Uses an adaptive explicit Runge-Kutta scheme (DOP853 by default) with
    ``rtol = atol = tol``.  The trajectory is sampled on a uniform grid
    over the envelope support, with at least 200 samples per Rabi period
    of the peak field.

    Raises
    ------
    IntegrationError
        If the step size underflows; carries the time reached.
    """
    y0 = state0.vector
    t, y = _integrate(sys, pulse, y0, tol, samples, method)
    return Trajectory(times=t, amplitudes=y, tol=tol)


def full_propagator(
    sys: TwoLevelSystem, pulse: PulseSpec, tol: float = 1e-9, method: str = "DOP853"
) -> np.ndarray:
    """Propagator over the whole pulse, integrating both basis columns at once."""
    y0 = np.eye(2, dtype=complex).reshape(-1)  # [C0 of col0, C0 of col1, C1 of col0, C1 of col1]
    _, y = _integrate(sys, pulse, y0, tol, 2, method)
    return y[-1].reshape(2, 2)


@dataclass(frozen=True)
class RegimeReport:
    carrier_ratio: float  # kappa E_peak / omega
    detuning_ratio: float  # |delta| / (kappa E_peak)
    resonant_ok: bool
    detuned_ok: bool
    quasi_monochromatic: bool

    def as_dict(self) -> dict:
        return {
            "carrier_ratio": self.carrier_ratio,
            "detuning_ratio": self.detuning_ratio,
            "resonant_ok": self.resonant_ok,
            "detuned_ok": self.detuned_ok,
            "quasi_monochromatic": self.quasi_monochromatic,
        }


def rwa_regime_check(sys: TwoLevelSystem, pulse: PulseSpec, rwa_threshold: float = 1e-2) -> RegimeReport:
    """Which closed form, if either, is trustworthy for this pulse.

    ``detuned_ok`` holds iff |delta| > kappa E_peak.  ``resonant_ok`` requires
    the counter-rotating terms to be negligible (kappa E_peak / omega below
    ``rwa_threshold``) and the pulse not to be in the detuned regime.
    """
    coupling = sys.kappa * pulse.envelope.peak
    carrier_ratio = coupling / pulse.omega if pulse.omega > 0 else math.inf
    detuning_ratio = abs(pulse.delta) / coupling if coupling > 0 else math.inf
    detuned_ok = abs(pulse.delta) > coupling
    resonant_ok = carrier_ratio <= rwa_threshold and not detuned_ok
    return RegimeReport(
        carrier_ratio=carrier_ratio,
        detuning_ratio=detuning_ratio,
        resonant_ok=resonant_ok,
        detuned_ok=detuned_ok,
        quasi_monochromatic=pulse.envelope.is_quasi_monochromatic(pulse.omega),
    )

"""
Dressed states of a two-level system in an N0-photon beam, and the phase
shifts they imprint on |0> and |1> after adiabatic passage.

Conventions
-----------
* The per-photon field follows the beam's cross-section ``d**2``, duration
  ``t0`` and refractive index ``n``; ``PhotonBeam.field_scale`` multiplies it
  (1 by default) so that calibrated chains can be run through the same
  formulas.
* ``sgn(0)`` is taken as +1.
* |0> dresses with N0 photons, |1> with N0 + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import TwoLevelSystem
from .units import CONSTANTS, DomainError

__all__ = [
    "DIFFRACTION_FIELD_PREFACTOR",
    "DressedPair",
    "PhaseDifference",
    "PhotonBeam",
    "adiabaticity_check",
    "diffraction_limited_field",
    "dressed_states",
    "max_single_photon_phase",
    "phase_difference",
    "photon_field",
    "rabi_frequency",
    "sgn",
    "state_phase_shifts",
]

DIFFRACTION_FIELD_PREFACTOR = 2.4


def sgn(x: float) -> float:
    return -1.0 if x < 0 else 1.0


@dataclass(frozen=True)
class PhotonBeam:
    """A quasi-monochromatic pulse of ``n_photons`` photons.

    Parameters
    ----------
    n_photons : int
        Photon number N0 (0 is the vacuum).
    omega : float
        Carrier angular frequency, rad/s.
    t0 : float
        Transit time of the pulse through the system, s.
    spot_side : float
        Side ``d`` of the square focal spot, m.  Must not beat the
        diffraction limit ``lambda / (2 n)``.
    refraction : float
        Refractive index ``n >= 1``.
    field_scale : float
        Multiplier applied to the per-photon field.
    """

    n_photons: int
    omega: float
    t0: float
    spot_side: float
    refraction: float = 1.0
    field_scale: float = 1.0

    def __post_init__(self):
        if int(self.n_photons) != self.n_photons or self.n_photons < 0:
            raise DomainError(f"n_photons must be a non-negative integer, got {self.n_photons!r}")
        object.__setattr__(self, "n_photons", int(self.n_photons))
        if not self.omega > 0:
            raise DomainError("omega must be positive")
        if not self.t0 > 0:
            raise DomainError("t0 must be positive")
        if not self.refraction >= 1:
            raise DomainError("refractive index must be >= 1")
        if not self.field_scale > 0:
            raise DomainError("field_scale must be positive")
        limit = self.diffraction_limit
        if self.spot_side < limit * (1 - 1e-12):
            raise DomainError(
                f"spot side {self.spot_side:.4e} m is below the diffraction limit {limit:.4e} m"
            )

    @property
    def wavelength(self) -> float:
        return 2 * math.pi * CONSTANTS.c / self.omega

    @property
    def diffraction_limit(self) -> float:
        return self.wavelength / (2 * self.refraction)

    @property
    def is_vacuum(self) -> bool:
        return self.n_photons == 0

    @classmethod
    def diffraction_limited(cls, n_photons: int, omega: float, t0: float, refraction: float = 1.0, field_scale: float = 1.0):
        lam = 2 * math.pi * CONSTANTS.c / omega
        return cls(n_photons, omega, t0, lam / (2 * refraction), refraction, field_scale)

    def with_photons(self, n_photons: int) -> "PhotonBeam":
        return replace(self, n_photons=n_photons)


def photon_field(beam: PhotonBeam) -> float:
    """Field matrix element <N0-1|E|N0> in V/m; 0 for the vacuum beam."""
    if beam.n_photons == 0:
        return 0.0
    energy = CONSTANTS.hbar * beam.omega * beam.n_photons
    return beam.field_scale * math.sqrt(energy * CONSTANTS.z0 / (beam.t0 * beam.spot_side**2)) / beam.refraction


def rabi_frequency(sys: TwoLevelSystem, beam: PhotonBeam, delta: float) -> float:
    """sqrt(delta^2/4 + kappa^2 E^2)."""
    return math.hypot(delta / 2, sys.kappa * photon_field(beam))


def _light_shift(delta: float, coupling: float) -> tuple[float, float]:
    """(Omega - delta/2, Omega + delta/2) without cancellation."""
    omega = math.hypot(delta / 2, coupling)
    if delta >= 0:
        plus = omega + delta / 2
        minus = coupling**2 / plus if plus > 0 else 0.0
    else:
        minus = omega - delta / 2
        plus = coupling**2 / minus
    return minus, plus


@dataclass(frozen=True)
class DressedPair:
    """Dressed states in the basis (|0>|N0>, |1>|N0-1>).

    ``psi0 = c_ground |0,N0> - c_excited |1,N0-1>`` and
    ``psi1 = c_excited |0,N0> + c_ground |1,N0-1>``.
    """

    c_ground: float
    c_excited: float
    rabi: float

    @property
    def psi0(self) -> np.ndarray:
        return np.array([self.c_ground, -self.c_excited])

    @property
    def psi1(self) -> np.ndarray:
        return np.array([self.c_excited, self.c_ground])

    @property
    def vectors(self) -> np.ndarray:
        """Columns psi0, psi1."""
        return np.column_stack([self.psi0, self.psi1])


def dressed_states(sys: TwoLevelSystem, beam: PhotonBeam, delta: float) -> DressedPair:
    """Dressed-state mixing coefficients for the N0-excitation manifold.

    c_ground = sqrt((Omega + delta/2) / (2 Omega)) and
    c_excited = sqrt((Omega - delta/2) / (2 Omega)); these are the
    eigenvectors of [[-delta/2, kappa E], [kappa E, delta/2]].
    """
    if beam.n_photons < 1:
        raise DomainError("dressed states need at least one photon")
    coupling = sys.kappa * photon_field(beam)
    omega = math.hypot(delta / 2, coupling)
    if omega == 0:
        return DressedPair(math.sqrt(0.5), math.sqrt(0.5), 0.0)
    minus, plus = _light_shift(delta, coupling)
    return DressedPair(
        c_ground=math.sqrt(plus / (2 * omega)),
        c_excited=math.sqrt(minus / (2 * omega)),
        rabi=omega,
    )


def state_phase_shifts(sys: TwoLevelSystem, beam: PhotonBeam, delta: float) -> tuple[float, float]:
    """Phases picked up by |0> and |1> after the beam has passed.

    |0> acquires (Omega_N0 - delta/2) t0 sgn(delta); |1>, which dresses with
    one more photon, acquires -(Omega_{N0+1} - delta/2) t0 sgn(delta).
    """
    s = sgn(delta)
    k = sys.kappa
    m0, _ = _light_shift(delta, k * photon_field(beam))
    m1, _ = _light_shift(delta, k * photon_field(beam.with_photons(beam.n_photons + 1)))
    return m0 * beam.t0 * s, -m1 * beam.t0 * s


@dataclass(frozen=True)
class PhaseDifference:
    exact: float
    estimate: float
    regime_ok: bool
    rabi: float

    def as_dict(self) -> dict:
        return {
            "exact_rad": self.exact,
            "estimate_rad": self.estimate,
            "regime_ok": self.regime_ok,
            "rabi_rad_s": self.rabi,
        }


def phase_difference(sys: TwoLevelSystem, beam: PhotonBeam, delta: float) -> PhaseDifference:
    """Relative phase between |0> and |1> imprinted by the beam.

    ``exact`` is (Omega_N0 + Omega_{N0+1} - delta) t0 sgn(delta).
    ``estimate`` is the large-field asymptotic form
    |dipole / (hbar d)| (sqrt(N0) + sqrt(N0+1)) sqrt(hbar omega Z t0) sgn(delta),
    kept for comparison; at delta = 0 and n = 1 it is exactly half of
    ``exact``.  ``regime_ok`` flags Omega_N0 - |delta/2| >= |delta/2|, where the
    estimate is meant to apply.
    """
    phi0, phi1 = state_phase_shifts(sys, beam, delta)
    n = beam.n_photons
    s = sgn(delta)
    estimate = (
        abs(sys.dipole / (CONSTANTS.hbar * beam.spot_side))
        * (math.sqrt(n) + math.sqrt(n + 1))
        * math.sqrt(CONSTANTS.hbar * beam.omega * CONSTANTS.z0 * beam.t0)
        * beam.field_scale
        * s
    )
    rabi = rabi_frequency(sys, beam, delta)
    return PhaseDifference(
        exact=phi0 - phi1,
        estimate=estimate,
        regime_ok=rabi - abs(delta / 2) >= abs(delta / 2),
        rabi=rabi,
    )


def diffraction_limited_field(omega: float, t0: float, field_scale: float = 1.0) -> float:
    """Maximum single-photon field 2.4 sqrt(hbar omega Z / (t0 lambda^2)), V/m."""
    if not omega > 0 or not t0 > 0:
        raise DomainError("omega and t0 must be positive")
    lam = 2 * math.pi * CONSTANTS.c / omega
    return field_scale * DIFFRACTION_FIELD_PREFACTOR * math.sqrt(
        CONSTANTS.hbar * omega * CONSTANTS.z0 / (t0 * lam**2)
    )


def max_single_photon_phase(
    sys: TwoLevelSystem, omega: float, t0: float, n_refraction: float = 1.0, field_scale: float = 1.0
) -> float:
    """Upper bound 2 |dipole| E1max t0 / hbar on the single-photon phase.

    The refractive index cancels at the diffraction limit (the spot shrinks
    by n while the field drops by n), so ``n_refraction`` only validates.
    """
    if not n_refraction >= 1:
        raise DomainError("refractive index must be >= 1")
    field = diffraction_limited_field(omega, t0, field_scale)
    return 2 * sys.dipole * field * t0 / CONSTANTS.hbar


def adiabaticity_check(
    sys: TwoLevelSystem, beam: PhotonBeam, delta: float, threshold: float = 10.0
) -> tuple[bool, float]:
    """(t0 * Omega_N0 >= threshold, t0 * Omega_N0)."""
    ratio = beam.t0 * rabi_frequency(sys, beam, delta)
    return ratio >= threshold, ratio

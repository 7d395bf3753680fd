"""
Physical constants and boundary unit conversions.

Everything inside the package is SI: seconds, rad/s, joules, metres, V/m
and C·m. Values quoted in eV, nm, cm or V/cm are converted once, at the
boundary, by the helpers below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy import constants as _sc

__all__ = [
    "CONSTANTS",
    "Dimension",
    "DimensionError",
    "DomainError",
    "PhysicalConstants",
    "Quantity",
    "angular_frequency_to_energy_ev",
    "angular_frequency_to_wavelength",
    "dipole_from_length",
    "dipole_to_length_cm",
    "energy_ev_to_angular_frequency",
    "wavelength_to_angular_frequency",
    "V_PER_CM",
    "NM",
    "UM",
    "CM",
]


class DomainError(ValueError):
    """An argument lies outside the domain of a physical formula."""


class DimensionError(TypeError):
    """Arithmetic between quantities of different dimension."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    c: float
    e_charge: float
    z0: float
    epsilon0: float

    @property
    def alpha(self) -> float:
        """Fine-structure constant e^2 / (4 pi eps0 hbar c)."""
        return self.e_charge**2 / (4 * math.pi * self.epsilon0 * self.hbar * self.c)

    def as_dict(self) -> dict:
        return {
            "hbar_J_s": self.hbar,
            "c_m_per_s": self.c,
            "e_charge_C": self.e_charge,
            "z0_ohm": self.z0,
            "epsilon0_F_per_m": self.epsilon0,
            "alpha": self.alpha,
        }


# z0 is taken as the rounded 376.7 ohm, not mu0*c.
CONSTANTS = PhysicalConstants(
    hbar=_sc.hbar,
    c=_sc.c,
    e_charge=_sc.e,
    z0=376.7,
    epsilon0=_sc.epsilon_0,
)

NM = 1e-9
UM = 1e-6
CM = 1e-2
V_PER_CM = 1e2  # V/cm -> V/m


class Dimension(str, Enum):
    TIME = "time"
    FREQUENCY = "frequency"
    ENERGY = "energy"
    LENGTH = "length"
    FIELD = "field"
    DIPOLE = "dipole"
    PHASE = "phase"
    DIMENSIONLESS = "dimensionless"


@dataclass(frozen=True)
class Quantity:
    """A real SI value tagged with its dimension.

    Only addition, subtraction, comparison and scaling by plain numbers are
    supported; products of dimensions are outside what the package needs.
    """

    value: float
    dimension: Dimension

    def _check(self, other: object) -> "Quantity":
        if not isinstance(other, Quantity):
            raise DimensionError(f"cannot combine {self.dimension.value} with a bare number")
        if other.dimension is not self.dimension:
            raise DimensionError(
                f"cannot combine {self.dimension.value} with {other.dimension.value}"
            )
        return other

    def __add__(self, other: object) -> "Quantity":
        other = self._check(other)
        return Quantity(self.value + other.value, self.dimension)

    def __sub__(self, other: object) -> "Quantity":
        other = self._check(other)
        return Quantity(self.value - other.value, self.dimension)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.value, self.dimension)

    def __mul__(self, factor: float) -> "Quantity":
        if isinstance(factor, Quantity):
            if factor.dimension is not Dimension.DIMENSIONLESS:
                raise DimensionError("products of dimensioned quantities are not supported")
            factor = factor.value
        return Quantity(self.value * float(factor), self.dimension)

    __rmul__ = __mul__

    def __truediv__(self, divisor: float) -> "Quantity":
        if isinstance(divisor, Quantity):
            other = self._check(divisor)
            return Quantity(self.value / other.value, Dimension.DIMENSIONLESS)
        return Quantity(self.value / float(divisor), self.dimension)

    def __lt__(self, other: object) -> bool:
        return self.value < self._check(other).value

    def __le__(self, other: object) -> bool:
        return self.value <= self._check(other).value

    def __gt__(self, other: object) -> bool:
        return self.value > self._check(other).value

    def __ge__(self, other: object) -> bool:
        return self.value >= self._check(other).value

    def __float__(self) -> float:
        return float(self.value)


def _positive(name: str, x: float) -> float:
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return x


def energy_ev_to_angular_frequency(ev: float) -> float:
    """Transition energy in eV -> angular frequency in rad/s."""
    ev = _positive("energy", ev)
    return ev * CONSTANTS.e_charge / CONSTANTS.hbar


def angular_frequency_to_energy_ev(omega: float) -> float:
    omega = _positive("angular frequency", omega)
    return omega * CONSTANTS.hbar / CONSTANTS.e_charge


def wavelength_to_angular_frequency(wavelength: float) -> float:
    """Vacuum wavelength in metres -> angular frequency 2 pi c / lambda."""
    wavelength = _positive("wavelength", wavelength)
    return 2 * math.pi * CONSTANTS.c / wavelength


def angular_frequency_to_wavelength(omega: float) -> float:
    omega = _positive("angular frequency", omega)
    return 2 * math.pi * CONSTANTS.c / omega


def dipole_from_length(r_cm: float) -> float:
    """Dipole moment in C·m from a matrix element quoted as a length in cm.

    Such lengths are ``<0|r|1>``; the charge is multiplied in here.
    """
    r_cm = float(r_cm)
    if r_cm < 0 or not math.isfinite(r_cm):
        raise DomainError(f"dipole length must be non-negative, got {r_cm!r}")
    return CONSTANTS.e_charge * r_cm * CM


def dipole_to_length_cm(dipole: float) -> float:
    dipole = float(dipole)
    if dipole < 0:
        raise DomainError(f"dipole must be non-negative, got {dipole!r}")
    return dipole / CONSTANTS.e_charge / CM

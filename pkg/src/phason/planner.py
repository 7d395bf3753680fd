"""
Scenario presets and photon-budget planning.

Two evaluation chains are kept side by side and every number says which
one produced it:

``"formula"``
    dipole from the radiative rate via :func:`dipole_from_rate` (or the
    scenario's direct dipole), fields from the bare beam formulas.
``"published"``
    the literature dipole where one is quoted, and fields rescaled by
    :data:`PUBLISHED_FIELD_SCALE` so that the diffraction-limited
    single-photon field of the reference Tm3+ case equals the quoted
    28.9 V/cm.

The two chains differ by more than an order of magnitude; see
:func:`discrepancy_ledger`.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .dressed import (
    PhotonBeam,
    adiabaticity_check,
    diffraction_limited_field,
    phase_difference,
    photon_field,
)
from .dynamics import TwoLevelSystem
from .units import (
    CONSTANTS,
    NM,
    V_PER_CM,
    DomainError,
    dipole_from_length,
    dipole_to_length_cm,
    wavelength_to_angular_frequency,
)

__all__ = [
    "BudgetExceeded",
    "BudgetRequest",
    "BudgetResult",
    "CHAINS",
    "Discrepancy",
    "PRESETS",
    "PUBLISHED_FIELD_SCALE",
    "Scenario",
    "ScenarioReport",
    "dipole_from_rate",
    "discrepancy_ledger",
    "get_scenario",
    "load_scenario_file",
    "max_field",
    "photons_required",
    "scenario_report",
]

CHAINS = ("published", "formula")

# Quoted values for the CaF2:Tm3+ reference case.
REFERENCE_WAVELENGTH = 472.3 * NM
REFERENCE_RATE = 0.91e3
REFERENCE_T0 = 1e-7
PUBLISHED_DIPOLE_CM = 6.0e-10
PUBLISHED_FIELD_V_PER_CM = 28.9
PUBLISHED_MAX_PHASE = 10.6


class BudgetExceeded(RuntimeError):
    """Target phase not reachable below the photon cap."""

    def __init__(self, target: float, cap: int, cap_phase: float):
        super().__init__(
            f"target phase {target:.6g} rad unreachable with <= {cap} photons "
            f"(phase at cap: {cap_phase:.6g} rad)"
        )
        self.target = target
        self.cap = cap
        self.cap_phase = cap_phase


def dipole_from_rate(gamma: float, wavelength: float) -> float:
    """Transition dipole e*sqrt(3 gamma / (4 alpha c k^3)) in C·m, vacuum k = 2 pi / lambda."""
    if not gamma > 0 or not wavelength > 0:
        raise DomainError("gamma and wavelength must be positive")
    k = 2 * math.pi / wavelength
    length = math.sqrt(3 * gamma / (4 * CONSTANTS.alpha * CONSTANTS.c * k**3))
    return CONSTANTS.e_charge * length


def max_field(wavelength: float, t0: float) -> float:
    """Single-photon field at diffraction-limited focus, V/m."""
    if not wavelength > 0 or not t0 > 0:
        raise DomainError("wavelength and t0 must be positive")
    return diffraction_limited_field(wavelength_to_angular_frequency(wavelength), t0)


PUBLISHED_FIELD_SCALE = PUBLISHED_FIELD_V_PER_CM * V_PER_CM / max_field(REFERENCE_WAVELENGTH, REFERENCE_T0)


@dataclass(frozen=True)
class Scenario:
    """A physical two-level transition.

    Exactly one of ``radiative_rate`` (1/s) and ``dipole_cm`` (direct dipole
    length) is given.  ``published_dipole_cm`` optionally records a quoted
    dipole that disagrees with the rate-derived one.
    """

    name: str
    wavelength: float
    radiative_rate: Optional[float] = None
    dipole_cm: Optional[float] = None
    published_dipole_cm: Optional[float] = None
    notes: str = ""

    def __post_init__(self):
        if (self.radiative_rate is None) == (self.dipole_cm is None):
            raise ValueError(f"scenario {self.name!r}: give exactly one of radiative_rate or dipole_cm")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be positive")
        if self.radiative_rate is not None and not self.radiative_rate > 0:
            raise DomainError("radiative_rate must be positive")
        if self.dipole_cm is not None and not self.dipole_cm > 0:
            raise DomainError("dipole_cm must be positive")

    @property
    def omega(self) -> float:
        return wavelength_to_angular_frequency(self.wavelength)

    @property
    def dipole_formula(self) -> Optional[float]:
        if self.radiative_rate is None:
            return None
        return dipole_from_rate(self.radiative_rate, self.wavelength)

    @property
    def dipole_published(self) -> Optional[float]:
        if self.published_dipole_cm is None:
            return None
        return dipole_from_length(self.published_dipole_cm)

    def dipole_source(self, chain: str) -> str:
        _check_chain(chain)
        if self.dipole_cm is not None:
            return "direct"
        if chain == "published" and self.published_dipole_cm is not None:
            return "published"
        return "formula"

    def dipole(self, chain: str = "published") -> float:
        src = self.dipole_source(chain)
        if src == "direct":
            return dipole_from_length(self.dipole_cm)
        if src == "published":
            return self.dipole_published
        return self.dipole_formula

    def system(self, chain: str = "published") -> TwoLevelSystem:
        return TwoLevelSystem(omega1=self.omega, dipole=self.dipole(chain))

    def to_dict(self) -> dict:
        d = {"name": self.name, "lambda_nm": self.wavelength / NM, "notes": self.notes}
        if self.radiative_rate is not None:
            d["gamma_per_s"] = self.radiative_rate
        else:
            d["dipole_cm"] = self.dipole_cm
        if self.published_dipole_cm is not None:
            d["published_dipole_cm"] = self.published_dipole_cm
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        unknown = set(d) - {"name", "lambda_nm", "gamma_per_s", "dipole_cm", "published_dipole_cm", "lifetime_s", "notes"}
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        rate = d.get("gamma_per_s")
        if "lifetime_s" in d:
            if rate is not None:
                raise ValueError("give gamma_per_s or lifetime_s, not both")
            rate = 1.0 / float(d["lifetime_s"])
        return cls(
            name=str(d["name"]),
            wavelength=float(d["lambda_nm"]) * NM,
            radiative_rate=None if rate is None else float(rate),
            dipole_cm=None if d.get("dipole_cm") is None else float(d["dipole_cm"]),
            published_dipole_cm=None if d.get("published_dipole_cm") is None else float(d["published_dipole_cm"]),
            notes=str(d.get("notes", "")),
        )


PRESETS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            "CaF2_Tm",
            wavelength=472.3 * NM,
            radiative_rate=REFERENCE_RATE,
            published_dipole_cm=PUBLISHED_DIPOLE_CM,
            notes="Tm3+ 3H6-1G4 in CaF2, 2.63 eV; crystal-field induced dipole",
        ),
        Scenario(
            "SiV_diamond",
            wavelength=737 * NM,
            dipole_cm=6e-7,
            notes="SiV centre zero-phonon line, lifetime-limited 100 MHz width",
        ),
        Scenario(
            "Ca_plus_397",
            wavelength=396.847 * NM,
            radiative_rate=1 / 7.7e-9,
            notes="Ca+ 4S1/2-4P1/2, lifetime 7.7 ns",
        ),
        Scenario(
            "Ca_plus_393",
            wavelength=393.366 * NM,
            radiative_rate=1 / 7.4e-9,
            notes="Ca+ 4S1/2-4P3/2, lifetime 7.4 ns",
        ),
    )
}


def load_scenario_file(path) -> list[Scenario]:
    """Scenarios from a JSON file holding one object or a list of them."""
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = [data]
    return [Scenario.from_dict(d) for d in data]


def _search_dirs() -> list[Path]:
    raw = os.environ.get("PHASON_SCENARIO_DIR", "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


def get_scenario(name: str, extra_dirs: Iterable = ()) -> Scenario:
    """Resolve a scenario by name; files in ``PHASON_SCENARIO_DIR`` override presets."""
    for d in [*map(Path, extra_dirs), *_search_dirs()]:
        if not d.is_dir():
            continue
        for f in sorted(d.glob("*.json")):
            for s in load_scenario_file(f):
                if s.name == name:
                    return s
    if name in PRESETS:
        return PRESETS[name]
    raise KeyError(f"unknown scenario {name!r}")


def _check_chain(chain: str) -> None:
    if chain not in CHAINS:
        raise ValueError(f"chain must be one of {CHAINS}, got {chain!r}")


def _field_scale(chain: str) -> float:
    return PUBLISHED_FIELD_SCALE if chain == "published" else 1.0


@dataclass(frozen=True)
class BudgetRequest:
    target_phase: float
    spot_side: float
    t0: float
    delta: float = 0.0
    refraction: float = 1.0

    def __post_init__(self):
        if not self.target_phase > 0:
            raise DomainError("target phase must be positive")
        if not self.t0 > 0:
            raise DomainError("t0 must be positive")
        if not self.spot_side > 0:
            raise DomainError("spot side must be positive")

    def beam(self, scenario: Scenario, n_photons: int, chain: str) -> PhotonBeam:
        return PhotonBeam(
            n_photons=n_photons,
            omega=scenario.omega,
            t0=self.t0,
            spot_side=self.spot_side,
            refraction=self.refraction,
            field_scale=_field_scale(chain),
        )


@dataclass(frozen=True)
class BudgetResult:
    n_photons: int
    achieved_phase: float
    target_phase: float
    seed: float
    adiabatic_ratio: float
    adiabatic_ok: bool
    regime_ok: bool
    chain: str
    dipole_source: str
    field_scale: float

    def as_dict(self) -> dict:
        return asdict(self)


def _phase_at(scenario, request, chain, n) -> float:
    sys = scenario.system(chain)
    return abs(phase_difference(sys, request.beam(scenario, n, chain), request.delta).exact)


def budget_seed(scenario: Scenario, request: BudgetRequest, chain: str = "published") -> float:
    """Closed-form photon estimate.

    Near resonance the phase is C (sqrt(N) + sqrt(N+1)) - delta t0 with
    C = kappa E_1 t0, and sqrt(N) + sqrt(N+1) = s inverts to
    N = ((s^2 - 1) / (2 s))^2.
    """
    sys = scenario.system(chain)
    e1 = request.beam(scenario, 1, chain)
    c = sys.kappa * photon_field(e1) * request.t0
    if c == 0:
        return math.inf
    s = (request.target_phase + request.delta * request.t0) / c
    if s <= 1:
        return 0.0
    return ((s * s - 1) / (2 * s)) ** 2


def photons_required(
    scenario: Scenario,
    request: BudgetRequest,
    chain: str = "published",
    cap: int = 10**9,
) -> BudgetResult:
    """Smallest N0 >= 1 whose phase difference reaches ``request.target_phase``.

    The search starts at the closed-form seed, gallops outward to bracket the
    answer and finishes with integer bisection; the phase is monotone in N0.

    Raises
    ------
    BudgetExceeded
        If even ``cap`` photons fall short.
    """
    _check_chain(chain)
    target = request.target_phase
    seed = budget_seed(scenario, request, chain)

    def ok(n: int) -> bool:
        return _phase_at(scenario, request, chain, n) >= target

    if not ok(cap):
        raise BudgetExceeded(target, cap, _phase_at(scenario, request, chain, cap))
    guess = int(min(max(1, math.ceil(seed) if math.isfinite(seed) else cap), cap))
    if ok(guess):
        hi, step = guess, 1
        lo = guess - 1
        while lo >= 1 and ok(lo):
            hi = lo
            lo = max(0, hi - 2 * step)
            step *= 2
        lo = max(lo, 0)
    else:
        lo, step = guess, 1
        hi = min(guess + 1, cap)
        while not ok(hi):
            lo = hi
            step *= 2
            hi = min(hi + step, cap)
    # invariant: ok(hi), lo == 0 or not ok(lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    n = max(hi, 1)
    sys = scenario.system(chain)
    beam = request.beam(scenario, n, chain)
    pd = phase_difference(sys, beam, request.delta)
    adiabatic, ratio = adiabaticity_check(sys, beam, request.delta)
    return BudgetResult(
        n_photons=n,
        achieved_phase=abs(pd.exact),
        target_phase=target,
        seed=seed,
        adiabatic_ratio=ratio,
        adiabatic_ok=adiabatic,
        regime_ok=pd.regime_ok,
        chain=chain,
        dipole_source=scenario.dipole_source(chain),
        field_scale=_field_scale(chain),
    )


@dataclass(frozen=True)
class ChainReport:
    chain: str
    dipole_source: str
    dipole_cm: float
    field_scale: float
    field_max_v_per_m: float
    phase_max_rad: float
    phase_bound_rad: float
    adiabatic_ratio: float


@dataclass(frozen=True)
class ScenarioReport:
    """Diffraction-limited single-photon figures for a scenario at duration t0.

    ``phase_max_rad`` is the exact resonant phase difference for one photon
    at the field ``field_max``: 2 (1 + sqrt 2) |dipole| E t0 / hbar.
    ``phase_bound_rad`` is the plain 2 |dipole| E t0 / hbar bound.
    """

    scenario: Scenario
    t0: float
    dipole_formula_cm: Optional[float]
    dipole_published_cm: Optional[float]
    wavelength_factor: float
    chains: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "t0_s": self.t0,
            "dipole_formula_cm": self.dipole_formula_cm,
            "dipole_published_cm": self.dipole_published_cm,
            "wavelength_factor": self.wavelength_factor,
            "chains": {k: asdict(v) for k, v in sorted(self.chains.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def scenario_report(scenario: Scenario, t0: float) -> ScenarioReport:
    """Dipole, maximum field, maximum phase and adiabaticity for both chains.

    ``wavelength_factor`` is sqrt(omega t0) / lambda relative to the reference
    472.3 nm, 100 ns case: the factor by which the phase of a given dipole
    scales with wavelength and duration.
    """
    if not t0 > 0:
        raise DomainError("t0 must be positive")
    omega = scenario.omega
    ref_omega = wavelength_to_angular_frequency(REFERENCE_WAVELENGTH)
    wl_factor = (math.sqrt(omega * t0) / scenario.wavelength) / (
        math.sqrt(ref_omega * REFERENCE_T0) / REFERENCE_WAVELENGTH
    )
    chains = {}
    for chain in CHAINS:
        sys = scenario.system(chain)
        scale = _field_scale(chain)
        e_max = diffraction_limited_field(omega, t0, scale)
        base = sys.dipole * e_max * t0 / CONSTANTS.hbar
        beam = PhotonBeam.diffraction_limited(1, omega, t0, field_scale=scale)
        _, ratio = adiabaticity_check(sys, beam, 0.0)
        chains[chain] = ChainReport(
            chain=chain,
            dipole_source=scenario.dipole_source(chain),
            dipole_cm=dipole_to_length_cm(sys.dipole),
            field_scale=scale,
            field_max_v_per_m=e_max,
            phase_max_rad=2 * (1 + math.sqrt(2)) * base,
            phase_bound_rad=2 * base,
            adiabatic_ratio=ratio,
        )
    f = scenario.dipole_formula
    p = scenario.dipole_published
    return ScenarioReport(
        scenario=scenario,
        t0=t0,
        dipole_formula_cm=None if f is None else dipole_to_length_cm(f),
        dipole_published_cm=None if p is None else dipole_to_length_cm(p),
        wavelength_factor=wl_factor,
        chains=chains,
    )


@dataclass(frozen=True)
class Discrepancy:
    quantity: str
    unit: str
    published: float
    formula: float

    @property
    def ratio(self) -> float:
        return self.published / self.formula

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ratio"] = self.ratio
        return d


def discrepancy_ledger() -> list[Discrepancy]:
    """Quoted reference-case values next to the same quantities evaluated from their formulas."""
    dip = dipole_from_rate(REFERENCE_RATE, REFERENCE_WAVELENGTH)
    dip_cm = dipole_to_length_cm(dip)
    fld = max_field(REFERENCE_WAVELENGTH, REFERENCE_T0)
    phase = 2 * (1 + math.sqrt(2)) * dip * fld * REFERENCE_T0 / CONSTANTS.hbar
    return [
        Discrepancy("dipole_length", "cm", PUBLISHED_DIPOLE_CM, dip_cm),
        Discrepancy("max_single_photon_field", "V/cm", PUBLISHED_FIELD_V_PER_CM, fld / V_PER_CM),
        Discrepancy("max_single_photon_phase", "rad", PUBLISHED_MAX_PHASE, phase),
    ]


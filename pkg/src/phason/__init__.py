"""Single-photon phase gates: two-level dynamics, dressed states, photon budgets and QFT schedules."""

from . import dressed, dynamics, gates, planner, qft, units
from .dressed import (
    DressedPair,
    PhaseDifference,
    PhotonBeam,
    adiabaticity_check,
    dressed_states,
    max_single_photon_phase,
    phase_difference,
    photon_field,
    state_phase_shifts,
)
from .dynamics import (
    Envelope,
    IntegrationError,
    PulseSpec,
    QubitState,
    Trajectory,
    TwoLevelSystem,
    closed_form_matrix,
    evolve_detuned,
    evolve_full,
    evolve_resonant,
    rwa_regime_check,
)
from .gates import (
    GateMatrix,
    NonUnitaryError,
    distance_up_to_global_phase,
    equivalent_up_to_diagonal_phase,
    extract_propagator,
    named_gate,
    nearest_named_gate,
    phase_gate,
)
from .planner import (
    BudgetExceeded,
    BudgetRequest,
    Scenario,
    discrepancy_ledger,
    get_scenario,
    photons_required,
    scenario_report,
)
from .qft import build_qft, dft_matrix, phase_schedule, verify_circuit
from .units import CONSTANTS, DimensionError, DomainError, Quantity

__all__ = [
    "dressed",
    "dynamics",
    "gates",
    "planner",
    "qft",
    "units",
    "DressedPair",
    "PhaseDifference",
    "PhotonBeam",
    "adiabaticity_check",
    "dressed_states",
    "max_single_photon_phase",
    "phase_difference",
    "photon_field",
    "state_phase_shifts",
    "Envelope",
    "IntegrationError",
    "PulseSpec",
    "QubitState",
    "Trajectory",
    "TwoLevelSystem",
    "closed_form_matrix",
    "evolve_detuned",
    "evolve_full",
    "evolve_resonant",
    "rwa_regime_check",
    "GateMatrix",
    "NonUnitaryError",
    "distance_up_to_global_phase",
    "equivalent_up_to_diagonal_phase",
    "extract_propagator",
    "named_gate",
    "nearest_named_gate",
    "phase_gate",
    "BudgetExceeded",
    "BudgetRequest",
    "Scenario",
    "discrepancy_ledger",
    "get_scenario",
    "photons_required",
    "scenario_report",
    "build_qft",
    "dft_matrix",
    "phase_schedule",
    "verify_circuit",
    "CONSTANTS",
    "DimensionError",
    "DomainError",
    "Quantity",
]

__version__ = "0.1.0"

"""
Quantum Fourier transform: check the circuit, then budget its phase gates
=========================================================================
"""

from phason.planner import PRESETS
from phason.qft import build_qft, phase_schedule, verify_circuit

for n in range(1, 7):
    rep = verify_circuit(build_qft(n))
    print(f"n = {n}: max deviation from the DFT {rep.max_deviation:.1e}")

sched = phase_schedule(build_qft(5), PRESETS["CaF2_Tm"], spot_side=3e-6, t0=1e-7)
print(sched.to_csv(), end="")
print("total photons:", sched.total_photons)

# schedules need no matrix, so they work far past ten qubits
print("64 qubits:", phase_schedule(64, PRESETS["CaF2_Tm"], 3e-6, 1e-7).total_photons, "photons")

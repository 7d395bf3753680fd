"""
Dressed states and the phase left behind by a photon pulse
==========================================================

A weak pulse of N0 photons passes a Tm3+ ion in CaF2.  The qubit states
dress with N0 and N0+1 photons and come out with different phases.
"""

from phason.dressed import PhotonBeam, dressed_states, phase_difference, state_phase_shifts
from phason.planner import PRESETS, PUBLISHED_FIELD_SCALE

scen = PRESETS["CaF2_Tm"]
sys_ = scen.system("published")

for n in (1, 10, 100, 1000):
    beam = PhotonBeam(n, scen.omega, 1e-7, 3e-6, field_scale=PUBLISHED_FIELD_SCALE)
    pd = phase_difference(sys_, beam, 0.0)
    print(f"N0 = {n:5d}   phase difference {pd.exact:8.3f} rad   asymptotic estimate {pd.estimate:8.3f} rad")

# detuning mixes less and shifts less; far off resonance the shift is the AC Stark one
beam = PhotonBeam(100, scen.omega, 1e-7, 3e-6, field_scale=PUBLISHED_FIELD_SCALE)
for delta in (0.0, 1e7, 1e8, 1e9):
    pair = dressed_states(sys_, beam, delta)
    phi0, phi1 = state_phase_shifts(sys_, beam, delta)
    print(f"delta = {delta:7.1e}   c_ground {pair.c_ground:.4f}   phi0 {phi0:8.4f}   phi1 {phi1:8.4f}")

"""
Rabi oscillations and the rotating-wave approximation
=====================================================

Drive a two-level system with the full oscillating field and compare the
result with the closed-form propagator as the carrier gets faster.
"""

import math

from phason.dynamics import (
    QubitState,
    TwoLevelSystem,
    closed_form_matrix,
    evolve_full,
    evolve_resonant,
    full_propagator,
    resonant_pulse,
)
from phason.gates import distance_up_to_global_phase

# work in units where kappa = 1, so kappa*E sets the Rabi rate
sys_ = TwoLevelSystem.from_coupling(omega1=100.0, kappa=1.0)

# %% a quarter turn of the closed form is a full population inversion
print("closed form, theta = pi/2:", evolve_resonant(QubitState.ground(), math.pi / 2, 0.0).vector)

# %% the exact equations need pulse area 2*theta for the same map
for ratio in (1e2, 1e3, 1e4):
    pulse = resonant_pulse(sys_, math.pi / 2, carrier_ratio=ratio)
    u = full_propagator(sys_, pulse)
    d = distance_up_to_global_phase(u, closed_form_matrix(math.pi / 2, 0.0))
    print(f"omega/(kappa E) = {ratio:7.0e}   distance to closed form = {d:.2e}")

# %% a trajectory, written as CSV for plotting elsewhere
pulse = resonant_pulse(sys_, 2 * math.pi, carrier_ratio=50.0)
traj = evolve_full(QubitState.ground(), sys_, pulse)
print(f"{len(traj)} samples, norm drift {traj.norm_drift():.1e}")
print("\n".join(traj.to_csv().splitlines()[:4]))

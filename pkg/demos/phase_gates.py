"""
Phase gates from a single resonant pulse
========================================
"""

import math

import numpy as np

from phason.dynamics import closed_form_matrix, evolve_resonant
from phason.gates import (
    distance_up_to_global_phase,
    equivalent_up_to_diagonal_phase,
    extract_propagator,
    named_gate,
    nearest_named_gate,
    phase_gate,
)

# theta = pi with carrier phase -theta gives Z(theta) up to a global sign
for k in range(2, 6):
    theta = 2 * math.pi / 2**k
    g = extract_propagator(evolve_resonant, theta=math.pi, phi=-theta)
    print(f"R_{k}: distance {distance_up_to_global_phase(g, phase_gate(theta)):.1e}")

# the pi/4 pulse with phase -pi/2 is a Hadamard only up to local phases
m = closed_form_matrix(math.pi / 4, -math.pi / 2)
print("literal distance to H:", round(distance_up_to_global_phase(m, named_gate("H")), 3))
print("equivalent to H up to diagonal phases:", equivalent_up_to_diagonal_phase(m, named_gate("H")))

name, dist, _ = nearest_named_gate(closed_form_matrix(math.pi / 2, 0.3))
print("nearest named gate to the pi/2 pulse:", name, f"{dist:.2f}")
print(np.round(named_gate("R_3").entries, 3))

"""
How many photons does a phase gate need?
========================================

Both dipole chains are shown: the quoted reference values and the same
quantities evaluated from their formulas.
"""

import math

from phason.planner import PRESETS, BudgetRequest, discrepancy_ledger, photons_required, scenario_report

for d in discrepancy_ledger():
    print(f"{d.quantity:26s} quoted {d.published:10.4g} {d.unit:4s} formula {d.formula:10.4g}  ratio {d.ratio:7.2f}")

rep = scenario_report(PRESETS["CaF2_Tm"], 1e-7)
for chain, c in rep.chains.items():
    print(f"{chain:9s} dipole {c.dipole_cm:.3g} cm  E_max {c.field_max_v_per_m:.4g} V/m  phase_max {c.phase_max_rad:.4g} rad")

req = BudgetRequest(2 * math.pi, 3e-6, 1e-7)
for chain in ("published", "formula"):
    res = photons_required(PRESETS["CaF2_Tm"], req, chain=chain)
    print(f"{chain:9s} 2 pi at (3 um)^2: N0 = {res.n_photons}, adiabatic ratio {res.adiabatic_ratio:.3g}")

# stronger emitters need far fewer photons
for name in ("SiV_diamond", "Ca_plus_397"):
    res = photons_required(PRESETS[name], BudgetRequest(math.pi, 3e-6, 1e-7), chain="formula")
    print(f"{name}: pi needs {res.n_photons} photon(s)")

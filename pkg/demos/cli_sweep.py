"""
Driving the command line from a script
======================================

The same calls work from a shell as ``phason sweep ...``.
"""

from phason.cli import run

code, out, err = run([
    "sweep", "--x", "n_photons:1:1000:7:log", "--y", "spot_um:1:10:3",
    "--outputs", "phase_difference_rad,adiabatic_ratio", "--workers", "4",
])
print(out)

code, out, err = run(["plan", "--theta-rad", "3.1416", "--spot-um", "3", "--t0-s", "1e-7"])
print(out)

# physical flags must carry a unit
print(run(["plan", "--t0", "1e-7"])[2])

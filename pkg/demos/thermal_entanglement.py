"""
Thermal entanglement of the DM-Heisenberg pair
===============================================

Concurrence of the Gibbs state over coupling ``J`` and DM strength ``D`` at
``T = 0.5``, plus the temperature where it switches off.
"""

import numpy as np

import dmtele
from dmtele.sweep import Axis, SweepSpec, run_sweep

# The Hamiltonian in the basis {|11>, |10>, |01>, |00>}
params = dmtele.ModelParams(J=1.0, D=1.0, T=0.5)
print(np.round(dmtele.hamiltonian(params), 3))

for entry in dmtele.spectrum_closed_form(params):
    print(f"{entry.label:>5}  E = {entry.energy:+.6f}")

# Concurrence map over (J, D), the data behind a J-D contour plot
spec = SweepSpec("channel_concurrence", Axis("J", -2, 2, 41), Axis("D", 0, 3, 31), {"T": 0.5})
rows = run_sweep(spec)
grid = np.array([r.value for r in rows]).reshape(41, 31)
print("max concurrence at T=0.5:", grid.max())
print("ferromagnet, D=0 column:", grid[:20, 0].max())
print("ferromagnet, D=3 column:", grid[:20, -1].max())

# Switch-off temperature; for D=0 it is 2J/ln3, and none exists for J<0
for J, D in [(1.0, 0.0), (1.0, 1.0), (-1.0, 0.0), (-1.0, 2.0)]:
    tc = dmtele.critical_temperature(J, D)
    print(f"J={J:+.1f} D={D:.1f}  Tc = {tc}")
print("2/ln3 =", 2 / np.log(3))

# Low temperature: the Gibbs state approaches the ground-state projector
cold = dmtele.ModelParams(1.0, 0.0, 0.01)
print(np.round(dmtele.thermal_state(cold).rho.real, 6))

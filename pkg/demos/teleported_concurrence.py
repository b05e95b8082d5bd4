"""
Entanglement teleported through two thermal channels
====================================================

The output concurrence follows from the full Bell-measurement protocol and is
compared with the published closed form, which comes out at exactly half.
"""

import numpy as np

import dmtele
from dmtele.sweep import Axis, SweepSpec, run_sweep

params = dmtele.ModelParams(J=1.0, D=0.0, T=0.5)
probs = dmtele.channel_probabilities(dmtele.thermal_state(params))
print("Bell populations of one copy:", probs.traces)

inp = dmtele.PureInput(theta=np.pi / 2, phi=0.0)
rho_out = dmtele.teleport_output(inp, probs)
print("C_in  =", inp.concurrence)
print("C_out =", dmtele.wootters_concurrence(rho_out))
print("printed closed form:", dmtele.output_concurrence_paper(params, inp.concurrence))

# C_out against C_in and T for J=1, D=0: it vanishes just above T=1
spec = SweepSpec("C_out_oracle", Axis("C_in", 0, 1, 11), Axis("T", 0.05, 1.5, 30),
                 {"J": 1.0, "D": 0.0})
rows = run_sweep(spec)
hot = [r.value for r in rows if r.coords[1] > 1.05]
print("largest C_out above T=1.05:", max(hot))

# Same plane for J and C_in at T=0.1, D=1
spec = SweepSpec("C_out_oracle", Axis("J", -2, 2, 41), Axis("C_in", 0, 1, 11),
                 {"D": 1.0, "T": 0.1})
for r in run_sweep(spec):
    if r.coords[1] == 1.0 and r.coords[0] in (-1.0, -0.5, 0.5, 1.0):
        print(f"J={r.coords[0]:+.1f}  C_out(C_in=1) = {r.value:.4f}")

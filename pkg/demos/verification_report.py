"""
Cross-checking closed forms against matrix oracles
==================================================

Every closed-form expression is compared with an independent route built from
the Hamiltonian matrix, Jacobi diagonalization and the explicit protocol.
"""

import dmtele

report = dmtele.verify(grid_density=6)
print(report.to_text())

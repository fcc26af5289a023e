"""
A quasi-exactly-solvable Coulomb problem
========================================

Adding A*J4 to h_a keeps P_n invariant but couples grades.  Each eigenvalue
alpha of the extended operator h~_n fixes a Hamiltonian
p^2/2 - alpha/r + W(r) with W = A^2 r^2/2 - A(3/2 + n + p + |m| - beta r),
whose eigenstate at E = -beta^2/2 is known in closed form.
"""

import numpy as np

from coulomb_g2 import QESConfig, build_h_tilde, qes_cubic_check, qes_spectrum
from coulomb_g2.qes import h_tilde_gauge, h_tilde_sum, qes_hamiltonian_residual, qes_points
from coulomb_g2.diffop import op_equal

cfg = QESConfig(n=2, m=0, p=0, beta=1, A=1)

# three routes to the same operator
h = build_h_tilde(cfg)
print(op_equal(h, h_tilde_sum(cfg)), op_equal(h, h_tilde_gauge(cfg)))

# D(2) = 4 polynomial eigenstates: three depend on r only, one on u as well
for st in qes_spectrum(cfg):
    print(f"{st.variable_class:16s} alpha = {st.alpha}  P = {st.poly}")

# the r-only block has a closed-form cubic characteristic polynomial
print(qes_cubic_check(0, 0, 1, 1).computed)

# n = 1: alpha = (3 +- sqrt 5)/2 at these parameters
print(sorted(s.alpha for s in qes_spectrum(QESConfig(1, 0, 0, 1, 1))))

# each state solves its own Hamiltonian
rng = np.random.default_rng(1)
for st in qes_spectrum(cfg):
    print(f"alpha = {float(st.alpha):.6f}: residual {qes_hamiltonian_residual(st, qes_points(st, 20, rng)):.1e}")

# negative coupling can make the block spectrum complex; such states are flagged
print([s.is_real for s in qes_spectrum(QESConfig(1, 0, 0, 1, -1))])

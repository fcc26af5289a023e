"""
Orthogonality of the eigenpolynomials
=====================================

At fixed coupling alpha, states with different principal number N have
different energies and must be L2-orthogonal.  Inside a degenerate level the
polynomials returned by the eigensolver are independent but not orthogonal.
"""

from fractions import Fraction

import numpy as np

from coulomb_g2 import gram_matrix, hydrogen_states, sturmian_states
from coulomb_g2.quad import default_grid

np.set_printoptions(precision=3, suppress=True, linewidth=100)

states = [s for n in range(4) for s in hydrogen_states(n, 0, 0, 1)]
g = gram_matrix(states)
print(g.matrix)
print("largest overlap between different N:", g.max_offdiag_distinct)

# doubling the Gauss-Legendre order barely moves anything
g2 = gram_matrix(states, default_grid(states).doubled())
print("order doubling change:", np.abs(g2.matrix - g.matrix).max())

# the Sturmian pairing: fixed beta, weight 1/r
sturm = [s for n in range(4) for s in sturmian_states(n, 0, 0, Fraction(1, 2))]
print(gram_matrix(sturm, sturmian=True).matrix)

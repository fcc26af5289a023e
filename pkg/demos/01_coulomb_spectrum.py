"""
Hydrogen as a polynomial eigenproblem
=====================================

The gauge-rotated operator h_a acts on polynomials in (r, u = rho^2) and
never raises the grade a + 2b of a monomial r^a u^b.  Its matrix on the
space P_n is therefore triangular in grades, and the spectrum can be read off
exactly.
"""

from fractions import Fraction

import numpy as np

from coulomb_g2 import basis, build_h_a, coulomb_spectrum, hydrogen_states, matrix_on_basis
from coulomb_g2.coulomb import schrodinger_residual, state_points

# the operator for m = p = 0 at beta = 1
h = build_h_a(0, 0, 1)
print(h)

# P_2 is spanned by 1, r, r^2 and u; the matrix is exact
M = matrix_on_basis(h, 2)
print(basis(2).monomials)
for row in M.rows():
    print([str(x) for x in row])

# eigenvalues beta (j + 1 + p + |m|); the top one is doubly degenerate
for level in coulomb_spectrum(2, 0, 0, 1):
    print(level.eigenvalue, level.multiplicity, [str(P) for P in level.eigenvectors])

# at fixed coupling alpha the same polynomials become bound states with
# beta = alpha / N and E = -beta^2/2
for st in hydrogen_states(2, 1, 0, Fraction(1)):
    print(st.qn, st.energy, st.poly)

# end-to-end check: Psi = rho^|m| e^{-beta r} z^p e^{i m phi} P solves the
# Schrodinger equation; central differences in Cartesian coordinates
rng = np.random.default_rng(0)
for st in hydrogen_states(3, 0, 0, 1):
    res = schrodinger_residual(st, state_points(st, 20, rng))
    print(f"{st.poly}:  max relative residual {res:.1e}")

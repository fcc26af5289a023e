"""
Generators of the hidden algebra
================================

h_a is a quadratic combination of first-order generators that all preserve
P_n.  The identities below are checked by exact operator arithmetic.
"""

from fractions import Fraction

from coulomb_g2 import build_h_a, closure_check, generator, lie_form_coulomb, op_equal
from coulomb_g2.lie import GL2_R3, lie_form_laguerre
from coulomb_g2.coulomb import build_h_a_r

n = 4
for name in ("Jtilde0", "J1", "J2", "J3", "J4", "R0", "R1", "R2"):
    print(f"{name:8s} {generator(name, n)}")

# seven of them close into a finite-dimensional Lie algebra
table = closure_check(GL2_R3, n=n)
for (a, b), coeffs in table.items():
    if coeffs:
        print(f"[{a}, {b}] = " + " + ".join(f"{c}*{k}" for k, c in coeffs.items()))

# h_a rebuilt from generators; the parameter n drops out
beta = Fraction(2, 3)
print(all(op_equal(lie_form_coulomb(k, 1, 0, beta), build_h_a(1, 0, beta)) for k in range(6)))

# restricted to functions of r alone it is the Laguerre operator
print(op_equal(lie_form_laguerre(2, 1, beta), build_h_a_r(2, 1, beta)))

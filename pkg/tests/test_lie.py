import random
from fractions import Fraction

import pytest

from coulomb_g2.algebra import BiPoly
from coulomb_g2.coulomb import build_h_a, build_h_a_r
from coulomb_g2.diffop import DiffOp, apply, commutator, compose, op_equal, preserves
from coulomb_g2.lie import (
    GL2_R3, GeneratorId, NonClosure, closure_check, decompose, generator, identity_report,
    lie_form_coulomb, lie_form_laguerre, lie_form_qes,
)
from coulomb_g2.qes import QESConfig, build_h_tilde
from coulomb_g2.verification import random_fraction

ELEVEN = ("Jtilde0", "J1", "J2", "J3", "J4", "R0", "R1", "R2", "T0", "T1", "T2")


class TestGenerators:
    def test_J4(self, r, u):
        n = Fraction(7, 2)
        assert generator("J4", n) == DiffOp({(1, 0): r * r, (0, 1): 2 * r * u, (0, 0): -n * r})

    def test_R1_on_u(self, r, u):
        assert apply(generator("R1"), u) == r

    @pytest.mark.parametrize("n", range(6))
    def test_T2_kills_r_to_the_n(self, n, r):
        assert apply(generator("T2", n), r**n).is_zero()

    def test_generator_id(self):
        assert generator(GeneratorId("J2", 3)) == generator("J2", 3)
        with pytest.raises(ValueError):
            GeneratorId("J9")

    @pytest.mark.parametrize("name", ELEVEN)
    @pytest.mark.parametrize("n", range(9))
    def test_preserve_Pn(self, name, n):
        assert preserves(generator(name, n), n)

    @pytest.mark.parametrize("n", [0, 3, Fraction(5, 2)])
    def test_T2_factorization(self, n, u):
        J0 = generator("Jtilde0", n)
        assert generator("T2", n) == u * compose(J0, generator("Jtilde0", n - 1))


class TestClosure:
    def test_table(self):
        table = closure_check(GL2_R3, n=4)
        assert table[("J1", "J2")] == {"J1": 1}
        assert table[("J1", "R1")] == {"R0": 1}
        assert table[("R0", "R1")] == {}
        assert len(table) == 21

    @pytest.mark.parametrize("n", [0, 1, Fraction(7, 3)])
    def test_closes_for_any_n(self, n):
        closure_check(GL2_R3, n=n)

    def test_full_set_does_not_close(self):
        with pytest.raises(NonClosure) as info:
            closure_check(ELEVEN, n=2)
        assert not info.value.residual.is_zero()

    def test_decompose_residual(self):
        coeffs, residual = decompose(generator("J2", 3) * 2 + generator("R0", 3),
                                     {"J2": generator("J2", 3), "R0": generator("R0", 3)})
        assert coeffs == {"J2": 2, "R0": 1} and residual.is_zero()


class TestSl2:
    def test_relations_on_single_variable_polys(self, r):
        n = 4
        Jp, J0, Jm = (generator(k, n) for k in ("sl2_Jplus", "sl2_J0", "sl2_Jminus"))
        polys = [r**k for k in range(n + 1)] + [1 - 3 * r + Fraction(1, 2) * r**3]
        for P in polys:
            assert apply(commutator(J0, Jp), P) == apply(2 * Jp, P)
            assert apply(commutator(J0, Jm), P) == apply(-2 * Jm, P)
            # with these sign conventions the bracket closes with a minus sign
            assert apply(commutator(Jp, Jm), P) == apply(-J0, P)


class TestLieForms:
    def test_coulomb_example(self):
        assert op_equal(lie_form_coulomb(3, 1, 0, Fraction(2, 3)), build_h_a(1, 0, Fraction(2, 3)))

    def test_coulomb_smallest(self):
        assert op_equal(lie_form_coulomb(0, 0, 0, 1), build_h_a(0, 0, 1))

    def test_coulomb_independent_of_n(self):
        ops = {lie_form_coulomb(n, 2, 1, Fraction(5, 3)) for n in range(5)}
        assert len(ops) == 1

    def test_laguerre(self):
        assert op_equal(lie_form_laguerre(0, 0, 1), build_h_a_r(0, 0, 1))
        assert op_equal(lie_form_laguerre(2, 1, Fraction(3, 7)), build_h_a_r(2, 1, Fraction(3, 7)))
        assert apply(lie_form_laguerre(2, 1, Fraction(3, 7)), BiPoly.const(1)) == Fraction(12, 7)

    def test_qes_reduces_at_zero_coupling(self):
        assert op_equal(lie_form_qes(3, 1, 1, 2, 0), lie_form_coulomb(3, 1, 1, 2))

    def test_qes_example(self):
        assert op_equal(lie_form_qes(2, 0, 0, 1, 1), build_h_tilde(QESConfig(2, 0, 0, 1, 1)))

    @pytest.mark.parametrize("seed", range(20))
    def test_randomized(self, seed):
        rng = random.Random(seed)
        n, m, p = rng.randint(0, 8), rng.randint(-3, 3), rng.randint(0, 1)
        beta, A = random_fraction(rng), random_fraction(rng)
        assert op_equal(lie_form_coulomb(n, m, p, beta), build_h_a(m, p, beta))
        assert op_equal(lie_form_laguerre(m, p, beta), build_h_a_r(m, p, beta))
        assert op_equal(lie_form_qes(n, m, p, beta, A), build_h_tilde(QESConfig(n, m, p, beta, A)))


class TestReport:
    def test_holds(self):
        rep = identity_report("eq23", n=2, m=0, p=0, beta=1, A=1)
        assert rep["holds"] and rep["residual_operator"] is None
        assert rep["identity"] == "eq23"
        assert identity_report("laguerre", m=1, p=0, beta=2)["holds"]

    def test_unknown(self):
        with pytest.raises(ValueError):
            identity_report("eq99")

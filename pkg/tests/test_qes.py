import random
from fractions import Fraction

import numpy as np
import pytest

from coulomb_g2 import qes
from coulomb_g2.algebra import BiPoly, dim_Pn
from coulomb_g2.coulomb import build_h_a
from coulomb_g2.diffop import DiffOp, matrix_on_basis, op_equal, preserves
from coulomb_g2.qes import (
    SINGLE, TWO, ConstructionMismatch, QESConfig, build_h_tilde, h_tilde_expanded, h_tilde_gauge,
    h_tilde_sum, closed_form_cubic, potential_W, qes_cubic_check, qes_hamiltonian_residual, qes_points,
    qes_spectrum,
)
from coulomb_g2.spectral import char_poly, exact_eigen
from coulomb_g2.verification import p24_expected, qes_n1_closed_form, random_qes_config


def printed_expanded(c: QESConfig) -> DiffOp:
    """The expanded operator with the u-derivative coefficient as typeset,
    -2[(1+|m|) r - beta u - 2 A r u]."""
    op = h_tilde_expanded(c)
    r, u = BiPoly.r(), BiPoly.u()
    terms = dict(op.terms)
    terms[(0, 1)] = -2 * ((1 + abs(c.m)) * r - c.beta * u - 2 * c.A * r * u)
    return DiffOp(terms)


class TestPotential:
    def test_values(self):
        assert potential_W(QESConfig(0, 0, 0, 1, 1), Fraction(0)) == Fraction(-3, 2)
        assert potential_W(QESConfig(2, 1, 0, 2, 1), Fraction(1)) == -2
        cfg = QESConfig(3, 1, 1, Fraction(1, 2), 0)
        assert all(potential_W(cfg, Fraction(r)) == 0 for r in range(5))

    def test_float_input(self):
        assert potential_W(QESConfig(0, 0, 0, 1.0, 1.0), 0.0) == pytest.approx(-1.5)


class TestConstruction:
    def test_zero_coupling_is_coulomb(self):
        cfg = QESConfig(3, -1, 1, Fraction(2, 5), 0)
        assert op_equal(build_h_tilde(cfg), build_h_a(-1, 1, Fraction(2, 5)))

    def test_potential_terms(self, r):
        h = build_h_tilde(QESConfig(2, 0, 0, 1, 1))
        assert h.coeff(0, 0) == 1 - 2 * r

    @pytest.mark.parametrize("seed", range(20))
    def test_three_constructions_agree(self, seed):
        cfg = random_qes_config(random.Random(seed))
        a, b, c = h_tilde_expanded(cfg), h_tilde_sum(cfg), h_tilde_gauge(cfg)
        assert op_equal(a, b) and op_equal(b, c)
        assert preserves(a, cfg.n)

    @pytest.mark.parametrize("n", range(9))
    def test_preserves_Pn(self, n):
        assert preserves(build_h_tilde(QESConfig(n, 2, 1, Fraction(3, 4), Fraction(5, 2))), n)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_printed_coefficient_breaks_invariance(self, n):
        cfg = QESConfig(n, 0, 0, 1, 1)
        op = printed_expanded(cfg)
        assert not op_equal(op, h_tilde_sum(cfg))
        # the extra term only acts on monomials containing u, absent from P_1
        assert preserves(op, n) == (n < 2)

    def test_mismatch_is_reported(self, monkeypatch):
        monkeypatch.setattr(qes, "h_tilde_expanded", printed_expanded)
        with pytest.raises(ConstructionMismatch):
            qes.build_h_tilde(QESConfig(2, 0, 0, 1, 1))


class TestSpectrum:
    def test_n0(self):
        (st,) = qes_spectrum(QESConfig(0, 2, 1, Fraction(1, 3), 5))
        assert st.exact and st.alpha == 4 * Fraction(1, 3) and st.poly == 1

    def test_n1_golden_ratio(self, r):
        states = qes_spectrum(QESConfig(1, 0, 0, 1, 1))
        alphas = sorted(s.alpha for s in states)
        assert alphas == pytest.approx([(3 - 5**0.5) / 2, (3 + 5**0.5) / 2], abs=1e-14)
        for s in states:
            assert s.variable_class == SINGLE
            # typeset eigenvector sigma_1/(beta - alpha) + r, valid when sigma_1 = 1
            P = s.poly / s.poly.coeff(1, 0)
            assert float(P.coeff(0, 0)) == pytest.approx(1 / (1 - s.alpha), rel=1e-12)

    @pytest.mark.parametrize("m,p,beta,A", [(1, 0, Fraction(1, 2), 2), (-2, 1, Fraction(3, 5), Fraction(7, 2))])
    def test_n1_general_eigenvector(self, m, p, beta, A):
        cfg = QESConfig(1, m, p, beta, A)
        s1 = cfg.sigma(1)
        states = qes_spectrum(cfg)
        got = sorted(complex(s.alpha).real for s in states)
        assert got == pytest.approx(qes_n1_closed_form(cfg), abs=1e-12)
        for s in states:
            P = s.poly / s.poly.coeff(1, 0)
            alpha = float(s.alpha)
            assert float(P.coeff(0, 0)) == pytest.approx(s1 / (float(beta) * s1 - alpha), rel=1e-12)
            # the typeset constant sigma_1/(beta - alpha) only matches when sigma_1 = 1
            assert float(P.coeff(0, 0)) != pytest.approx(s1 / (float(beta) - alpha), rel=1e-6)

    def test_n2_four_states(self):
        cfg = QESConfig(2, 0, 0, 1, 1)
        states = qes_spectrum(cfg)
        assert len(states) == 4
        two = [s for s in states if s.variable_class == TWO]
        assert len(two) == 1 and two[0].exact and two[0].alpha == 3
        assert two[0].poly / two[0].poly.coeff(0, 1) == p24_expected(0, 0)

    @pytest.mark.parametrize("m,p,beta,A", [(0, 0, 1, 1), (1, 1, Fraction(1, 2), Fraction(1, 3)),
                                            (-2, 0, Fraction(3, 4), 2)])
    def test_n2_single_variable_closed_form(self, m, p, beta, A):
        cfg = QESConfig(2, m, p, beta, A)
        s1, s2, s3 = cfg.sigma(1), cfg.sigma(2), cfg.sigma(3)
        b, a = float(beta), float(A)
        for s in (s for s in qes_spectrum(cfg) if s.variable_class == SINGLE):
            al = float(s.alpha)
            ref = np.array([2 * a * s1 + a - (al - b * s2) * (al - b * s3), 2 * a * (al - b * s3), -2 * a * a])
            got = np.array([float(s.poly.coeff(k, 0)) for k in range(3)])
            np.testing.assert_allclose(got / got[2], ref / ref[2], rtol=1e-10)

    @pytest.mark.parametrize("n", range(9))
    def test_counting(self, n):
        states = qes_spectrum(QESConfig(n, 1, 0, Fraction(2, 3), Fraction(3, 2)))
        assert len(states) == dim_Pn(n)
        assert sum(s.variable_class == SINGLE for s in states) == n + 1

    def test_p24_independent_of_parameters(self):
        vecs = set()
        for beta, A in [(1, 1), (Fraction(1, 3), 5), (Fraction(7, 2), Fraction(1, 9))]:
            cfg = QESConfig(2, 1, 1, beta, A)
            M = matrix_on_basis(build_h_tilde(cfg), 2)
            (level,) = exact_eigen(M, [beta * 5])
            assert level.multiplicity == 1
            vecs.add(level.eigenvectors[0])
        assert len(vecs) == 1
        (P,) = vecs
        assert P / P.coeff(0, 1) == p24_expected(1, 1)

    def test_zero_coupling_limit(self):
        beta, m, p = Fraction(1, 2), 1, 0
        coulomb = np.array([float(beta) * (j + 2) for j in range(4)])
        errors = []
        for k in range(2, 7):
            cfg = QESConfig(3, m, p, beta, Fraction(1, 10**k))
            vals = np.array([complex(s.alpha).real for s in qes_spectrum(cfg)])
            errors.append(max(np.abs(coulomb - v).min() for v in vals))
        assert all(b < a for a, b in zip(errors, errors[1:]))
        assert errors[-1] < 1e-4

    def test_roots_continuous_in_coupling(self):
        def branches(step):
            rows = []
            for k in range(1, int(3 / step) + 1):
                states = qes_spectrum(QESConfig(2, 0, 0, 1, Fraction(k) * step))
                vals = sorted((complex(s.alpha) for s in states if s.variable_class == SINGLE), key=lambda z: z.real)
                assert all(v.imag == 0 for v in vals)
                rows.append([v.real for v in vals])
            return np.abs(np.diff(np.array(rows), axis=0)).max()

        coarse, fine = branches(Fraction(1, 20)), branches(Fraction(1, 40))
        # jumps shrink in proportion to the grid step: no branch switching
        assert fine < 0.6 * coarse


class TestCubic:
    @pytest.mark.parametrize("m,p,beta,A", [(0, 0, 1, 1), (2, 1, Fraction(3, 5), Fraction(7, 2))])
    def test_holds(self, m, p, beta, A):
        check = qes_cubic_check(m, p, beta, A)
        assert check and check.differences == []

    def test_unit_values(self):
        assert closed_form_cubic(0, 0, 1, 1).coefficients == (1, -6, 6, 3)

    def test_zero_coupling_factors(self):
        beta = Fraction(2, 7)
        cp = closed_form_cubic(1, 0, beta, 0)
        for k in (2, 3, 4):
            assert cp(beta * k) == 0

    def test_block_is_invariant(self):
        M = matrix_on_basis(build_h_tilde(QESConfig(2, 0, 1, Fraction(1, 2), 3)), 2)
        idx = M.basis.r_only()
        u_rows = [i for i in range(M.size) if i not in idx]
        assert all(M.entries[i][j] == 0 for i in u_rows for j in idx)
        assert char_poly(M.submatrix(idx)) == closed_form_cubic(0, 1, Fraction(1, 2), 3)


class TestResidual:
    def test_ground_state(self):
        (st,) = qes_spectrum(QESConfig(0, 0, 0, 1, 1))
        assert qes_hamiltonian_residual(st, qes_points(st, 20, np.random.default_rng(0))) < 1e-6

    def test_two_variable_state(self):
        (st,) = [s for s in qes_spectrum(QESConfig(2, 1, 0, 1, Fraction(1, 2))) if s.variable_class == TWO]
        assert qes_hamiltonian_residual(st, qes_points(st, 20, np.random.default_rng(1))) < 1e-6

    def test_numeric_alpha(self):
        rng = np.random.default_rng(2)
        for st in qes_spectrum(QESConfig(1, 0, 0, 1, 1)):
            assert qes_hamiltonian_residual(st, qes_points(st, 20, rng)) < 1e-5

    def test_wrong_alpha_is_detected(self):
        from dataclasses import replace
        (st,) = qes_spectrum(QESConfig(0, 0, 0, 1, 1))
        bad = replace(st, alpha=st.alpha + Fraction(1, 100))
        assert qes_hamiltonian_residual(bad, qes_points(st, 20, np.random.default_rng(3))) > 1e-3

    def test_complex_alpha_rejected(self):
        states = qes_spectrum(QESConfig(1, 0, 0, 1, -1))
        assert all(not s.is_real for s in states)
        with pytest.raises(ValueError):
            qes_hamiltonian_residual(states[0], [[1.0, 1.0, 1.0]])

import math
from fractions import Fraction

import numpy as np
import pytest

from coulomb_g2.coulomb import hydrogen_states, sturmian_states
from coulomb_g2.quad import (
    QuadratureGrid, TailError, default_grid, gram_matrix, inner_product, norm, normalize,
)


def states(m, p, alpha, nmax):
    return [s for n in range(nmax + 1) for s in hydrogen_states(n, m, p, alpha)]


class TestOracles:
    def test_ground_state_norm_closed_form(self):
        # int e^{-2 beta r} dV = pi / beta^3
        for alpha in (1, Fraction(3, 2)):
            (st,) = hydrogen_states(0, 0, 0, alpha)
            assert norm(st) ** 2 == pytest.approx(math.pi / float(st.beta) ** 3, rel=1e-13)

    def test_normalized_ground_state(self):
        (st,) = hydrogen_states(0, 0, 0, 1)
        s = normalize(st)
        assert inner_product(s, s, default_grid([s])) == pytest.approx(1, abs=1e-10)

    def test_1s_2s_overlap_closed_form(self):
        # <e^{-b1 r} | e^{-b2 r}(1 - c r)> = 4 pi [2/k^3 - 6 c/k^4], k = b1 + b2
        (s1,) = hydrogen_states(0, 0, 0, Fraction(3, 2))
        (s2,) = hydrogen_states(1, 0, 0, Fraction(3, 2))
        b1, b2 = float(s1.beta), float(s2.beta)
        c = -float(s2.poly.coeff(1, 0))
        k = b1 + b2
        exact = 4 * math.pi * (2 / k**3 - 6 * c / k**4)
        assert abs(exact) < 1e-15
        assert abs(inner_product(s1, s2, default_grid([s1, s2]))) < 1e-12

    def test_unrelated_decay_overlap(self):
        # different alphas, so the pair is not orthogonal: compare with the closed form
        (s1,) = hydrogen_states(0, 0, 0, 1)
        (s2,) = hydrogen_states(1, 0, 0, 3)
        b1, b2 = float(s1.beta), float(s2.beta)
        c = -float(s2.poly.coeff(1, 0))
        k = b1 + b2
        exact = 4 * math.pi * (2 / k**3 - 6 * c / k**4)
        assert inner_product(s1, s2, default_grid([s1, s2])) == pytest.approx(exact, rel=1e-12)


class TestSymmetry:
    def test_different_m(self):
        (a,) = hydrogen_states(0, 1, 0, 1)
        (b,) = hydrogen_states(0, -1, 0, 1)
        assert inner_product(a, b, QuadratureGrid(40)) == 0.0

    def test_different_parity(self):
        (a,) = hydrogen_states(0, 0, 0, 1)
        (b,) = hydrogen_states(0, 0, 1, 1)
        assert inner_product(a, b, QuadratureGrid(40)) == 0.0


class TestGram:
    def test_single_state(self):
        g = gram_matrix(hydrogen_states(0, 0, 0, 1))
        np.testing.assert_allclose(g.matrix, [[1.0]])
        assert g.max_offdiag_distinct == 0.0

    @pytest.mark.parametrize("m,p", [(0, 0), (1, 0), (0, 1), (2, 1)])
    def test_orthogonal_distinct_N(self, m, p):
        g = gram_matrix(states(m, p, 1, 4 - abs(m) - p))
        assert g.max_offdiag_distinct < 1e-8
        assert np.all(np.diag(g.raw) > 0) and np.all(np.isfinite(g.raw))
        np.testing.assert_allclose(g.matrix, g.matrix.T, atol=1e-12)

    def test_degenerate_pair_is_reported(self):
        g = gram_matrix(hydrogen_states(2, 0, 0, 1))
        assert g.distinct_energy_pairs == []
        assert abs(g.matrix[0, 1]) == pytest.approx(1 / math.sqrt(3), rel=1e-10)

    def test_order_doubling(self):
        sts = states(0, 0, 1, 4)
        grid = default_grid(sts)
        a, b = gram_matrix(sts, grid), gram_matrix(sts, grid.doubled())
        assert np.abs(a.matrix - b.matrix).max() < 1e-10

    def test_sturmian_pairing(self):
        sts = [s for n in range(4) for s in sturmian_states(n, 0, 0, Fraction(1, 2))]
        g = gram_matrix(sts, sturmian=True)
        assert g.max_offdiag_distinct < 1e-8

    def test_csv_and_json(self):
        g = gram_matrix(states(0, 0, 1, 1))
        lines = g.to_csv().splitlines()
        assert lines[0] == "state,n0_m0_p0_0,n1_m0_p0_1"
        assert len(lines) == 3
        assert g.to_json()["max_offdiag_distinct_N"] == g.max_offdiag_distinct

    def test_deterministic(self):
        sts = states(1, 0, Fraction(2, 3), 2)
        assert np.array_equal(gram_matrix(sts).raw, gram_matrix(sts).raw)


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureGrid(10, order=4)
        with pytest.raises(ValueError):
            QuadratureGrid(-1)

    def test_tail_error(self):
        (st,) = hydrogen_states(2, 0, 0, Fraction(1, 2))[:1]
        with pytest.raises(TailError):
            inner_product(st, st, QuadratureGrid(5.0))

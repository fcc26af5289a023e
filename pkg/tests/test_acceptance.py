"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import time
from fractions import Fraction

import pytest

from coulomb_g2 import verification as V
from coulomb_g2.algebra import dim_Pn
from coulomb_g2.coulomb import build_h_a
from coulomb_g2.diffop import matrix_on_basis
from coulomb_g2.spectral import CharPoly, char_poly

from conftest import ACCEPTANCE_LINES


def judge(k: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _poly_from_roots(roots) -> CharPoly:
    coeffs = [Fraction(1)]
    for a in roots:
        coeffs = [c - a * prev for c, prev in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
    return CharPoly(tuple(coeffs))


def test_01_coulomb_spectrum_exact():
    t0 = time.perf_counter()
    res = V.check_coulomb_spectrum(nmax=10, mmax=3)
    elapsed = time.perf_counter() - t0
    # independent route: the characteristic polynomial is the product over the expected multiset
    mismatched = 0
    for m in range(-3, 4):
        for p in (0, 1):
            for n in (4, 10):
                beta = Fraction(3, 7)
                M = matrix_on_basis(build_h_a(m, p, beta), n)
                roots = [beta * (a + 2 * b + 1 + p + abs(m)) for a, b in M.basis]
                mismatched += char_poly(M) != _poly_from_roots(roots)
    ok = res.passed and res.data["cases"] == 462 and elapsed < 60 and mismatched == 0
    judge(1, "Coulomb spectrum exactness", ok,
          f"{res.detail}; char-poly cross-check mismatches {mismatched}; {elapsed:.1f}s (< 60s)")


def test_02_low_degree_polynomials():
    res = V.check_low_degree_polys()
    judge(2, "low-degree eigenpolynomials", res.passed and len(res.data["failures"]) == 0, res.detail)


def test_03_energy_and_residual():
    res = V.check_energy_and_residual(Nmax=4, alpha=Fraction(1), points=20, h=1e-4)
    n_states = len(res.data["residuals"])
    # every (n, m, p) with N <= 4, one state per independent eigenpolynomial
    expected = sum(len(V.hydrogen_states(N - 1 - abs(m) - p, m, p, 1))
                   for N in range(1, 5) for m in range(-(N - 1), N) for p in (0, 1)
                   if N - 1 - abs(m) - p >= 0)
    ok = res.data["energy_ok"] and res.data["max_residual"] < 1e-6 and n_states == expected
    judge(3, "energy formula and FD residual", ok, res.detail)


def test_04_lie_identities():
    res = V.check_lie_identities(nmax=8, per_n=20)
    c = res.data["counts"]
    ok = res.passed and c["coulomb"] >= 20 and c["laguerre"] >= 20 and c["qes"] >= 20
    judge(4, "Lie-algebraic identities", ok, res.detail)


def test_05_qes_construction():
    res = V.check_qes_construction(count=20)
    judge(5, "QES triple construction", res.passed, res.detail)


def test_06_qes_low_degree():
    res = V.check_qes_low_degree(count=10)
    ok = (res.data["n1_max_error"] < 1e-12 and not res.data["cubic_failures"]
          and not res.data["p24_failures"] and len(res.data["configs"]) == 10)
    judge(6, "QES low-degree states", ok, res.detail)


def test_07_qes_counting():
    res = V.check_qes_counting(nmax=8)
    rows = res.data["rows"]
    ok = res.passed and all(total == dim_Pn(n) and single == n + 1 for n, _, _, total, single in rows)
    ok = ok and {r[0] for r in rows} == set(range(9))
    judge(7, "QES state counting", ok, res.detail)


def test_08_qes_residual():
    res = V.check_qes_residual(nmax=2, points=20)
    judge(8, "QES Hamiltonian residual", res.data["max_residual"] < 1e-5, res.detail)


def test_09_orthogonality():
    res = V.check_orthogonality(Nmax=5)
    ok = res.data["max_offdiag"] < 1e-8 and res.data["max_doubling_change"] < 1e-10
    judge(9, "orthogonality and quadrature stability", ok, res.detail)


def test_10_degeneracy_table():
    res = V.check_degeneracy(nmax=10)
    table = [row for row in res.data["table"] if row["m"] == 0 and row["p"] == 0]
    lines = ["n  mult  D(n)-D(n-1)  prose  agrees"]
    for row in table:
        lines.append(f"{row['n']:<3}{row['multiplicity']:<6}{row['hypotenuse']:<13}"
                     f"{row['prose'] if row['prose'] is not None else '-':<7}{row['prose_agrees']}")
    print("\n".join(lines))
    flagged = all(row["prose_agrees"] is not None for row in res.data["table"] if row["n"] > 0)
    judge(10, "degeneracy table", res.passed and flagged, res.detail)

"""Exact and numeric eigen-solving for operator matrices on ``P_n``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import BiPoly, GradedBasis, scalar_to_str
from .diffop import OpMatrix

DEFAULT_TOL = 1e-10


class IllConditioned(ArithmeticError):
    """A numeric eigenpair could not meet its residual tolerance."""


# -- exact dense linear algebra over Fraction -------------------------------


def _as_rows(M) -> list[list[Fraction]]:
    if isinstance(M, OpMatrix):
        return M.rows()
    return [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in M]


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (copy) and the pivot columns."""
    A = [list(row) for row in rows]
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        prow = [x * inv if x else x for x in A[r]]
        A[r] = prow
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if f != 0:
                    row = A[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact nullspace basis; vector k has a 1 in the k-th free column, 0 in the others."""
    if not rows:
        return []
    ncols = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        out.append(v)
    return out


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[1])


def matvec(rows, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in rows]


def shifted(rows: list[list[Fraction]], lam: Fraction) -> list[list[Fraction]]:
    out = [list(row) for row in rows]
    for i in range(len(out)):
        out[i][i] -= lam
    return out


# -- characteristic polynomial ----------------------------------------------


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial ``det(x I - M)``; coefficients highest degree first."""

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def derivative_coefficients(self) -> list[Fraction]:
        d = self.degree
        return [c * (d - k) for k, c in enumerate(self.coefficients[:-1])]

    def eval_complex(self, z: complex) -> tuple[complex, complex]:
        """Value and derivative at ``z``, evaluated in exact rational arithmetic."""
        zr, zi = Fraction(z.real), Fraction(z.imag)
        pr, pi = Fraction(0), Fraction(0)
        dr, di = Fraction(0), Fraction(0)
        for c in self.coefficients:
            # d <- d*z + p ; p <- p*z + c
            dr, di = dr * zr - di * zi + pr, dr * zi + di * zr + pi
            pr, pi = pr * zr - pi * zi + c, pr * zi + pi * zr
        return complex(float(pr), float(pi)), complex(float(dr), float(di))

    def to_json(self) -> list[str]:
        return [scalar_to_str(c) for c in self.coefficients]

    def squarefree(self) -> CharPoly:
        """``p / gcd(p, p')``: same roots, all simple."""
        f = _integer_poly(self.coefficients)
        df = [c * (len(f) - 1 - k) for k, c in enumerate(f[:-1])]
        if _coprime_mod_prime(f, df):
            return self
        g = _primitive_gcd(f, df)
        q, rem = _poly_divmod(list(self.coefficients), [Fraction(c) for c in g])
        assert not rem
        lead = q[0]
        return CharPoly(tuple(c / lead for c in q))


_PRIME = 2**61 - 1


def _integer_poly(coeffs) -> list[int]:
    L = math.lcm(*(Fraction(c).denominator for c in coeffs))
    return [int(Fraction(c) * L) for c in coeffs]


def _gf_gcd_degree(a: list[int], b: list[int], p: int) -> int:
    a = [x % p for x in a]
    b = [x % p for x in b]
    strip = lambda v: v[next((i for i, x in enumerate(v) if x), len(v)):]  # noqa: E731
    a, b = strip(a), strip(b)
    while b:
        inv = pow(b[0], -1, p)
        while len(a) >= len(b) and a:
            c = a[0] * inv % p
            for k in range(len(b)):
                a[k] = (a[k] - c * b[k]) % p
            a = strip(a)
        a, b = b, a
    return len(a) - 1


def _coprime_mod_prime(f: list[int], df: list[int]) -> bool:
    """Sufficient test for ``gcd(f, f') = 1`` over the rationals.

    When the prime does not divide the leading coefficients, the degree of
    the gcd modulo the prime bounds the rational one from above.
    """
    if not df or f[0] % _PRIME == 0 or df[0] % _PRIME == 0:
        return len(df) == 0
    return _gf_gcd_degree(f, df, _PRIME) == 0


def _primitive(a: list[int]) -> list[int]:
    g = math.gcd(*a)
    sign = -1 if a[0] < 0 else 1
    return [sign * x // g for x in a]


def _primitive_gcd(a: list[int], b: list[int]) -> list[int]:
    """gcd of integer polynomials by the primitive remainder sequence."""
    a, b = _primitive(a), _primitive(b)
    while len(b) > 1:
        # pseudo-remainder of a by b
        r = list(a)
        while len(r) >= len(b) and any(r):
            c, lb = r[0], b[0]
            r = [x * lb for x in r]
            for k in range(len(b)):
                r[k] -= c * b[k]
            r.pop(0)
            while r and r[0] == 0:
                r.pop(0)
        if not r:
            return b
        a, b = b, _primitive(r)
    return [1]


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    """Quotient and remainder of polynomials given highest degree first."""
    a = list(a)
    q = []
    lead = b[0]
    for _ in range(len(a) - len(b) + 1):
        c = a[0] / lead
        q.append(c)
        for k, bk in enumerate(b):
            a[k] -= c * bk
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return q, a


def _hessenberg(A: list[list[Fraction]]) -> list[list[Fraction]]:
    H = [list(row) for row in A]
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        t = H[m][m - 1]
        for i in range(m + 1, n):
            f = H[i][m - 1] / t
            if f == 0:
                continue
            ri, rm = H[i], H[m]
            for j in range(n):
                if rm[j]:
                    ri[j] -= f * rm[j]
            for row in H:
                if row[i]:
                    row[m] += f * row[i]
    return H


def char_poly(M) -> CharPoly:
    """Exact ``det(x I - M)`` by similarity reduction to Hessenberg form."""
    H = _hessenberg(_as_rows(M))
    n = len(H)
    # p[k]: ascending coefficients of the char poly of the leading k x k block
    p: list[list[Fraction]] = [[Fraction(1)]]
    for m in range(1, n + 1):
        prev = p[m - 1]
        cur = [Fraction(0)] * (m + 1)
        h = H[m - 1][m - 1]
        for k, c in enumerate(prev):
            cur[k + 1] += c
            cur[k] -= h * c
        t = Fraction(1)
        for i in range(1, m):
            t *= H[m - i][m - i - 1]
            if t == 0:
                break
            g = t * H[m - i - 1][m - 1]
            if g:
                for k, c in enumerate(p[m - i - 1]):
                    cur[k] -= g * c
        p.append(cur)
    return CharPoly(tuple(reversed(p[n])))


def determinant(M) -> Fraction:
    cp = char_poly(M)
    return cp.coefficients[-1] * (-1) ** cp.degree


# -- eigen-solvers -----------------------------------------------------------


@dataclass
class SpectralLevel:
    """One eigenvalue with its eigenpolynomials.

    ``multiplicity`` is the nullspace dimension for exact levels and the
    algebraic (cluster) multiplicity for numeric ones.
    """

    eigenvalue: object
    multiplicity: int
    eigenvectors: list[BiPoly] = field(default_factory=list)
    exact: bool = True
    residual: float = 0.0

    @property
    def is_real(self) -> bool:
        return self.exact or abs(complex(self.eigenvalue).imag) == 0.0

    def eigenvalue_json(self):
        if self.exact:
            return scalar_to_str(self.eigenvalue)
        z = complex(self.eigenvalue)
        return z.real if z.imag == 0 else [z.real, z.imag]

    def to_json(self) -> dict:
        return {
            "alpha": self.eigenvalue_json(),
            "exact": self.exact,
            "multiplicity": self.multiplicity,
            "polys": [v.to_json() for v in self.eigenvectors],
        }


def _lift(B: GradedBasis, coords) -> BiPoly:
    return B.lift(coords).normalized(B.monomials)


def _as_opmatrix(M) -> OpMatrix:
    return M if isinstance(M, OpMatrix) else OpMatrix.from_rows(M)


def exact_eigen(M: OpMatrix, candidates: Sequence) -> list[SpectralLevel]:
    """Exact eigenspaces of ``M`` for each candidate eigenvalue.

    Candidates with an empty nullspace are reported with multiplicity 0.
    """
    M = _as_opmatrix(M)
    rows = M.rows()
    levels = []
    seen = set()
    for lam in candidates:
        lam = Fraction(lam)
        if lam in seen:
            continue
        seen.add(lam)
        vecs = nullspace(shifted(rows, lam))
        levels.append(
            SpectralLevel(lam, len(vecs), [_lift(M.basis, v) for v in vecs], exact=True)
        )
    return levels


def _polish(cp: CharPoly, z: complex, steps: int = 8) -> complex:
    val, der = cp.eval_complex(z)
    for _ in range(steps):
        if der == 0 or val == 0:
            break
        cand = z - val / der
        cval, cder = cp.eval_complex(cand)
        if abs(cval) >= abs(val):
            break
        z, val, der = cand, cval, cder
    return z


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    groups: list[list[int]] = []
    for i in order:
        for g in groups:
            if abs(values[g[0]] - values[i]) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _numeric_null(A: np.ndarray, lam: complex, k: int, tol: float) -> np.ndarray:
    """Right singular vectors of ``A - lam I`` spanning its numerical nullspace."""
    D = A.shape[0]
    S = A - lam * np.eye(D)
    _, s, Vh = np.linalg.svd(S)
    scale = max(np.linalg.norm(A, 2), 1.0)
    dim = max(1, int(np.sum(s <= np.sqrt(tol) * scale)))
    dim = min(dim, k)
    return Vh[D - dim:].conj().T


def _clean_vector(v: np.ndarray, B: GradedBasis) -> BiPoly:
    v = np.asarray(v, dtype=complex)
    big = np.max(np.abs(v))
    piv = next(i for i in range(len(v)) if abs(v[i]) > 1e-8 * big)
    v = v / v[piv]
    if np.all(np.abs(v.imag) <= 1e-13 * np.max(np.abs(v))):
        v = v.real
    coords = [0 if abs(x) <= 1e-13 * np.max(np.abs(v)) else x for x in v]
    coords = [complex(x) if isinstance(x, complex) else float(x) for x in coords]
    return B.lift(coords)


def snap_rational(cp: CharPoly, z: complex, max_den: int = 10**6) -> Fraction | None:
    """A rational root of ``cp`` near ``z``, verified exactly, or ``None``."""
    if abs(z.imag) > 1e-8 * max(1.0, abs(z)):
        return None
    q = Fraction(z.real).limit_denominator(max_den)
    return q if cp(q) == 0 else None


def numeric_eigen(M: OpMatrix, tol: float = DEFAULT_TOL, snap: bool = True) -> list[SpectralLevel]:
    """All eigenvalues of ``M`` (complex included) with eigenpolynomials.

    Eigenvalues come from a dense eigensolver and are polished by Newton
    iteration on the exact characteristic polynomial.  When ``snap`` is set,
    eigenvalues that are verified rational roots are returned as exact levels
    with exact eigenvectors.  Raises :class:`IllConditioned` if a pair misses
    ``||(M - lam)v|| <= tol ||M|| ||v||``.
    """
    M = _as_opmatrix(M)
    A = M.to_numpy()
    D = A.shape[0]
    cp = char_poly(M)
    raw = np.linalg.eigvals(A) if D else np.array([])
    scale = max(np.linalg.norm(A, 2), 1.0) if D else 1.0
    # Multiple roots scatter under rounding; Newton on the square-free part
    # (all roots simple) pulls each estimate onto its distinct root, and the
    # multiplicity is the number of estimates that land there.
    sq = cp.squarefree()
    polished = np.array([_polish(sq, complex(z)) for z in raw])
    groups = _cluster(polished, 1e-8 * scale)
    if len(groups) != sq.degree:
        raise IllConditioned(
            f"found {len(groups)} distinct eigenvalues, the characteristic polynomial has {sq.degree}"
        )
    rows = M.rows()
    levels = []
    for g in groups:
        k = len(g)
        z = complex(np.mean(polished[g]))
        if abs(z.imag) <= 1e-12 * scale:
            z = complex(z.real, 0.0)
        q = snap_rational(cp, z) if snap else None
        if q is not None:
            vecs = nullspace(shifted(rows, q))
            levels.append(
                SpectralLevel(q, k, [_lift(M.basis, v) for v in vecs], exact=True)
            )
            continue
        V = _numeric_null(A, z, k, tol)
        res = 0.0
        polys = []
        for col in V.T:
            r = np.linalg.norm(A @ col - z * col) / (scale * np.linalg.norm(col))
            res = max(res, r)
            polys.append(_clean_vector(col, M.basis))
        if res > tol:
            raise IllConditioned(f"eigenpair near {z} has relative residual {res:.3e} > {tol:.1e}")
        value = z.real if z.imag == 0 else z
        levels.append(SpectralLevel(value, k, polys, exact=False, residual=res))
    return levels

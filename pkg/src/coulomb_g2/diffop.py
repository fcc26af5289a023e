"""Differential operators in (r, u) with polynomial coefficients.

An operator is stored in normal order, coefficients to the left of
derivatives: ``sum c_ij(r, u) d_r**i d_u**j``.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

import numpy as np

from .algebra import BiPoly, GradedBasis, basis, scalar_to_str

MAX_ORDER = 4

Index = tuple[int, int]


class OrderOverflowError(ValueError):
    """Raised when a composition produces derivatives beyond :data:`MAX_ORDER`."""


class PreservationError(ValueError):
    """An operator maps a basis monomial of ``P_n`` outside ``P_n``."""

    def __init__(self, n: int, monomial, image: BiPoly):
        self.n = n
        self.monomial = monomial
        self.image = image
        a, b = monomial
        super().__init__(
            f"operator maps r^{a} u^{b} outside P_{n}: image has grade {image.grade}"
        )


class DiffOp:
    """Immutable normal-ordered differential operator.

    ``A * B`` composes (``A`` acts after ``B``); multiplying by a scalar or a
    :class:`BiPoly` on the left multiplies every coefficient.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Index, BiPoly] | None = None):
        clean: dict[Index, BiPoly] = {}
        for (i, j), c in (terms or {}).items():
            if not isinstance(c, BiPoly):
                c = BiPoly.const(c)
            if c.is_zero():
                continue
            if not (0 <= i <= MAX_ORDER and 0 <= j <= MAX_ORDER):
                raise OrderOverflowError(f"derivative order {(i, j)} exceeds {MAX_ORDER}")
            clean[(i, j)] = c
        self._terms = clean

    @classmethod
    def identity(cls) -> DiffOp:
        return cls({(0, 0): BiPoly.const(1)})

    @classmethod
    def mult(cls, c) -> DiffOp:
        """Multiplication by a polynomial or scalar."""
        return cls({(0, 0): c if isinstance(c, BiPoly) else BiPoly.const(c)})

    @classmethod
    def d(cls, dr: int = 0, du: int = 0, coeff=None) -> DiffOp:
        c = BiPoly.const(1) if coeff is None else coeff
        return cls({(dr, du): c})

    @property
    def terms(self) -> dict[Index, BiPoly]:
        return dict(self._terms)

    def coeff(self, dr: int, du: int) -> BiPoly:
        return self._terms.get((dr, du), BiPoly.zero())

    @property
    def order(self) -> tuple[int, int]:
        if not self._terms:
            return (-1, -1)
        return (max(i for i, _ in self._terms), max(j for _, j in self._terms))

    def is_zero(self) -> bool:
        return not self._terms

    def __call__(self, p: BiPoly) -> BiPoly:
        return apply(self, p)

    def __add__(self, other):
        if isinstance(other, (numbers.Number, BiPoly)):
            other = DiffOp.mult(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return DiffOp(terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (numbers.Number, BiPoly)):
            other = DiffOp.mult(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        if isinstance(other, numbers.Number):
            return DiffOp({k: c * other for k, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (numbers.Number, BiPoly)):
            return DiffOp({k: other * c for k, c in self._terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return op_equal(self, other)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"DiffOp({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j) in sorted(self._terms):
            dname = "*".join(
                s for s in (
                    "" if i == 0 else ("Dr" if i == 1 else f"Dr^{i}"),
                    "" if j == 0 else ("Du" if j == 1 else f"Du^{j}"),
                ) if s
            )
            c = str(self._terms[(i, j)])
            parts.append(f"({c})*{dname}" if dname else f"({c})")
        return " + ".join(parts)

    def to_json(self) -> dict[str, list[dict]]:
        """``{"d_r,d_u": BiPoly.to_json()}``, keys sorted."""
        return {f"{i},{j}": self._terms[(i, j)].to_json() for (i, j) in sorted(self._terms)}

    @classmethod
    def from_json(cls, data: Mapping[str, list[dict]]) -> DiffOp:
        terms = {}
        for key, rows in data.items():
            i, j = (int(s) for s in key.split(","))
            terms[(i, j)] = BiPoly.from_json(rows)
        return cls(terms)


def apply(op: DiffOp, p: BiPoly) -> BiPoly:
    """Apply ``op`` to the polynomial ``p`` exactly."""
    out = BiPoly.zero()
    for (i, j), c in op._terms.items():
        dp = p.diff(i, j)
        if not dp.is_zero():
            out = out + c * dp
    return out


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """Normal-ordered product ``A o B`` via the Leibniz rule.

    Raises :class:`OrderOverflowError` if a nonzero term exceeds ``MAX_ORDER``.
    """
    acc: dict[Index, BiPoly] = {}
    for (i, j), a in A._terms.items():
        for (k, l), b in B._terms.items():
            # d_r^i d_u^j (b * D^{k,l}) = sum C(i,s) C(j,t) (d^{i-s,j-t} b) D^{s+k, t+l}
            for s in range(i + 1):
                for t in range(j + 1):
                    db = b.diff(i - s, j - t)
                    if db.is_zero():
                        continue
                    key = (s + k, t + l)
                    if key[0] > MAX_ORDER or key[1] > MAX_ORDER:
                        raise OrderOverflowError(
                            f"composition produces derivative order {key} > {MAX_ORDER}"
                        )
                    term = a * db * (comb(i, s) * comb(j, t))
                    acc[key] = acc[key] + term if key in acc else term
    return DiffOp(acc)


def commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    return compose(A, B) - compose(B, A)


def conjugate_gaussian(op: DiffOp, A) -> DiffOp:
    """``exp(A r^2/2) o op o exp(-A r^2/2)``: every ``d_r`` becomes ``d_r - A r``."""
    A = Fraction(A) if isinstance(A, int) else A
    if A == 0:
        return op
    shifted = DiffOp({(1, 0): BiPoly.const(1), (0, 0): BiPoly.r() * (-A)})
    powers = [DiffOp.identity()]
    for _ in range(op.order[0]):
        powers.append(compose(powers[-1], shifted))
    out = DiffOp()
    for (i, j), c in op._terms.items():
        out = out + c * compose(powers[i], DiffOp.d(0, j))
    return out


def op_equal(A: DiffOp, B: DiffOp) -> bool:
    """Exact equality of normal-ordered operators."""
    return A._terms == B._terms


@dataclass(frozen=True)
class OpMatrix:
    """Exact matrix of an operator on ``basis(n)``; column j is the image of monomial j."""

    n: int
    basis: GradedBasis
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> OpMatrix:
        """Wrap a bare square matrix.  The basis is the coordinate basis
        ``1, r, r^2, ...`` so eigenvectors lift to ``sum v_k r^k``."""
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if any(len(row) != len(entries) for row in entries):
            raise ValueError("matrix must be square")
        return cls(-1, GradedBasis(-1, tuple((k, 0) for k in range(len(entries)))), entries)

    @property
    def size(self) -> int:
        return len(self.entries)

    def rows(self) -> list[list]:
        return [list(row) for row in self.entries]

    def to_numpy(self, dtype=float) -> np.ndarray:
        return np.array([[dtype(x) for x in row] for row in self.entries], dtype=dtype)

    def column(self, j: int) -> list:
        return [row[j] for row in self.entries]

    def submatrix(self, idx) -> list[list]:
        return [[self.entries[i][j] for j in idx] for i in idx]

    def trace(self):
        return sum((self.entries[i][i] for i in range(self.size)), Fraction(0))

    def is_grade_triangular(self) -> bool:
        """True when no monomial is mapped to a strictly higher grade."""
        grades = [a + 2 * b for a, b in self.basis]
        for j, gj in enumerate(grades):
            for i, gi in enumerate(grades):
                if gi > gj and self.entries[i][j] != 0:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "basis": [list(m) for m in self.basis],
            "entries": [[scalar_to_str(x) for x in row] for row in self.entries],
        }


def matrix_on_basis(op: DiffOp, n: int) -> OpMatrix:
    """Matrix of ``op`` restricted to ``P_n``; checks that ``P_n`` is preserved."""
    B = basis(n)
    pos = {m: i for i, m in enumerate(B)}
    D = len(B)
    cols = []
    for a, b in B:
        image = apply(op, BiPoly.monomial(a, b))
        if image.grade > n:
            raise PreservationError(n, (a, b), image)
        col = [Fraction(0)] * D
        for mono, c in image.terms.items():
            col[pos[mono]] = c
        cols.append(col)
    entries = tuple(tuple(cols[j][i] for j in range(D)) for i in range(D))
    return OpMatrix(n, B, entries)


def preserves(op: DiffOp, n: int) -> bool:
    try:
        matrix_on_basis(op, n)
    except PreservationError:
        return False
    return True

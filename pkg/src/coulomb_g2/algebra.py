"""Exact scalars, bivariate polynomials in (r, u) and the graded monomial basis.

The variable ``u`` stands for rho**2.  Monomials ``r**a * u**b`` carry the
weighted grade ``a + 2*b``; the invariant subspace ``P_n`` is spanned by the
monomials of grade at most ``n``.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

Scalar = Fraction
Monomial = tuple[int, int]


def as_scalar(x) -> Fraction:
    """Convert ``x`` to an exact rational.

    Strings such as ``"3/7"`` or ``"0.25"`` are parsed exactly, floats are
    converted through their decimal representation (``0.1 -> 1/10``).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def scalar_to_str(x) -> str:
    """``"num/den"`` for rationals (``"num"`` when integral), ``repr`` otherwise."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex) and x.imag != 0:
        return repr(complex(x))
    return repr(float(x.real if isinstance(x, complex) else x))


class BiPoly:
    """Immutable polynomial in ``(r, u)``.

    Coefficients are normally :class:`~fractions.Fraction`; float or complex
    coefficients are tolerated for numerically computed eigenpolynomials.
    Zero coefficients are never stored.

    >>> r, u = BiPoly.r(), BiPoly.u()
    >>> (1 - r) * (1 + r)
    BiPoly(1 - r^2)
    >>> (r * u).grade
    3
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, object] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in monomial {(a, b)}")
            if isinstance(c, int) and not isinstance(c, bool):
                c = Fraction(c)
            if c != 0:
                clean[(int(a), int(b))] = c
        self._terms = clean
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c) -> BiPoly:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> BiPoly:
        return cls({(a, b): c})

    @classmethod
    def r(cls) -> BiPoly:
        return cls({(1, 0): 1})

    @classmethod
    def u(cls) -> BiPoly:
        return cls({(0, 1): 1})

    @classmethod
    def zero(cls) -> BiPoly:
        return cls()

    @classmethod
    def from_coords(cls, monomials: Iterable[Monomial], coords: Iterable) -> BiPoly:
        terms: dict[Monomial, object] = {}
        for mono, c in zip(monomials, coords):
            terms[mono] = c
        return cls(terms)

    # inspection

    @property
    def terms(self) -> dict[Monomial, object]:
        return dict(self._terms)

    def coeff(self, a: int, b: int):
        return self._terms.get((a, b), Fraction(0))

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=monomial_key)

    @property
    def grade(self) -> int:
        """Weighted degree ``max(a + 2b)``; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(a + 2 * b for a, b in self._terms)

    @property
    def u_degree(self) -> int:
        if not self._terms:
            return -1
        return max(b for _, b in self._terms)

    @property
    def r_degree(self) -> int:
        if not self._terms:
            return -1
        return max(a for a, _ in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self._terms.values())

    def coords(self, monomials: Iterable[Monomial]) -> list:
        return [self.coeff(a, b) for a, b in monomials]

    # arithmetic

    def _coerce(self, other) -> BiPoly | None:
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, numbers.Number):
            return BiPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        return BiPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return BiPoly({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        terms: dict[Monomial, object] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                terms[k] = terms.get(k, 0) + c1 * c2
        return BiPoly(terms)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            if isinstance(other, int):
                other = Fraction(other)
            return BiPoly({k: c / other for k, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = BiPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus

    def diff(self, dr: int = 0, du: int = 0) -> BiPoly:
        """Partial derivative ``d_r**dr d_u**du``."""
        terms: dict[Monomial, object] = {}
        for (a, b), c in self._terms.items():
            if a < dr or b < du:
                continue
            terms[(a - dr, b - du)] = c * _falling(a, dr) * _falling(b, du)
        return BiPoly(terms)

    def __call__(self, r, u):
        return self.evaluate(r, u)

    def evaluate(self, r, u):
        """Value at ``(r, u)``; exact if both inputs and coefficients are exact.

        Works elementwise for numpy arrays.
        """
        exact = is_exact(r) and is_exact(u) and self.is_exact()
        total = Fraction(0) if exact else 0.0
        wide = _is_longdouble(r) or _is_longdouble(u)
        for (a, b), c in self._terms.items():
            if not exact and isinstance(c, Fraction):
                c = np.longdouble(c.numerator) / np.longdouble(c.denominator) if wide else float(c)
            total = total + c * r**a * u**b
        return total

    def map_coeffs(self, f) -> BiPoly:
        return BiPoly({k: f(c) for k, c in self._terms.items()})

    def normalized(self, monomials: Iterable[Monomial] | None = None) -> BiPoly:
        """Scale so the first nonzero coefficient in graded order equals 1."""
        order = list(monomials) if monomials is not None else self.monomials()
        for mono in order:
            c = self._terms.get(mono)
            if c is not None:
                return self / c
        return self

    # display / serialization

    def __repr__(self):
        return f"BiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for a, b in self.monomials():
            c = self._terms[(a, b)]
            mono = "*".join(
                s for s in (
                    "" if a == 0 else ("r" if a == 1 else f"r^{a}"),
                    "" if b == 0 else ("u" if b == 1 else f"u^{b}"),
                ) if s
            )
            parts.append((c, mono))
        out = []
        for i, (c, mono) in enumerate(parts):
            neg = not isinstance(c, complex) and c < 0
            mag = -c if neg else c
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{scalar_to_str(mag)}*{mono}"
            else:
                body = scalar_to_str(mag)
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def to_json(self) -> list[dict]:
        """Serialize as ``[{"a", "b", "num", "den"}]`` sorted by basis order."""
        rows = []
        for a, b in self.monomials():
            c = self._terms[(a, b)]
            if isinstance(c, Fraction):
                rows.append({"a": a, "b": b, "num": str(c.numerator), "den": str(c.denominator)})
            else:
                rows.append({"a": a, "b": b, "value": _float_json(c)})
        return rows

    @classmethod
    def from_json(cls, rows: list[dict]) -> BiPoly:
        terms = {}
        for row in rows:
            if "num" in row:
                c = Fraction(int(row["num"]), int(row["den"]))
            else:
                c = _float_from_json(row["value"])
            terms[(int(row["a"]), int(row["b"]))] = c
        return cls(terms)


def _is_longdouble(x) -> bool:
    dt = getattr(x, "dtype", None)
    return dt is not None and dt in (np.longdouble, np.clongdouble)


def _float_json(c):
    c = complex(c)
    if c.imag == 0:
        return c.real
    return [c.real, c.imag]


def _float_from_json(v):
    if isinstance(v, list):
        return complex(v[0], v[1])
    return float(v)


def _falling(k: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= k - i
    return out


def monomial_key(mono: Monomial) -> tuple[int, int]:
    """Graded order: by grade, then by descending power of r."""
    a, b = mono
    return (a + 2 * b, -a)


def dim_Pn(n: int) -> int:
    """Dimension of ``P_n``: ``[n/2][(n+1)/2] + n + 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (n // 2) * ((n + 1) // 2) + n + 1


@dataclass(frozen=True)
class GradedBasis:
    """Ordered monomial basis of ``P_n`` (Newton triangle ``a + 2b <= n``)."""

    n: int
    monomials: tuple[Monomial, ...]

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __getitem__(self, i):
        return self.monomials[i]

    def index(self, mono: Monomial) -> int:
        return self._positions()[mono]

    def _positions(self) -> dict[Monomial, int]:
        return _positions(self.monomials)

    def lift(self, coords) -> BiPoly:
        return BiPoly.from_coords(self.monomials, coords)

    def r_only(self) -> list[int]:
        """Positions of the u-free monomials."""
        return [i for i, (_, b) in enumerate(self.monomials) if b == 0]

    def hypotenuse(self) -> list[Monomial]:
        return [m for m in self.monomials if m[0] + 2 * m[1] == self.n]


@lru_cache(maxsize=None)
def _positions(monomials: tuple[Monomial, ...]) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials)}


@lru_cache(maxsize=None)
def basis(n: int) -> GradedBasis:
    """Graded monomial basis of ``P_n``; within a grade, higher powers of r first."""
    if n < 0:
        raise ValueError("n must be non-negative")
    monos = [(a, b) for b in range(n // 2 + 1) for a in range(n - 2 * b + 1)]
    monos.sort(key=monomial_key)
    return GradedBasis(n, tuple(monos))


def poly_mul(p: BiPoly, q: BiPoly) -> BiPoly:
    return p * q


def poly_eval(p: BiPoly, r, u):
    return p.evaluate(r, u)

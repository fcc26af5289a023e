"""Quasi-exactly-solvable extension of the Coulomb problem.

Conjugating ``h_a + r W`` with the Gaussian ``exp(-A r^2/2)`` and choosing the
potential ``W`` to cancel the non-polynomial terms gives ``h~_n = h_a + A J4_n``,
which keeps ``P_n`` invariant.  Each eigenvalue ``alpha`` of ``h~_n`` defines a
Hamiltonian ``p^2/2 - alpha/r + W`` with one known eigenstate at
``E = -beta^2/2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import BiPoly, as_scalar, dim_Pn, is_exact
from .coulomb import (
    _real, _to_cyl, build_h_a, gauge_factor, laplacian_fd, max_residual, sample_points,
)
from .diffop import DiffOp, conjugate_gaussian, matrix_on_basis, op_equal
from .lie import generator
from .spectral import DEFAULT_TOL, CharPoly, char_poly, nullspace, numeric_eigen, rank

SINGLE = "single-variable"
TWO = "two-variable"
NON_POLYNOMIAL = "non-polynomial"


class ConstructionMismatch(AssertionError):
    """The independent constructions of ``h~_n`` disagree."""


class CountMismatch(AssertionError):
    """The number of single-variable or total eigenstates is not ``n+1`` / ``D(n)``."""


def _num(x):
    if is_exact(x) or isinstance(x, str):
        return as_scalar(x)
    return x


@dataclass(frozen=True)
class QESConfig:
    n: int
    m: int
    p: int
    beta: object
    A: object

    def __post_init__(self):
        if self.p not in (0, 1):
            raise ValueError("parity p must be 0 or 1")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        object.__setattr__(self, "beta", _num(self.beta))
        object.__setattr__(self, "A", _num(self.A))

    def sigma(self, k: int) -> int:
        return k + abs(self.m) + self.p

    @property
    def energy(self):
        return -self.beta * self.beta / 2


@dataclass
class QESState:
    config: QESConfig
    alpha: object
    poly: BiPoly
    variable_class: str
    exact: bool = True

    @property
    def is_real(self) -> bool:
        return self.exact or complex(self.alpha).imag == 0

    @property
    def energy(self):
        return self.config.energy

    def to_json(self) -> dict:
        from .algebra import scalar_to_str

        if self.exact:
            alpha = scalar_to_str(self.alpha)
        else:
            z = complex(self.alpha)
            alpha = z.real if z.imag == 0 else [z.real, z.imag]
        return {
            "alpha": alpha,
            "exact": self.exact,
            "real": self.is_real,
            "variable_class": self.variable_class,
            "poly": self.poly.to_json(),
        }


def potential_W(config: QESConfig, r):
    """``W(r) = A^2 r^2/2 - A (3/2 + n + p + |m| - beta r)``."""
    c = config
    half = Fraction(1, 2) if is_exact(c.A) and is_exact(c.beta) and is_exact(r) else 0.5
    return c.A * c.A * r * r * half - c.A * (3 * half + c.n + c.p + abs(c.m) - c.beta * r)


def _W_poly(config: QESConfig) -> BiPoly:
    c = config
    r = BiPoly.r()
    return c.A * c.A / 2 * r * r - c.A * (Fraction(3, 2) + c.n + c.p + abs(c.m) - c.beta * r)


def h_tilde_expanded(config: QESConfig) -> DiffOp:
    """``h~_n`` written out term by term with polynomial coefficients."""
    c = config
    s = 1 + c.p + abs(c.m)
    r, u = BiPoly.r(), BiPoly.u()
    return DiffOp({
        (2, 0): r * Fraction(-1, 2),
        (0, 2): r * u * -2,
        (1, 1): u * -2,
        (0, 1): -2 * ((1 + abs(c.m)) * r - c.beta * u - c.A * r * u),
        (1, 0): -(s - c.beta * r - c.A * r * r),
        (0, 0): c.beta * s - c.A * c.n * r,
    })


def h_tilde_sum(config: QESConfig) -> DiffOp:
    """``h_a + A J4_n``."""
    c = config
    return build_h_a(c.m, c.p, c.beta) + generator("J4", c.n) * c.A


def h_tilde_gauge(config: QESConfig) -> DiffOp:
    """Gaussian conjugation of ``h_a`` plus multiplication by ``r W``."""
    c = config
    return conjugate_gaussian(build_h_a(c.m, c.p, c.beta), c.A) + BiPoly.r() * _W_poly(c)


def build_h_tilde(config: QESConfig) -> DiffOp:
    """``h~_n``, cross-checked by three independent constructions.

    Raises :class:`ConstructionMismatch` if they differ.
    """
    direct = h_tilde_expanded(config)
    for name, other in (("h_a + A J4", h_tilde_sum(config)),
                        ("gaussian conjugation", h_tilde_gauge(config))):
        if not op_equal(direct, other):
            raise ConstructionMismatch(f"{name} differs from the expanded form by {other - direct}")
    return direct


def _split(vectors, B, exact: bool):
    """Split an eigenspace basis into u-free combinations and a completion."""
    u_idx = [i for i, (_, b) in enumerate(B) if b > 0]
    k = len(vectors)
    if exact:
        U = [[v[i] for v in vectors] for i in u_idx]
        combos = nullspace(U) if U else [[Fraction(int(a == j)) for a in range(k)] for j in range(k)]
        free = [[sum(c * v[i] for c, v in zip(w, vectors)) for i in range(len(B))] for w in combos]
        spans = lambda vs: rank([list(col) for col in zip(*vs)]) if vs else 0  # noqa: E731
    else:
        vectors = [[complex(x) for x in v] for v in vectors]
        V = np.array(vectors, dtype=complex).T
        U = V[u_idx]
        if len(u_idx):
            _, s, Vh = np.linalg.svd(U)
            s = np.concatenate([s, np.zeros(k - len(s))]) if len(s) < k else s
        else:
            s, Vh = np.zeros(k), np.eye(k)
        scale = max(1.0, float(np.abs(V).max()))
        null = [Vh[j].conj() for j in range(k) if s[j] <= 1e-9 * scale]
        free = [list(V @ w) for w in null]
        spans = lambda vs: (  # noqa: E731
            np.linalg.matrix_rank(np.array(vs, dtype=complex).T, tol=1e-9 * scale) if vs else 0
        )
    rest = []
    for v in vectors:
        if spans(free + rest + [v]) > len(free) + len(rest):
            rest.append(v)
    return free, rest


def _tidy(v) -> list:
    """Normalize a numeric vector: unit first significant entry, tiny entries zeroed,
    real dtype when the imaginary part is negligible."""
    v = np.asarray(v, dtype=complex)
    big = np.abs(v).max()
    v = v / v[np.argmax(np.abs(v) > 1e-8 * big)]
    big = np.abs(v).max()
    v[np.abs(v) <= 1e-13 * big] = 0
    if np.all(np.abs(v.imag) <= 1e-13 * big):
        return [float(x) for x in v.real]
    return [complex(x) for x in v]


def qes_spectrum(config: QESConfig, tol: float = DEFAULT_TOL) -> list[QESState]:
    """All ``D(n)`` polynomial eigenstates of ``h~_n`` on ``P_n``.

    Rational eigenvalues are detected and returned exactly; the others are
    numeric (possibly complex).  Raises :class:`CountMismatch` unless exactly
    ``n+1`` states are single-variable and the algebraic multiplicities add up
    to ``D(n)``.
    """
    c = config
    exact_params = is_exact(c.beta) and is_exact(c.A)
    h = build_h_tilde(c) if exact_params else h_tilde_sum(QESConfig(
        c.n, c.m, c.p, Fraction(c.beta), Fraction(c.A)))
    M = matrix_on_basis(h, c.n)
    B = M.basis
    states = []
    total = 0
    for level in numeric_eigen(M, tol=tol):
        total += level.multiplicity
        vecs = [P.coords(B.monomials) for P in level.eigenvectors]
        free, rest = _split(vecs, B, level.exact)
        for cls, group in ((SINGLE, free), (TWO, rest)):
            for v in group:
                P = B.lift(v if level.exact else _tidy(v)).normalized(B.monomials)
                states.append(QESState(c, level.eigenvalue, P, cls, level.exact))
    single = sum(s.variable_class == SINGLE for s in states)
    if single != c.n + 1 or total != dim_Pn(c.n):
        raise CountMismatch(
            f"n={c.n}: {single} single-variable states (expected {c.n + 1}), "
            f"total multiplicity {total} (expected {dim_Pn(c.n)})"
        )
    return states


def closed_form_cubic(m: int, p: int, beta, A) -> CharPoly:
    """Closed-form cubic whose roots are the single-variable eigenvalues at n = 2."""
    s1, s2, s3 = (k + abs(m) + p for k in (1, 2, 3))
    beta, A = as_scalar(beta), as_scalar(A)
    return CharPoly((
        Fraction(1),
        -beta * (s1 + s2 + s3),
        beta**2 * (s1 * s2 + s1 * s3 + s2 * s3) - A * (4 * s1 + 1),
        A * beta * s1 * (4 * s1 + 5) - beta**3 * s1 * s2 * s3,
    ))


@dataclass
class CubicCheck:
    holds: bool
    computed: CharPoly
    expected: CharPoly
    differences: list[tuple[int, Fraction, Fraction]]

    def __bool__(self):
        return self.holds


def qes_cubic_check(m: int, p: int, beta, A) -> CubicCheck:
    """Compare the characteristic polynomial of ``h~_2`` on ``{1, r, r^2}`` with the cubic."""
    cfg = QESConfig(2, m, p, as_scalar(beta), as_scalar(A))
    M = matrix_on_basis(build_h_tilde(cfg), 2)
    computed = char_poly(M.submatrix(M.basis.r_only()))
    expected = closed_form_cubic(m, p, cfg.beta, cfg.A)
    diffs = [
        (3 - k, a, b)
        for k, (a, b) in enumerate(zip(computed.coefficients, expected.coefficients))
        if a != b
    ]
    return CubicCheck(not diffs, computed, expected, diffs)


def qes_wavefunction(state: QESState, points, dtype=float):
    """``rho^|m| exp(-beta r - A r^2/2) z^p exp(i m phi) P(r, u)``."""
    c = state.config
    _, _, _, r, u = _to_cyl(points, dtype)
    P = state.poly
    if not state.exact:
        P = P.map_coeffs(lambda x: complex(x) if complex(x).imag else float(complex(x).real))
    return gauge_factor(c.m, c.p, c.beta, points, gaussian=c.A, dtype=dtype) * P.evaluate(r, u)


def qes_points(state: QESState, k: int, rng: np.random.Generator) -> np.ndarray:
    """Sample points in the shell ``0.5/beta < r < 3/beta``."""
    scale = 1 / float(state.config.beta)
    return sample_points(state.poly, k, rng, rmin=0.5 * scale, rmax=3.0 * scale)


def qes_hamiltonian_residual(state: QESState, points, h: float = 1e-4,
                             fallback_step: float = 1e-3, cancel_tol: float = 1e-7,
                             dtype=np.longdouble) -> float:
    """Max relative deviation of ``(-Lap/2 - alpha/r + W) Psi / Psi`` from ``-beta^2/2``."""
    if not state.is_real:
        raise ValueError("residual is only defined for real alpha")
    c = state.config
    alpha = _real(complex(state.alpha).real if not state.exact else state.alpha, dtype)
    E = _real(c.energy, dtype)
    cfg = QESConfig(c.n, c.m, c.p, _real(c.beta, dtype), _real(c.A, dtype))

    def local(pts, step):
        lap, psi, roundoff = laplacian_fd(lambda q: qes_wavefunction(state, q, dtype), pts, step, dtype)
        r = _to_cyl(pts, dtype)[3]
        local_e = -lap / (2 * psi) - alpha / r + potential_W(cfg, r)
        return np.abs(local_e - E) / abs(E), roundoff / (2 * np.abs(psi) * abs(E))

    return max_residual(state.poly, points, h, fallback_step, cancel_tol, local)

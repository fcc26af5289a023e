"""Hydrogen atom in (r, rho, phi) coordinates as an algebraic spectral problem.

The gauge-rotated Sturmian operator ``h_a`` acts on polynomials in
``(r, u = rho^2)``; its eigenpolynomials ``P`` give the wavefunctions
``Psi = rho^|m| exp(-beta r) z^p exp(i m phi) P(r, rho^2)``.
Units are hbar = mu = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import BiPoly, as_scalar, basis, is_exact
from .diffop import DiffOp, matrix_on_basis
from .spectral import SpectralLevel, exact_eigen, nullspace, shifted

EPS = np.finfo(float).eps


class DegeneratePoint(ValueError):
    """A sample point lies too close to a node or a singular set of the wavefunction."""


class MismatchReport(AssertionError):
    """A single-variable eigenpolynomial is not proportional to the Laguerre oracle."""


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    m: int
    p: int

    def __post_init__(self):
        if self.p not in (0, 1):
            raise ValueError("parity p must be 0 or 1")
        if self.n < 0:
            raise ValueError("n must be non-negative")

    @property
    def principal(self) -> int:
        return self.n + abs(self.m) + self.p + 1


@dataclass(frozen=True)
class HydrogenState:
    """A bound state: quantum numbers, coupling ``alpha``, ``beta = alpha/N`` and ``P``."""

    qn: QuantumNumbers
    alpha: object
    beta: object
    poly: BiPoly

    @property
    def energy(self):
        return -self.beta * self.beta / 2

    def to_json(self) -> dict:
        from .algebra import scalar_to_str

        return {
            "n": self.qn.n,
            "m": self.qn.m,
            "p": self.qn.p,
            "alpha": scalar_to_str(self.alpha),
            "beta": scalar_to_str(self.beta),
            "energy": scalar_to_str(self.energy),
            "poly": self.poly.to_json(),
        }


def _s(m: int, p: int) -> int:
    return 1 + p + abs(m)


def build_h_a(m: int, p: int, beta) -> DiffOp:
    """The algebraic operator ``h_a(r, u)`` with polynomial coefficients."""
    s = _s(m, p)
    r, u = BiPoly.r(), BiPoly.u()
    return DiffOp({
        (2, 0): r * Fraction(-1, 2),
        (0, 2): r * u * -2,
        (1, 1): u * -2,
        (0, 1): -2 * ((1 + abs(m)) * r - beta * u),
        (1, 0): -(s - beta * r),
        (0, 0): BiPoly.const(beta * s),
    })


def build_h_a_r(m: int, p: int, beta) -> DiffOp:
    """Restriction of ``h_a`` to u-independent functions (the Laguerre operator)."""
    s = _s(m, p)
    r = BiPoly.r()
    return DiffOp({
        (2, 0): r * Fraction(-1, 2),
        (1, 0): -(s - beta * r),
        (0, 0): BiPoly.const(beta * s),
    })


def coulomb_alpha(j: int, m: int, p: int, beta):
    """Sturmian eigenvalue ``beta (j + 1 + p + |m|)``."""
    return beta * (j + _s(m, p))


def coulomb_spectrum(n: int, m: int, p: int, beta) -> list[SpectralLevel]:
    """Exact spectrum of ``h_a`` on ``P_n``; one level per ``j = 0..n``."""
    beta = as_scalar(beta)
    M = matrix_on_basis(build_h_a(m, p, beta), n)
    return exact_eigen(M, [coulomb_alpha(j, m, p, beta) for j in range(n + 1)])


def energy(n: int, m: int, p: int, alpha):
    """``E = -alpha^2 / (2 N^2)`` with ``N = n + |m| + p + 1``."""
    N = n + abs(m) + p + 1
    if is_exact(alpha):
        return -Fraction(alpha) ** 2 / (2 * N * N)
    return -alpha * alpha / (2 * N * N)


def associated_laguerre(j: int, a, scale=1) -> BiPoly:
    """``L_j^{(a)}(scale * r)`` as a polynomial in r, by the three-term recurrence."""
    x = BiPoly.r() * scale
    prev, cur = BiPoly.const(1), 1 + a - x
    if j == 0:
        return prev
    for k in range(1, j):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / Fraction(k + 1)
    return cur


def single_variable_subfamily(n: int, m: int, p: int, beta) -> list[BiPoly]:
    """u-free eigenpolynomials of ``h_a`` on ``P_n``, one per level."""
    beta = as_scalar(beta)
    M = matrix_on_basis(build_h_a(m, p, beta), n)
    return _u_free_eigenpolys(M, [coulomb_alpha(j, m, p, beta) for j in range(n + 1)])


def _u_free_eigenpolys(M, candidates) -> list[BiPoly]:
    B = M.basis
    u_rows = [i for i, (_, b) in enumerate(B) if b > 0]
    D = len(B)
    out = []
    for lam in candidates:
        rows = shifted(M.rows(), Fraction(lam))
        for i in u_rows:
            sel = [Fraction(0)] * D
            sel[i] = Fraction(1)
            rows.append(sel)
        for v in nullspace(rows):
            out.append(B.lift(v).normalized(B.monomials))
    return out


@dataclass
class LaguerreMatch:
    j: int
    a: int
    ratio: Fraction
    poly: BiPoly


def laguerre_check(n: int, m: int, p: int, beta) -> list[LaguerreMatch]:
    """Match every single-variable eigenpolynomial with ``L_j^{(a)}(2 beta r)``.

    ``a = 1 + 2p + 2|m|``.  Raises :class:`MismatchReport` when a polynomial
    is not an exact rational multiple of the oracle.
    """
    beta = as_scalar(beta)
    a = 1 + 2 * p + 2 * abs(m)
    matches = []
    for P in single_variable_subfamily(n, m, p, beta):
        j = P.r_degree
        L = associated_laguerre(j, a, 2 * beta)
        ratio = L.coeff(0, 0) / P.coeff(0, 0)
        if P * ratio != L:
            raise MismatchReport(f"{P} is not proportional to L_{j}^({a})(2 beta r) = {L}")
        matches.append(LaguerreMatch(j, a, ratio, P))
    return matches


def hydrogen_states(n: int, m: int, p: int, alpha) -> list[HydrogenState]:
    """Eigenstates of principal number ``N = n+|m|+p+1`` at coupling ``alpha``.

    Returns one state per independent eigenpolynomial of degree ``n``
    (several when the level is degenerate).
    """
    qn = QuantumNumbers(n, m, p)
    if isinstance(alpha, float):
        beta = alpha / qn.principal
        polys = coulomb_spectrum(n, m, p, Fraction(beta))[-1].eigenvectors
        polys = [P.map_coeffs(float) for P in polys]
    else:
        alpha = as_scalar(alpha)
        beta = alpha / qn.principal
        polys = coulomb_spectrum(n, m, p, beta)[-1].eigenvectors
    return [HydrogenState(qn, alpha, beta, P) for P in polys]


def sturmian_states(n: int, m: int, p: int, beta) -> list[HydrogenState]:
    """States of degree ``n`` at fixed ``beta`` (fixed energy); ``alpha = beta N``."""
    qn = QuantumNumbers(n, m, p)
    beta = as_scalar(beta)
    polys = coulomb_spectrum(n, m, p, beta)[-1].eigenvectors
    return [HydrogenState(qn, beta * qn.principal, beta, P) for P in polys]


def _to_cyl(points, dtype=float):
    pts = np.atleast_2d(np.asarray(points, dtype=dtype))
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    u = x * x + y * y
    r = np.sqrt(u + z * z)
    return x, y, z, r, u


def _real(value, dtype):
    if isinstance(value, Fraction):
        return dtype(value.numerator) / dtype(value.denominator)
    return dtype(value)


def gauge_factor(m: int, p: int, beta, points, gaussian=0, dtype=float):
    """``rho^|m| exp(-beta r - gaussian r^2/2) z^p exp(i m phi)`` at Cartesian points."""
    x, y, z, r, u = _to_cyl(points, dtype)
    beta, gaussian = _real(beta, dtype), _real(gaussian, dtype)
    # rho^|m| e^{i m phi} = (x + i sgn(m) y)^|m|
    ang = (x + 1j * np.sign(m) * y) ** abs(m)
    return ang * np.exp(-beta * r - gaussian * r * r / 2) * z**p


def wavefunction_eval(state: HydrogenState, points, dtype=float):
    """``Psi = Gamma * P`` at Cartesian ``points`` (shape ``(3,)`` or ``(K, 3)``).

    ``dtype=np.longdouble`` evaluates in extended precision.
    """
    scalar = np.ndim(points) == 1
    _, _, _, r, u = _to_cyl(points, dtype)
    qn = state.qn
    val = gauge_factor(qn.m, qn.p, state.beta, points, dtype=dtype) * state.poly.evaluate(r, u)
    return complex(val[0]) if scalar else val


def laplacian_fd(f, points, h: float, dtype=float):
    """7-point central-difference Laplacian of ``f`` at ``points``.

    ``f`` maps a ``(K, 3)`` array to ``K`` values.  Returns the Laplacian,
    the centre values and an estimate ``eps * sum|f_k| / h^2`` of the rounding
    error of the stencil.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=dtype))
    eps = np.finfo(dtype).eps
    center = f(pts)
    acc = -6 * center
    mag = 6 * np.abs(center)
    for axis in range(3):
        e = np.zeros(3, dtype=dtype)
        e[axis] = h
        fp, fm = f(pts + e), f(pts - e)
        acc = acc + fp + fm
        mag = mag + np.abs(fp) + np.abs(fm)
    return acc / dtype(h) ** 2, center, 4 * eps * mag / dtype(h) ** 2


def poly_condition(P: BiPoly, r, u):
    """``|P| / sum |c r^a u^b|``: small near nodes, where P suffers cancellation."""
    absP = P.map_coeffs(lambda c: abs(complex(c)))
    denom = absP.evaluate(r, u)
    return np.abs(P.evaluate(r, u)) / np.where(denom == 0, 1.0, denom)


def check_point(P: BiPoly, point, margin: float, node_tol: float = 0.05):
    """Raise :class:`DegeneratePoint` for points near the origin, the z-axis, the
    plane z = 0 (the cone r = rho) or a nodal surface of ``P``."""
    _, _, z, r, u = _to_cyl(point)
    rho = math.sqrt(u[0])
    if r[0] < margin or rho < margin or abs(z[0]) < margin:
        raise DegeneratePoint(f"point {tuple(np.ravel(point))} within {margin} of a singular set")
    if poly_condition(P, r, u)[0] < node_tol:
        raise DegeneratePoint(f"point {tuple(np.ravel(point))} is too close to a node of P")


def sample_points(P: BiPoly, k: int, rng: np.random.Generator, rmin=0.5, rmax=3.0,
                  margin=1e-2, node_tol=0.05, angle_tol=0.2) -> np.ndarray:
    """``k`` random points in the shell ``rmin < r < rmax`` avoiding nodes and singular sets.

    Points also keep ``rho >= angle_tol * r`` and ``|z| >= angle_tol * r``, away
    from the angular nodes of ``rho^|m|`` and ``z^p``.
    """
    out = []
    while len(out) < k:
        v = rng.normal(size=3)
        v *= rng.uniform(rmin, rmax) / np.linalg.norm(v)
        if min(np.hypot(v[0], v[1]), abs(v[2])) < angle_tol * rmin:
            continue
        if min(np.hypot(v[0], v[1]), abs(v[2])) < angle_tol * np.linalg.norm(v):
            continue
        try:
            check_point(P, v, margin, node_tol)
        except DegeneratePoint:
            continue
        out.append(v)
    return np.array(out)


def state_points(state: HydrogenState, k: int, rng: np.random.Generator) -> np.ndarray:
    """Sample points for ``state`` in the shell ``0.5/beta < r < 3/beta``."""
    scale = 1 / float(state.beta)
    return sample_points(state.poly, k, rng, rmin=0.5 * scale, rmax=3.0 * scale)


def schrodinger_residual(state: HydrogenState, points, h: float = 1e-4,
                         fallback_step: float = 1e-3, cancel_tol: float = 1e-7,
                         dtype=np.longdouble) -> float:
    """Max over ``points`` of ``|(-Lap Psi/2 - alpha Psi/r)/Psi - E| / |E|``.

    The stencil is evaluated in ``dtype`` (extended precision by default).  A
    point whose estimated rounding error exceeds ``cancel_tol`` (relative to
    ``|E|``) is redone with ``fallback_step``.
    """
    alpha, E = _real(state.alpha, dtype), _real(state.energy, dtype)

    def local(pts, step):
        lap, psi, roundoff = laplacian_fd(
            lambda q: wavefunction_eval(state, q, dtype), pts, step, dtype)
        r = _to_cyl(pts, dtype)[3]
        local_e = -lap / (2 * psi) - alpha / r
        return np.abs(local_e - E) / abs(E), roundoff / (2 * np.abs(psi) * abs(E))

    return max_residual(state.poly, points, h, fallback_step, cancel_tol, local)


def max_residual(P, points, h, fallback_step, cancel_tol, local) -> float:
    """Shared driver: validate points, evaluate ``local``, redo cancelling points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    for q in pts:
        check_point(P, q, margin=10 * h)
    res, roundoff = local(pts, h)
    redo = roundoff > cancel_tol
    if np.any(redo):
        res = res.copy()
        res[redo] = local(pts[redo], fallback_step)[0]
    return float(np.max(res))

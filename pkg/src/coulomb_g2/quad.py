"""L2 inner products, norms and Gram matrices of reconstructed hydrogen states.

Integrals run over the quarter plane ``rho >= 0, z >= 0`` of the meridian
half-plane; the azimuthal integral is done analytically and the lower
half-space is folded in by parity.  The quarter plane is parametrized in
polar form ``rho = r sin(t), z = r cos(t)`` with a tensor Gauss-Legendre rule
on ``[0, R] x [0, pi/2]``: the factor ``exp(-beta r)`` then is smooth at the
origin, which a rule in ``(rho, z)`` directly would not see.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .coulomb import HydrogenState


class TailError(ValueError):
    """The integrand is not negligible at the truncation radius."""


TAIL_TOL = 1e-14


@dataclass(frozen=True)
class QuadratureGrid:
    R: float
    order: int = 96

    def __post_init__(self):
        if self.order < 8:
            raise ValueError("quadrature order must be at least 8")
        if self.R <= 0:
            raise ValueError("truncation radius must be positive")

    @cached_property
    def nodes(self):
        x, w = np.polynomial.legendre.leggauss(self.order)
        r = (x + 1) * self.R / 2
        t = (x + 1) * np.pi / 4
        rr, tt = np.meshgrid(r, t, indexing="ij")
        weights = np.outer(w * self.R / 2, w * np.pi / 4) * rr  # dr dt Jacobian r
        return rr, tt, weights

    def doubled(self) -> QuadratureGrid:
        return QuadratureGrid(self.R, 2 * self.order)


def default_grid(states, order: int = 96) -> QuadratureGrid:
    """``R = 40 / beta_min``."""
    beta_min = min(float(s.beta) for s in states)
    return QuadratureGrid(40.0 / beta_min, order)


def _radial_part(state: HydrogenState, r, rho, z):
    qn = state.qn
    return rho ** abs(qn.m) * np.exp(-float(state.beta) * r) * z**qn.p * state.poly.evaluate(r, rho * rho)


def _integrand(s1: HydrogenState, s2: HydrogenState, r, t, sturmian: bool):
    rho, z = r * np.sin(t), r * np.cos(t)
    f = np.conj(_radial_part(s1, r, rho, z)) * _radial_part(s2, r, rho, z) * rho
    return f / r if sturmian else f


def _check_tail(s1, s2, grid: QuadratureGrid, sturmian: bool):
    rr, tt, _ = grid.nodes
    t = tt[0]
    edge = np.abs(_integrand(s1, s2, np.full_like(t, grid.R), t, sturmian))
    body = np.abs(_integrand(s1, s2, rr, tt, sturmian))
    peak = body.max()
    if peak > 0 and edge.max() > TAIL_TOL * peak:
        raise TailError(
            f"integrand at R={grid.R:g} is {edge.max() / peak:.2e} of its peak (> {TAIL_TOL:g})"
        )


def inner_product(s1: HydrogenState, s2: HydrogenState, grid: QuadratureGrid,
                  sturmian: bool = False) -> float:
    """``<Psi_1 | Psi_2>``; with ``sturmian`` the weight ``1/r`` is included.

    States with different ``m`` or opposite parity are orthogonal by symmetry
    and return exactly 0 without quadrature.
    """
    if s1.qn.m != s2.qn.m or s1.qn.p != s2.qn.p:
        return 0.0
    _check_tail(s1, s2, grid, sturmian)
    rr, tt, w = grid.nodes
    vals = w * _integrand(s1, s2, rr, tt, sturmian)
    # 2 pi from phi, 2 from z < 0
    total = 4 * np.pi * np.sum(vals)
    return float(np.real(total))


@dataclass
class GramReport:
    states: list[HydrogenState]
    raw: np.ndarray
    matrix: np.ndarray
    normalized: bool = True
    sturmian: bool = False
    distinct_energy_pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def max_offdiag_distinct(self) -> float:
        """Largest ``|G_ij|`` over pairs with different principal numbers."""
        if not self.distinct_energy_pairs:
            return 0.0
        return float(max(abs(self.matrix[i, j]) for i, j in self.distinct_energy_pairs))

    def to_json(self) -> dict:
        return {
            "states": [
                {"n": s.qn.n, "m": s.qn.m, "p": s.qn.p, "N": s.qn.principal, "poly": str(s.poly)}
                for s in self.states
            ],
            "normalized": self.normalized,
            "sturmian": self.sturmian,
            "matrix": self.matrix.tolist(),
            "max_offdiag_distinct_N": self.max_offdiag_distinct,
        }

    def to_csv(self) -> str:
        labels = [f"n{s.qn.n}_m{s.qn.m}_p{s.qn.p}_{k}" for k, s in enumerate(self.states)]
        lines = ["state," + ",".join(labels)]
        for lab, row in zip(labels, self.matrix):
            lines.append(lab + "," + ",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def gram_matrix(states: list[HydrogenState], grid: QuadratureGrid | None = None,
                sturmian: bool = False) -> GramReport:
    """Normalized Gram matrix of ``states``.

    For the physical pairing the states should share ``m``, ``p`` and
    ``alpha``; for the Sturmian pairing they should share ``beta``.
    """
    grid = grid or default_grid(states)
    k = len(states)
    G = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = inner_product(states[i], states[j], grid, sturmian)
    d = np.sqrt(np.diag(G))
    pairs = [
        (i, j) for i in range(k) for j in range(i + 1, k)
        if states[i].qn.principal != states[j].qn.principal
    ]
    return GramReport(states, G, G / np.outer(d, d), True, sturmian, pairs)


def norm(state: HydrogenState, grid: QuadratureGrid | None = None) -> float:
    grid = grid or default_grid([state])
    return float(np.sqrt(inner_product(state, state, grid)))


def normalize(state: HydrogenState, grid: QuadratureGrid | None = None) -> HydrogenState:
    """Copy of ``state`` whose polynomial is scaled to unit L2 norm."""
    c = 1.0 / norm(state, grid)
    return replace(state, poly=state.poly.map_coeffs(lambda x: float(x) * c))

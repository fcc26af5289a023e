"""Generators of the algebra g^(2), the gl(2) x R^3 subalgebra and the Lie-algebraic
forms of the Coulomb, Laguerre and quasi-exactly-solvable operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebra import BiPoly, as_scalar
from .diffop import DiffOp, commutator, compose, op_equal
from .spectral import rref

GENERATOR_NAMES = (
    "Jtilde0", "J1", "J2", "J3", "J4", "R0", "R1", "R2", "T0", "T1", "T2",
    "sl2_Jplus", "sl2_J0", "sl2_Jminus",
)

GL2_R3 = ("J1", "J2", "J3", "J4", "R0", "R1", "R2")


class NonClosure(ArithmeticError):
    """A commutator is not a linear combination of the given generators."""

    def __init__(self, pair, residual: DiffOp):
        self.pair = pair
        self.residual = residual
        super().__init__(f"[{pair[0]}, {pair[1]}] leaves the span; residual {residual}")


@dataclass(frozen=True)
class GeneratorId:
    name: str
    n: Fraction = Fraction(0)

    def __post_init__(self):
        if self.name not in GENERATOR_NAMES:
            raise ValueError(f"unknown generator {self.name!r}")
        object.__setattr__(self, "n", as_scalar(self.n))


def _euler(n: Fraction) -> DiffOp:
    r, u = BiPoly.r(), BiPoly.u()
    return DiffOp({(1, 0): r, (0, 1): 2 * u, (0, 0): BiPoly.const(-n)})


def generator(gid: GeneratorId | str, n=None) -> DiffOp:
    """The differential operator of a generator at parameter ``n``.

    ``generator("J4", 3)`` and ``generator(GeneratorId("J4", 3))`` are equivalent.
    """
    if isinstance(gid, str):
        gid = GeneratorId(gid, 0 if n is None else n)
    name, n = gid.name, gid.n
    r, u, one = BiPoly.r(), BiPoly.u(), BiPoly.const(1)
    if name == "Jtilde0":
        return _euler(n)
    if name == "J1":
        return DiffOp({(1, 0): one})
    if name == "J2":
        return DiffOp({(1, 0): r, (0, 0): BiPoly.const(-n / 3)})
    if name == "J3":
        return DiffOp({(0, 1): 2 * u, (0, 0): BiPoly.const(-n / 3)})
    if name == "J4":
        return DiffOp({(1, 0): r * r, (0, 1): 2 * r * u, (0, 0): r * -n})
    if name in ("R0", "R1", "R2"):
        return DiffOp({(0, 1): r ** int(name[1])})
    if name == "T0":
        return DiffOp({(2, 0): u})
    if name == "T1":
        return u * compose(DiffOp.d(1, 0), _euler(n))
    if name == "T2":
        return u * compose(_euler(n), _euler(n) + 1)
    if name == "sl2_Jplus":
        return DiffOp({(1, 0): r * r, (0, 0): r * -n})
    if name == "sl2_J0":
        return DiffOp({(1, 0): 2 * r, (0, 0): BiPoly.const(-n)})
    return DiffOp({(1, 0): one})  # sl2_Jminus


def _flatten(op: DiffOp) -> dict:
    out = {}
    for (i, j), c in op.terms.items():
        for (a, b), v in c.terms.items():
            out[(i, j, a, b)] = v
    return out


def decompose(op: DiffOp, basis_ops: dict[str, DiffOp]) -> tuple[dict[str, Fraction], DiffOp]:
    """Express ``op`` as an exact linear combination of ``basis_ops``.

    Returns the coefficients and the residual ``op - sum c_k B_k``, which is
    zero exactly when ``op`` lies in the span.
    """
    names = list(basis_ops)
    flat = [_flatten(basis_ops[k]) for k in names]
    target = _flatten(op)
    keys = sorted(set(target).union(*[f.keys() for f in flat]))
    rows = [[f.get(k, Fraction(0)) for f in flat] + [target.get(k, Fraction(0))] for k in keys]
    R, pivots = rref(rows)
    coeffs = {name: Fraction(0) for name in names}
    for i, pc in enumerate(pivots):
        if pc < len(names):
            coeffs[names[pc]] = R[i][-1]
    residual = op
    for name, c in coeffs.items():
        if c:
            residual = residual - basis_ops[name] * c
    return {k: v for k, v in coeffs.items() if v}, residual


def closure_check(ids, n=0) -> dict[tuple[str, str], dict[str, Fraction]]:
    """Commutator table of the given generators over their span plus the identity.

    ``ids`` are generator names (or :class:`GeneratorId`) from the gl(2) x R^3
    set.  Raises :class:`NonClosure` for the first pair whose commutator leaves
    the span.
    """
    gids = [g if isinstance(g, GeneratorId) else GeneratorId(g, n) for g in ids]
    ops = {g.name: generator(g) for g in gids}
    span = dict(ops)
    span["1"] = DiffOp.identity()
    table = {}
    for a, b in combinations(ops, 2):
        coeffs, residual = decompose(commutator(ops[a], ops[b]), span)
        if not residual.is_zero():
            raise NonClosure((a, b), residual)
        table[(a, b)] = coeffs
    return table


def lie_form_coulomb(n, m: int, p: int, beta) -> DiffOp:
    """``h_a`` assembled from the gl(2) x R^3 generators at parameter ``n``."""
    n = as_scalar(n)
    J1, J2, J3 = generator("J1", n), generator("J2", n), generator("J3", n)
    R1, J0 = generator("R1", n), generator("Jtilde0", n)
    s = 1 + p + abs(m)
    return (
        compose(J2, J1) * Fraction(-1, 2)
        - compose(J3, R1)
        - compose(J3, J1)
        + J0 * beta
        - J1 * (s + n / 2)
        - R1 * (2 * (1 + abs(m) + n / 6))
        + beta * (s + n)
    )


def lie_form_laguerre(m: int, p: int, beta) -> DiffOp:
    """The Laguerre operator from ``J1`` and ``J2`` at ``n = 0``."""
    J1, J2 = generator("J1", 0), generator("J2", 0)
    s = 1 + p + abs(m)
    return compose(J2, J1) * Fraction(-1, 2) + J2 * beta - J1 * s + beta * s


def lie_form_qes(n, m: int, p: int, beta, A) -> DiffOp:
    """Coulomb Lie form plus ``A`` times the raising generator ``J4``."""
    return lie_form_coulomb(n, m, p, beta) + generator("J4", n) * A


IDENTITIES = ("coulomb", "laguerre", "qes")
# labels used by the JSON report interface
IDENTITY_ALIASES = {"eq16": "coulomb", "eq18": "laguerre", "eq23": "qes"}


def identity_report(identity: str, **params) -> dict:
    """Check one Lie-algebraic identity; JSON-ready report.

    ``identity`` is ``"coulomb"`` (needs n, m, p, beta), ``"laguerre"``
    (m, p, beta) or ``"qes"`` (n, m, p, beta, A), or one of the aliases in
    :data:`IDENTITY_ALIASES`.  The report echoes the name as given.
    """
    from .coulomb import build_h_a, build_h_a_r
    from .qes import QESConfig, build_h_tilde

    kind = IDENTITY_ALIASES.get(identity, identity)
    if kind == "coulomb":
        lhs = lie_form_coulomb(params["n"], params["m"], params["p"], params["beta"])
        rhs = build_h_a(params["m"], params["p"], params["beta"])
    elif kind == "laguerre":
        lhs = lie_form_laguerre(params["m"], params["p"], params["beta"])
        rhs = build_h_a_r(params["m"], params["p"], params["beta"])
    elif kind == "qes":
        cfg = QESConfig(params["n"], params["m"], params["p"], params["beta"], params["A"])
        lhs = lie_form_qes(cfg.n, cfg.m, cfg.p, cfg.beta, cfg.A)
        rhs = build_h_tilde(cfg)
    else:
        raise ValueError(f"unknown identity {identity!r}")
    holds = op_equal(lhs, rhs)
    return {
        "identity": identity,
        "parameters": {k: str(v) for k, v in params.items()},
        "holds": holds,
        "residual_operator": None if holds else (lhs - rhs).to_json(),
    }

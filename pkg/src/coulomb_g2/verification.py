"""Batch verification suites.

Every function returns a :class:`CheckResult`; ``data`` carries the measured
quantities so callers can apply their own tolerances.  Randomized parameter
sets are drawn from a seeded :class:`random.Random`, so reports are
reproducible.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import BiPoly, basis, dim_Pn
from .coulomb import (
    coulomb_alpha, coulomb_spectrum, energy, hydrogen_states, laguerre_check,
    schrodinger_residual, state_points,
)
from .diffop import matrix_on_basis, preserves
from .lie import GL2_R3, closure_check, generator, identity_report
from .qes import (
    SINGLE, TWO, QESConfig, build_h_tilde, qes_cubic_check, qes_hamiltonian_residual,
    qes_points, qes_spectrum,
)
from .quad import default_grid, gram_matrix
from .spectral import exact_eigen


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def random_fraction(rng: random.Random, lo: int = 1, hi: int = 9) -> Fraction:
    """A positive rational with small numerator and denominator."""
    return Fraction(rng.randint(lo, hi * 3), rng.randint(1, 7))


def _random_qn(rng: random.Random, mmax: int = 3) -> tuple[int, int]:
    return rng.randint(-mmax, mmax), rng.randint(0, 1)


# -- Coulomb ------------------------------------------------------------------

@_timed
def check_coulomb_spectrum(nmax: int = 10, mmax: int = 3,
                           betas=(Fraction(1), Fraction(1, 2), Fraction(3, 7))) -> CheckResult:
    """Exact spectrum ``{beta (j+1+p+|m|)}`` with total multiplicity ``D(n)``."""
    failures = []
    cases = 0
    for beta in betas:
        for n in range(nmax + 1):
            for m in range(-mmax, mmax + 1):
                for p in (0, 1):
                    cases += 1
                    levels = coulomb_spectrum(n, m, p, beta)
                    alphas = [lv.eigenvalue for lv in levels]
                    expected = [coulomb_alpha(j, m, p, beta) for j in range(n + 1)]
                    total = sum(lv.multiplicity for lv in levels)
                    if alphas != expected or total != dim_Pn(n) or any(
                            lv.multiplicity == 0 for lv in levels):
                        failures.append((n, m, p, str(beta)))
    return CheckResult(
        "coulomb spectrum exactness",
        not failures,
        f"{cases} (n, m, p, beta) cases, {len(failures)} failures",
        {"cases": cases, "failures": failures},
    )


def low_degree_polys(m: int, p: int, alpha) -> dict[str, BiPoly]:
    """Closed-form ``P_1``, ``P_2^(1)``, ``P_2^(2)`` at coupling ``alpha``."""
    alpha = Fraction(alpha)
    s = abs(m) + p
    r, u = BiPoly.r(), BiPoly.u()
    c1 = 2 * alpha / ((s + 1) * (s + 3))
    return {
        "P1": 1 - alpha / ((s + 1) * (s + 2)) * r,
        "P2_1": 1 - c1 * r + 2 * alpha**2 / ((s + 1) * (s + 3) ** 2 * (2 * s + 3)) * r * r,
        "P2_2": 1 - c1 * r + alpha**2 / ((abs(m) + 1) * (s + 1) * (s + 3) ** 2) * u,
    }


@_timed
def check_low_degree_polys(params=((0, 0, Fraction(1)), (1, 0, Fraction(3, 2)),
                             (-2, 1, Fraction(5, 7)))) -> CheckResult:
    """Computed eigenpolynomials at ``N = s+2`` and ``N = s+3`` equal the closed forms."""
    failures = []
    for m, p, alpha in params:
        ref = low_degree_polys(m, p, alpha)
        P1 = [st.poly for st in hydrogen_states(1, m, p, alpha)]
        P2 = [st.poly for st in hydrogen_states(2, m, p, alpha)]
        if P1 != [ref["P1"]]:
            failures.append(((m, p, str(alpha)), "P1", [str(q) for q in P1]))
        if len(P2) != 2 or set(P2) != {ref["P2_1"], ref["P2_2"]}:
            failures.append(((m, p, str(alpha)), "P2", [str(q) for q in P2]))
    return CheckResult(
        "low-degree eigenpolynomials",
        not failures,
        f"{len(params)} parameter sets, {len(failures)} mismatches",
        {"failures": failures},
    )


def states_up_to(Nmax: int, alpha) -> list:
    """All hydrogen states with principal number ``N <= Nmax`` (both signs of m)."""
    out = []
    for N in range(1, Nmax + 1):
        for m in range(-(N - 1), N):
            for p in (0, 1):
                n = N - 1 - abs(m) - p
                if n >= 0:
                    out.extend(hydrogen_states(n, m, p, alpha))
    return out


@_timed
def check_energy_and_residual(Nmax: int = 4, alpha=Fraction(1), points: int = 20,
                              h: float = 1e-4, tol: float = 1e-6, seed: int = 0) -> CheckResult:
    """Energy formula values plus the finite-difference Schrodinger residual."""
    golden = [
        ((0, 0, 0, 1), Fraction(-1, 2)),
        ((1, 0, 0, 1), Fraction(-1, 8)),
        ((2, 1, 1, 2), Fraction(-2, 25)),
    ]
    energy_ok = all(energy(*args) == E for args, E in golden)
    rng = np.random.default_rng(seed)
    residuals = []
    for st in states_up_to(Nmax, alpha):
        pts = state_points(st, points, rng)
        residuals.append(((st.qn.n, st.qn.m, st.qn.p, str(st.poly)),
                          schrodinger_residual(st, pts, h=h)))
    worst = max(res for _, res in residuals)
    return CheckResult(
        "energy formula and Schrodinger residual",
        energy_ok and worst < tol,
        f"energy goldens {'ok' if energy_ok else 'WRONG'}; {len(residuals)} states, "
        f"max residual {worst:.2e} (< {tol:g})",
        {"energy_ok": energy_ok, "residuals": residuals, "max_residual": worst},
    )


@_timed
def check_laguerre(nmax: int = 6, mmax: int = 2, beta=Fraction(2, 3)) -> CheckResult:
    """Single-variable eigenpolynomials are multiples of ``L_j^(1+2p+2|m|)(2 beta r)``."""
    count = 0
    failures = []
    for n in range(nmax + 1):
        for m in range(-mmax, mmax + 1):
            for p in (0, 1):
                try:
                    matches = laguerre_check(n, m, p, beta)
                except AssertionError as exc:
                    failures.append(str(exc))
                    continue
                count += len(matches)
                if [mt.j for mt in matches] != list(range(n + 1)):
                    failures.append(f"n={n} m={m} p={p}: degrees {[mt.j for mt in matches]}")
    return CheckResult(
        "Laguerre single-variable subfamily",
        not failures,
        f"{count} polynomials matched, {len(failures)} failures",
        {"failures": failures},
    )


# -- Lie algebra --------------------------------------------------------------

@_timed
def check_lie_identities(nmax: int = 8, per_n: int = 20, seed: int = 1) -> CheckResult:
    """Coulomb, Laguerre and QES Lie-algebraic forms as exact operator identities."""
    rng = random.Random(seed)
    counts = {"coulomb": 0, "laguerre": 0, "qes": 0}
    failures = []
    for n in range(nmax + 1):
        for _ in range(per_n):
            m, p = _random_qn(rng)
            beta, A = random_fraction(rng), random_fraction(rng)
            for ident, kw in (("coulomb", dict(n=n, m=m, p=p, beta=beta)),
                              ("qes", dict(n=n, m=m, p=p, beta=beta, A=A))):
                counts[ident] += 1
                if not identity_report(ident, **kw)["holds"]:
                    failures.append((ident, kw))
    for _ in range(per_n):
        m, p = _random_qn(rng)
        beta = random_fraction(rng)
        counts["laguerre"] += 1
        if not identity_report("laguerre", m=m, p=p, beta=beta)["holds"]:
            failures.append(("laguerre", dict(m=m, p=p, beta=beta)))
    return CheckResult(
        "Lie-algebraic identities",
        not failures,
        ", ".join(f"{k}: {v} cases" for k, v in counts.items()) + f"; {len(failures)} failures",
        {"counts": counts, "failures": failures},
    )


@_timed
def check_generators(nmax: int = 6) -> CheckResult:
    """Every g^(2) generator preserves ``P_n``; the seven-generator set closes."""
    names = ("Jtilde0", "J1", "J2", "J3", "J4", "R0", "R1", "R2", "T0", "T1", "T2")
    bad = [(g, n) for n in range(nmax + 1) for g in names if not preserves(generator(g, n), n)]
    try:
        table = closure_check(GL2_R3, n=Fraction(5, 2))
        closed = True
    except ArithmeticError:
        table, closed = {}, False
    return CheckResult(
        "generator invariance and closure",
        not bad and closed,
        f"{len(names)} generators on P_0..P_{nmax}: {len(bad)} leave P_n; "
        f"gl(2) x R^3 closure {'holds' if closed else 'fails'} ({len(table)} commutators)",
        {"not_preserving": bad, "closed": closed},
    )


# -- QES ----------------------------------------------------------------------

def random_qes_config(rng: random.Random, nmax: int = 6) -> QESConfig:
    m, p = _random_qn(rng)
    return QESConfig(rng.randint(0, nmax), m, p, random_fraction(rng), random_fraction(rng))


@_timed
def check_qes_construction(count: int = 20, seed: int = 2) -> CheckResult:
    """Expanded form, ``h_a + A J4`` and Gaussian conjugation agree exactly."""
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        cfg = random_qes_config(rng)
        try:
            h = build_h_tilde(cfg)
            if not preserves(h, cfg.n):
                failures.append((cfg, "does not preserve P_n"))
        except AssertionError as exc:
            failures.append((cfg, str(exc)))
    return CheckResult(
        "QES triple construction",
        not failures,
        f"{count} random configs, {len(failures)} disagreements",
        {"failures": failures},
    )


def qes_n1_closed_form(cfg: QESConfig) -> tuple[float, float]:
    s1 = cfg.sigma(1)
    b, A = float(cfg.beta), float(cfg.A)
    root = math.sqrt(4 * A * s1 + b * b)
    return (b + 2 * b * s1 - root) / 2, (b + 2 * b * s1 + root) / 2


def p24_expected(m: int, p: int) -> BiPoly:
    return BiPoly.u() - Fraction(2 * (abs(m) + 1), 2 * abs(m) + 2 * p + 3) * BiPoly.r() ** 2


@_timed
def check_qes_low_degree(count: int = 10, seed: int = 3, tol: float = 1e-12) -> CheckResult:
    """n=1 closed-form eigenvalues, the n=2 cubic, and ``alpha_{2,4}`` with ``P_2^(4)``."""
    rng = random.Random(seed)
    configs = [(0, 0, Fraction(1), Fraction(1)), (2, 1, Fraction(3, 5), Fraction(7, 2))]
    while len(configs) < count:
        m, p = _random_qn(rng)
        configs.append((m, p, random_fraction(rng), random_fraction(rng)))
    n1_err = 0.0
    cubic_fail, p24_fail = [], []
    for m, p, beta, A in configs:
        cfg1 = QESConfig(1, m, p, beta, A)
        got = sorted(complex(s.alpha).real for s in qes_spectrum(cfg1))
        n1_err = max(n1_err, *(abs(g - e) for g, e in zip(got, qes_n1_closed_form(cfg1))))
        if not qes_cubic_check(m, p, beta, A):
            cubic_fail.append((m, p, str(beta), str(A)))
        cfg2 = QESConfig(2, m, p, beta, A)
        alpha24 = beta * (3 + p + abs(m))
        M = matrix_on_basis(build_h_tilde(cfg2), 2)
        level = exact_eigen(M, [alpha24])[0]
        vecs = [v / v.coeff(0, 1) for v in level.eigenvectors if v.coeff(0, 1)]
        in_spectrum = any(s.variable_class == TWO and s.exact and s.alpha == alpha24
                          for s in qes_spectrum(cfg2))
        if level.multiplicity != 1 or vecs != [p24_expected(m, p)] or not in_spectrum:
            p24_fail.append((m, p, str(beta), str(A), [str(v) for v in level.eigenvectors]))
    ok = n1_err < tol and not cubic_fail and not p24_fail
    return CheckResult(
        "QES low-degree states",
        ok,
        f"{len(configs)} configs: n=1 max |dalpha| {n1_err:.1e} (< {tol:g}); "
        f"cubic mismatches {len(cubic_fail)}; P_2^(4) mismatches {len(p24_fail)}",
        {"n1_max_error": n1_err, "cubic_failures": cubic_fail, "p24_failures": p24_fail,
         "configs": configs},
    )


@_timed
def check_qes_counting(nmax: int = 8, seed: int = 4, per_n: int = 2) -> CheckResult:
    """``D(n)`` polynomial eigenstates, ``n+1`` of them single-variable."""
    rng = random.Random(seed)
    rows = []
    failures = []
    for n in range(nmax + 1):
        cfgs = [QESConfig(n, 0, 0, Fraction(1), Fraction(1))]
        for _ in range(per_n):
            m, p = _random_qn(rng)
            cfgs.append(QESConfig(n, m, p, random_fraction(rng), random_fraction(rng)))
        for cfg in cfgs:
            try:
                states = qes_spectrum(cfg)
            except AssertionError as exc:
                failures.append(str(exc))
                continue
            single = sum(s.variable_class == SINGLE for s in states)
            rows.append((n, cfg.m, cfg.p, len(states), single))
    return CheckResult(
        "QES state counting",
        not failures,
        f"{len(rows)} configs with n <= {nmax}, {len(failures)} count mismatches",
        {"rows": rows, "failures": failures},
    )


@_timed
def check_qes_residual(configs=((0, 0, Fraction(1), Fraction(1)), (1, 1, Fraction(1, 2), Fraction(1, 3)),
                                (-2, 0, Fraction(3, 4), Fraction(2))),
                       nmax: int = 2, points: int = 20, tol: float = 1e-5, seed: int = 5) -> CheckResult:
    """Generalized-Coulomb Hamiltonian residual for real-alpha QES states."""
    rng = np.random.default_rng(seed)
    rows = []
    skipped = 0
    for m, p, beta, A in configs:
        for n in range(nmax + 1):
            for st in qes_spectrum(QESConfig(n, m, p, beta, A)):
                if not st.is_real:
                    skipped += 1
                    continue
                res = qes_hamiltonian_residual(st, qes_points(st, points, rng))
                rows.append(((n, m, p, str(beta), str(A), str(st.alpha)), res))
    worst = max(r for _, r in rows)
    return CheckResult(
        "QES Hamiltonian residual",
        worst < tol,
        f"{len(rows)} real-alpha states (n <= {nmax}), {skipped} complex skipped, "
        f"max residual {worst:.2e} (< {tol:g})",
        {"rows": rows, "max_residual": worst, "skipped": skipped},
    )


# -- quadrature ---------------------------------------------------------------

@_timed
def check_orthogonality(Nmax: int = 5, alpha=Fraction(1), tol: float = 1e-8,
                        doubling_tol: float = 1e-10) -> CheckResult:
    """Distinct-N states at fixed alpha are L2-orthogonal; order doubling is stable."""
    worst_off, worst_dbl = 0.0, 0.0
    blocks = 0
    for m in range(0, Nmax):
        for p in (0, 1):
            states = [st for n in range(Nmax - abs(m) - p)
                      for st in hydrogen_states(n, m, p, alpha)]
            if len(states) < 2:
                continue
            blocks += 1
            grid = default_grid(states)
            g = gram_matrix(states, grid)
            g2 = gram_matrix(states, grid.doubled())
            worst_off = max(worst_off, g.max_offdiag_distinct)
            worst_dbl = max(worst_dbl, float(np.abs(g2.matrix - g.matrix).max()))
    return CheckResult(
        "orthogonality of distinct-energy states",
        worst_off < tol and worst_dbl < doubling_tol,
        f"{blocks} (m, p) blocks with N <= {Nmax}: max off-diagonal {worst_off:.1e} (< {tol:g}), "
        f"order doubling change {worst_dbl:.1e} (< {doubling_tol:g})",
        {"max_offdiag": worst_off, "max_doubling_change": worst_dbl},
    )


# -- degeneracy ---------------------------------------------------------------

def prose_degeneracy(n: int) -> int:
    """Degeneracy as stated in words: ``n`` for even ``n``, ``n-1`` for odd ``n``."""
    return n if n % 2 == 0 else n - 1


@_timed
def check_degeneracy(nmax: int = 10, params=((0, 0, Fraction(1)), (1, 1, Fraction(3, 7)))) -> CheckResult:
    """Multiplicity of the top level versus the hypotenuse count and the prose rule."""
    table = []
    ok = True
    for m, p, beta in params:
        for n in range(nmax + 1):
            mult = coulomb_spectrum(n, m, p, beta)[-1].multiplicity
            hyp = dim_Pn(n) - (dim_Pn(n - 1) if n else 0)
            ok &= mult == hyp == len(basis(n).hypotenuse())
            table.append({"n": n, "m": m, "p": p, "multiplicity": mult, "hypotenuse": hyp,
                          "prose": prose_degeneracy(n) if n else None,
                          "prose_agrees": (prose_degeneracy(n) == mult) if n else None})
    disagree = sorted({row["n"] for row in table if row["prose_agrees"] is False})
    return CheckResult(
        "degeneracy table",
        ok,
        f"multiplicity == D(n) - D(n-1) for n <= {nmax}: {'yes' if ok else 'NO'}; "
        f"prose rule disagrees at n = {disagree}",
        {"table": table, "prose_disagrees_at": disagree},
    )


def run_all(nmax: int = 6) -> list[CheckResult]:
    """Every suite, with the polynomial-degree sweeps bounded by ``nmax``."""
    return [
        check_coulomb_spectrum(nmax=nmax),
        check_low_degree_polys(),
        check_energy_and_residual(),
        check_laguerre(nmax=nmax),
        check_lie_identities(nmax=min(nmax, 8)),
        check_generators(nmax=nmax),
        check_qes_construction(),
        check_qes_low_degree(),
        check_qes_counting(nmax=min(nmax, 8)),
        check_qes_residual(),
        check_orthogonality(),
        check_degeneracy(nmax=nmax),
    ]

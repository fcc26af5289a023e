"""Command-line front end.

Numbers written as integers or ``a/b`` are parsed exactly; decimals are
parsed as doubles (commands that need exact input convert them through their
decimal string, so ``0.5`` becomes ``1/2``).  Reports go to stdout or to
``--output``; relative output paths are resolved against ``$COULOMB_G2_OUTDIR``
when it is set.

Exit status: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import scalar_to_str
from .coulomb import (
    build_h_a, build_h_a_r, coulomb_spectrum, hydrogen_states, schrodinger_residual,
    state_points, sturmian_states,
)
from .diffop import matrix_on_basis
from .lie import GENERATOR_NAMES, IDENTITIES, IDENTITY_ALIASES, generator, identity_report
from .qes import QESConfig, build_h_tilde, qes_cubic_check, qes_hamiltonian_residual, qes_points, qes_spectrum
from .quad import QuadratureGrid, default_grid, gram_matrix
from .verification import run_all

OUTDIR_ENV = "COULOMB_G2_OUTDIR"
_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


class UsageError(Exception):
    pass


def parse_scalar(text: str):
    """``"3/7"`` and ``"2"`` parse to :class:`Fraction`; anything else to float."""
    text = text.strip()
    try:
        if _RATIONAL.match(text):
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def exact(x) -> Fraction:
    """Exact value of a parsed scalar; doubles go through their decimal string."""
    return x if isinstance(x, Fraction) else Fraction(repr(x))


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {v}")
    return v


def _positive_scalar(text: str):
    v = parse_scalar(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- commands -----------------------------------------------------------------

def cmd_spectrum(args):
    beta = exact(args.beta)
    levels = coulomb_spectrum(args.n, args.m, args.p, beta)
    return {
        "n": args.n, "m": args.m, "p": args.p, "beta": scalar_to_str(beta),
        "levels": [lv.to_json() for lv in levels],
    }, True


def cmd_states(args):
    states = hydrogen_states(args.n, args.m, args.p, args.alpha)
    return {"states": [s.to_json() for s in states]}, True


def cmd_residual(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    for st in hydrogen_states(args.n, args.m, args.p, args.alpha):
        pts = state_points(st, args.points, rng)
        res = schrodinger_residual(st, pts, h=args.step)
        rows.append({"poly": st.poly.to_json(), "points": len(pts), "residual": res})
    ok = all(r["residual"] < args.tol for r in rows)
    return {
        "n": args.n, "m": args.m, "p": args.p, "alpha": scalar_to_str(args.alpha),
        "step": args.step, "tol": args.tol, "states": rows, "passed": ok,
    }, ok


def cmd_verify_lie(args):
    params = {"m": args.m, "p": args.p, "beta": exact(args.beta)}
    kind = IDENTITY_ALIASES.get(args.identity, args.identity)
    if kind != "laguerre":
        params["n"] = exact(args.n)
    if kind == "qes":
        if args.A is None:
            raise UsageError(f"--A is required for {args.identity}")
        params["A"] = exact(args.A)
    report = identity_report(args.identity, **params)
    return report, report["holds"]


def _qes_config(args) -> QESConfig:
    return QESConfig(args.n, args.m, args.p, args.beta, args.A)


def cmd_qes_spectrum(args):
    cfg = _qes_config(args)
    states = qes_spectrum(cfg, tol=args.tol)
    return {
        "n": cfg.n, "m": cfg.m, "p": cfg.p,
        "beta": scalar_to_str(cfg.beta), "A": scalar_to_str(cfg.A),
        "energy": scalar_to_str(cfg.energy),
        "states": [s.to_json() for s in states],
    }, True


def cmd_qes_cubic(args):
    check = qes_cubic_check(args.m, args.p, exact(args.beta), exact(args.A))
    return {
        "m": args.m, "p": args.p, "beta": scalar_to_str(exact(args.beta)),
        "A": scalar_to_str(exact(args.A)),
        "holds": check.holds,
        "computed": check.computed.to_json(),
        "expected": check.expected.to_json(),
        "differences": [
            {"power": k, "computed": scalar_to_str(a), "expected": scalar_to_str(b)}
            for k, a, b in check.differences
        ],
    }, check.holds


def cmd_qes_residual(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    for st in qes_spectrum(_qes_config(args)):
        entry = {"alpha": st.to_json()["alpha"], "variable_class": st.variable_class}
        if st.is_real:
            entry["residual"] = qes_hamiltonian_residual(st, qes_points(st, args.points, rng), h=args.step)
        else:
            entry["residual"] = None
        rows.append(entry)
    ok = all(r["residual"] is None or r["residual"] < args.tol for r in rows)
    return {"n": args.n, "m": args.m, "p": args.p, "tol": args.tol, "states": rows, "passed": ok}, ok


def cmd_gram(args):
    if args.sturmian:
        if args.beta is None:
            raise UsageError("--sturmian requires --beta")
        states = [s for n in range(args.nmax + 1) for s in sturmian_states(n, args.m, args.p, exact(args.beta))]
    else:
        if args.alpha is None:
            raise UsageError("--alpha is required unless --sturmian is given")
        states = [s for n in range(args.nmax + 1) for s in hydrogen_states(n, args.m, args.p, args.alpha)]
    grid = default_grid(states, args.order)
    if args.R is not None:
        grid = QuadratureGrid(float(args.R), args.order)
    report = gram_matrix(states, grid, sturmian=args.sturmian)
    if args.format == "csv":
        return report.to_csv(), True
    out = report.to_json()
    out["grid"] = {"R": grid.R, "order": grid.order}
    return out, True


def cmd_dump_operator(args):
    name = args.operator
    beta = exact(args.beta)
    if name == "h_a":
        op = build_h_a(args.m, args.p, beta)
    elif name == "h_a_r":
        op = build_h_a_r(args.m, args.p, beta)
    elif name == "h_tilde":
        if args.A is None:
            raise UsageError("--A is required for h_tilde")
        op = build_h_tilde(QESConfig(args.n, args.m, args.p, beta, exact(args.A)))
    else:
        op = generator(name, args.n)
    out = {"operator": name, "terms": op.to_json()}
    if args.matrix:
        out["matrix"] = matrix_on_basis(op, args.n).to_json()
    return out, True


def cmd_verify_all(args):
    results = run_all(nmax=args.nmax)
    ok = all(r.passed for r in results)
    if args.format == "json":
        return {"nmax": args.nmax, "passed": ok, "checks": [r.to_json() for r in results]}, ok
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", ok


# -- parser -------------------------------------------------------------------

def _qn(p: argparse.ArgumentParser, n: bool = True):
    if n:
        p.add_argument("--n", type=_nonneg, required=True, help="polynomial degree")
    p.add_argument("--m", type=int, default=0, help="magnetic quantum number")
    p.add_argument("--p", type=int, choices=(0, 1), default=0, help="parity")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coulomb-g2", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="exact spectrum of h_a on P_n")
    _qn(s)
    s.add_argument("--beta", type=_positive_scalar, required=True)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("states", parents=[common], help="hydrogen states at fixed alpha")
    _qn(s)
    s.add_argument("--alpha", type=_positive_scalar, required=True)
    s.set_defaults(func=cmd_states)

    s = sub.add_parser("residual", parents=[common], help="finite-difference Schrodinger residual")
    _qn(s)
    s.add_argument("--alpha", type=_positive_scalar, required=True)
    s.add_argument("--points", type=_nonneg, default=20)
    s.add_argument("--step", type=float, default=1e-4)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_residual)

    s = sub.add_parser("verify-lie", parents=[common], help="check a Lie-algebraic identity")
    s.add_argument("--identity", choices=IDENTITIES + tuple(IDENTITY_ALIASES), required=True)
    s.add_argument("--n", type=parse_scalar, default=Fraction(0), help="generator parameter")
    _qn(s, n=False)
    s.add_argument("--beta", type=parse_scalar, required=True)
    s.add_argument("--A", type=parse_scalar)
    s.set_defaults(func=cmd_verify_lie)

    for name, func, help_ in (("qes-spectrum", cmd_qes_spectrum, "polynomial eigenstates of h~_n"),
                              ("qes-residual", cmd_qes_residual, "QES Hamiltonian residual")):
        s = sub.add_parser(name, parents=[common], help=help_)
        _qn(s)
        s.add_argument("--beta", type=_positive_scalar, required=True)
        s.add_argument("--A", type=parse_scalar, required=True)
        if name == "qes-spectrum":
            s.add_argument("--tol", type=float, default=1e-10)
        else:
            s.add_argument("--points", type=_nonneg, default=20)
            s.add_argument("--step", type=float, default=1e-4)
            s.add_argument("--tol", type=float, default=1e-5)
            s.add_argument("--seed", type=int, default=0)
        s.set_defaults(func=func)

    s = sub.add_parser("qes-cubic", parents=[common], help="n=2 characteristic cubic check")
    _qn(s, n=False)
    s.add_argument("--beta", type=parse_scalar, required=True)
    s.add_argument("--A", type=parse_scalar, required=True)
    s.set_defaults(func=cmd_qes_cubic)

    s = sub.add_parser("gram", parents=[common], help="Gram matrix of hydrogen states")
    _qn(s, n=False)
    s.add_argument("--nmax", type=_nonneg, required=True)
    s.add_argument("--alpha", type=_positive_scalar)
    s.add_argument("--sturmian", action="store_true", help="fixed beta, weight 1/r")
    s.add_argument("--beta", type=_positive_scalar)
    s.add_argument("--R", type=_positive_scalar, help="truncation radius (default 40/beta_min)")
    s.add_argument("--order", type=int, default=96)
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("dump-operator", parents=[common], help="serialize an operator")
    s.add_argument("--operator", required=True,
                   choices=("h_a", "h_a_r", "h_tilde") + GENERATOR_NAMES)
    s.add_argument("--n", type=_nonneg, default=0)
    _qn(s, n=False)
    s.add_argument("--beta", type=parse_scalar, default=Fraction(1))
    s.add_argument("--A", type=parse_scalar)
    s.add_argument("--matrix", action="store_true", help="also emit the matrix on P_n")
    s.set_defaults(func=cmd_dump_operator)

    s = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    s.add_argument("--nmax", type=_nonneg, default=6)
    s.set_defaults(func=cmd_verify_all)
    return parser


def _resolve_output(path: str) -> Path:
    out = Path(path)
    base = os.environ.get(OUTDIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "text" if args.command == "verify-all" else "json"
    if args.format == "csv" and args.command != "gram":
        parser.error("--format csv is only available for gram")
    if args.format == "text" and args.command != "verify-all":
        parser.error("--format text is only available for verify-all")
    try:
        report, ok = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report if isinstance(report, str) else dumps(report)
    if args.output:
        _resolve_output(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

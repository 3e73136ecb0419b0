"""Command-line front end: ``sbo <subcommand> ...``.

Exit codes: 0 when everything checked is verified, 1 when anything is
falsified, 2 on invalid flags or parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .classification import Params6, classify, theorem_b_operator
from .emit import dumps, emit_json, emit_latex, operator_to_json, parse_json, report_json
from .exact import format_rational, parse_rational
from .operators import MatDiffOp, ParameterError, branson, build_exceptional, build_renormalized
from .rep import calibrate
from .special import gegenbauer, gegenbauer_latex, juhl, juhl_latex
from .sweeps import GRIDS, run_jobs, summarize
from .verify import FALSIFIED, check_factorization, check_sbo, solve_sbo_space

EXIT_OK, EXIT_FALSIFIED, EXIT_INVALID = 0, 1, 2


def rational(text: str):
    return parse_rational(text)


def _add_quad(p: argparse.ArgumentParser, j: bool = True, required: bool = True) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=required)
    if j:
        p.add_argument("--j", type=int)
    p.add_argument("--lambda", dest="lam", type=rational, required=required)
    p.add_argument("--nu", type=rational, required=required)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sbo", description="Exact symmetry breaking operators for differential forms.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="dimension and case of a 6-tuple")
    _add_quad(p)
    p.add_argument("--delta", type=int, default=0, choices=(0, 1))
    p.add_argument("--epsilon", type=int, default=0, choices=(0, 1))

    p = sub.add_parser("emit", help="print an operator or polynomial")
    p.add_argument("--what", choices=("sbo", "gegenbauer", "juhl", "branson"), default="sbo")
    p.add_argument("--n", type=int)
    p.add_argument("--case", choices=("1", "2", "3", "3'", "4", "4'"))
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--lambda", dest="lam", type=rational)
    p.add_argument("--nu", type=rational)
    p.add_argument("--ell", type=int)
    p.add_argument("--alpha", type=rational)
    p.add_argument("--format", choices=("json", "latex", "text"), default="json")

    p = sub.add_parser("verify", help="check an operator or a factorization identity")
    vs = p.add_subparsers(dest="target", required=True)
    q = vs.add_parser("sbo")
    q.add_argument("--file", help="operator JSON (otherwise built from the parameters)")
    q.add_argument("--n", type=int)
    q.add_argument("--i", type=int)
    q.add_argument("--j", type=int)
    q.add_argument("--lambda", dest="lam", type=rational)
    q.add_argument("--nu", type=rational)
    q.add_argument("--max-degree", type=int)
    q.add_argument("--method", choices=("operator", "monomial"), default="operator")
    q = vs.add_parser("factorization")
    q.add_argument("--theorem", choices=("4.1", "4.2", "5.1", "5.2"), required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--a", type=int, required=True)

    p = sub.add_parser("solve-space", help="brute-force dimension of the SBO space")
    _add_quad(p)
    p.add_argument("--format", choices=("json", "text"), default="json")

    sub.add_parser("calibrate", help="fix the sign conventions of the realized action")

    p = sub.add_parser("sweep", help="batch verification over a parameter grid")
    p.add_argument("--grid", choices=tuple(GRIDS) + ("all",), default="all")
    p.add_argument("--workers", type=int, help="worker processes (default: SBO_WORKERS or 1)")
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("parse", help="read operator JSON and emit it again")
    p.add_argument("file", help="path, or - for stdin")
    p.add_argument("--format", choices=("json", "latex", "text"), default="json")
    return ap


def _operator_text(D: MatDiffOp) -> str:
    lines = [repr(D)]
    for beta, mat in D.terms().items():
        lines.append(f"  d^{list(beta)}: " + "; ".join(" ".join(format_rational(c) for c in row) for row in mat))
    return "\n".join(lines) + "\n"


def _render(D: MatDiffOp, fmt: str) -> str:
    if fmt == "latex":
        return emit_latex(D)
    if fmt == "text":
        return _operator_text(D)
    return emit_json(D)


def _case_operator(a) -> MatDiffOp:
    n, i, case = a.n, a.i, a.case
    if case in ("1", "2"):
        if i is None or a.lam is None or a.nu is None:
            raise ParameterError(f"Case {case} needs --i, --lambda and --nu")
        return build_renormalized(n, i, i if case == "1" else i - 1, a.lam, a.nu)
    return build_exceptional(n, case, i, a.lam)


def _cmd_classify(a) -> int:
    if a.j is None:
        raise ParameterError("--j is required")
    c = classify(Params6(a.n, a.i, a.j, a.lam, a.nu, a.delta, a.epsilon))
    sys.stdout.write(dumps(c.to_json()))
    return EXIT_OK


def _cmd_emit(a) -> int:
    if a.what == "gegenbauer":
        if a.alpha is None or a.ell is None:
            raise ParameterError("--alpha and --ell are required")
        if a.format == "latex":
            sys.stdout.write(gegenbauer_latex(a.alpha, a.ell) + "\n")
        else:
            g = gegenbauer(a.alpha, a.ell)
            sys.stdout.write(dumps({"alpha": format_rational(a.alpha), "ell": a.ell,
                                    "coefficients": [format_rational(c) for c in g.coeffs]}))
        return EXIT_OK
    if a.n is None:
        raise ParameterError("--n is required")
    if a.what == "juhl":
        if a.lam is None or a.nu is None:
            raise ParameterError("--lambda and --nu are required")
        if a.format == "latex":
            sys.stdout.write(juhl_latex(a.lam, a.nu, a.n) + "\n")
            return EXIT_OK
        op = juhl(a.lam, a.nu, a.n)
        D = MatDiffOp(op.diffop(0), a.lam, a.nu, f"C~_{{{format_rational(a.lam)},{format_rational(a.nu)}}}")
    elif a.what == "branson":
        if a.i is None or a.ell is None:
            raise ParameterError("--i and --ell are required")
        D = branson(a.n, a.i, a.ell)
    elif a.case is not None:
        D = _case_operator(a)
    else:
        if None in (a.i, a.j, a.lam, a.nu):
            raise ParameterError("give --case, or all of --i --j --lambda --nu")
        D = theorem_b_operator(a.n, a.i, a.j, a.lam, a.nu)
    sys.stdout.write(_render(D, a.format))
    return EXIT_OK


def _cmd_verify(a) -> int:
    if a.target == "factorization":
        rep = check_factorization(a.theorem, a.n, a.i, a.a, a.ell)
    else:
        if a.file:
            with open(a.file, encoding="utf-8") as fh:
                D = parse_json(fh.read())
        else:
            if None in (a.n, a.i, a.j, a.lam, a.nu):
                raise ParameterError("give --file, or all of --n --i --j --lambda --nu")
            D = theorem_b_operator(a.n, a.i, a.j, a.lam, a.nu)
        rep = check_sbo(D, a.max_degree, a.method)
    sys.stdout.write(report_json(rep))
    return EXIT_FALSIFIED if rep.verdict == FALSIFIED else EXIT_OK


def _cmd_solve(a) -> int:
    j = a.i if a.j is None else a.j
    res = solve_sbo_space(a.n, a.i, j, a.lam, a.nu)
    if a.format == "text":
        sys.stdout.write(f"dimension {res.dimension}\n")
        for D in res.basis:
            sys.stdout.write(_operator_text(D))
    else:
        sys.stdout.write(dumps({"dimension": res.dimension, "basis": [operator_to_json(D) for D in res.basis]}))
    return EXIT_OK


def _cmd_calibrate(a) -> int:
    r = calibrate()
    out = {
        "signs": {"translation": r.signs.translation, "c1": r.signs.c1, "c2": r.signs.c2},
        "passing": [[s.translation, s.c1, s.c2] for s in r.passing],
        "juhl_residual_terms": r.juhl_residual,
        "branson_residual_terms": r.branson_residual,
        "bracket_residual_terms": r.bracket_residual,
        "operators_checked": r.checks,
    }
    sys.stdout.write(dumps(out))
    ok = r.juhl_residual == r.branson_residual == r.bracket_residual == 0
    return EXIT_OK if ok else EXIT_FALSIFIED


def _cmd_sweep(a) -> int:
    names = list(GRIDS) if a.grid == "all" else [a.grid]
    jobs = [job for name in names for job in GRIDS[name]()]
    outcomes = run_jobs(jobs, a.workers)
    table = summarize(outcomes)
    if a.format == "json":
        sys.stdout.write(dumps({"summary": table, "outcomes": [o.to_json() for o in outcomes]}))
    else:
        sys.stdout.write(f"{'grid':<15}{'verified':>10}{'falsified':>11}\n")
        for kind, row in table.items():
            sys.stdout.write(f"{kind:<15}{row['verified']:>10}{row['falsified']:>11}\n")
        for o in outcomes:
            if not o.ok:
                sys.stdout.write(f"FALSIFIED {o.kind} {json.dumps(o.to_json()['params'])} {json.dumps(o.detail)}\n")
    return EXIT_FALSIFIED if any(not o.ok for o in outcomes) else EXIT_OK


def _cmd_parse(a) -> int:
    text = sys.stdin.read() if a.file == "-" else open(a.file, encoding="utf-8").read()
    sys.stdout.write(_render(parse_json(text), a.format))
    return EXIT_OK


COMMANDS = {
    "classify": _cmd_classify,
    "emit": _cmd_emit,
    "verify": _cmd_verify,
    "solve-space": _cmd_solve,
    "calibrate": _cmd_calibrate,
    "sweep": _cmd_sweep,
    "parse": _cmd_parse,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    try:
        return COMMANDS[a.command](a)
    except (ParameterError, ValueError, json.JSONDecodeError, OSError) as e:
        sys.stderr.write(f"sbo: error: {e}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""JSON and LaTeX serialization of operators and reports.

JSON layout of an operator::

    {"name": ..., "source": {"n", "i", "lambda", "delta"},
     "target": {"n", "j", "nu", "epsilon"}, "restricted": bool,
     "terms": [{"beta": [...], "matrix": [["p/q", ...], ...]}]}

Matrix rows follow the target index sets and columns the source index sets,
both in lexicographic order.  Output is canonical, so emit -> parse -> emit is
byte-identical.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Dict, List

from .diffop import DiffOp
from .exact import format_rational, parse_rational
from .forms import basis
from .operators import MatDiffOp, ParameterError, index_label
from .special import _latex_q


def operator_to_json(D: MatDiffOp) -> dict:
    return {
        "name": D.name,
        "source": {"n": D.n, "i": D.i, "lambda": format_rational(D.lam), "delta": D.delta},
        "target": {
            "n": D.target_dim,
            "j": D.j,
            "nu": format_rational(D.nu),
            "epsilon": D.epsilon,
        },
        "restricted": D.restricted,
        "terms": [
            {"beta": list(beta), "matrix": [[format_rational(c) for c in row] for row in mat]}
            for beta, mat in D.terms().items()
        ],
    }


def operator_from_json(obj: dict) -> MatDiffOp:
    try:
        src, tgt = obj["source"], obj["target"]
        n, i, j = int(src["n"]), int(src["i"]), int(tgt["j"])
        restricted = bool(obj["restricted"])
        if int(tgt["n"]) != (n - 1 if restricted else n):
            raise ParameterError("target dimension does not match the restriction flag")
        rows = basis(n - 1 if restricted else n, j)
        cols = basis(n, i)
        z = (0,) * n
        terms: Dict = {}
        for t in obj["terms"]:
            beta = tuple(int(b) for b in t["beta"])
            mat = t["matrix"]
            if len(beta) != n or len(mat) != len(rows) or any(len(r) != len(cols) for r in mat):
                raise ParameterError("term shape does not match (n, i, j)")
            terms[(z, beta)] = {
                (J, I): parse_rational(mat[r][c])
                for r, J in enumerate(rows)
                for c, I in enumerate(cols)
                if parse_rational(mat[r][c])
            }
        op = DiffOp(n, i, j, terms, restricted)
        return MatDiffOp(
            op,
            parse_rational(src["lambda"]),
            parse_rational(tgt["nu"]),
            obj.get("name", ""),
            int(src.get("delta", 0)),
            int(tgt["epsilon"]) if "epsilon" in tgt else None,
        )
    except (KeyError, TypeError) as e:
        raise ParameterError(f"malformed operator JSON: {e}") from e


_SCALAR_LIST = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def dumps(obj) -> str:
    """Indented JSON with arrays of scalars kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    text = _SCALAR_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text)
    return text + "\n"


def emit_json(D: MatDiffOp) -> str:
    return dumps(operator_to_json(D))


def parse_json(text: str) -> MatDiffOp:
    return operator_from_json(json.loads(text))


# -- LaTeX ----------------------------------------------------------------------------


def _latex_name(name: str) -> str:
    if name.startswith("C~"):
        return r"\widetilde{\mathbb{C}}" + name[2:]
    if name.startswith("T'"):
        return r"\mathcal{T}'" + name[2:]
    if name.startswith("T"):
        return r"\mathcal{T}" + name[1:]
    return name or "D"


def _latex_partial(beta) -> str:
    parts = []
    for k, b in enumerate(beta):
        if b == 1:
            parts.append(rf"\partial_{{{k + 1}}}")
        elif b > 1:
            parts.append(rf"\partial_{{{k + 1}}}^{{{b}}}")
    return " ".join(parts)


def _latex_entry(poly: Dict[tuple, Fraction]) -> str:
    """A symbol sum_beta c_beta d^beta as LaTeX."""
    if not poly:
        return "0"
    out = ""
    for beta in sorted(poly, key=lambda b: (-sum(b), [-x for x in b])):
        c = poly[beta]
        mono = _latex_partial(beta)
        if not mono:
            term = _latex_q(abs(c))
        elif abs(c) == 1:
            term = mono
        else:
            term = f"{_latex_q(abs(c))} {mono}"
        if not out:
            out = ("-" if c < 0 else "") + term
        else:
            out += (" - " if c < 0 else " + ") + term
    return out


def emit_latex(D: MatDiffOp) -> str:
    """The operator as a pmatrix of symbols, rows and columns labelled by dx_I."""
    rows = basis(D.target_dim, D.j)
    cols = basis(D.n, D.i)
    entries: List[List[Dict]] = [[{} for _ in cols] for _ in rows]
    for beta, mat in D.terms().items():
        for r in range(len(rows)):
            for c in range(len(cols)):
                if mat[r][c]:
                    entries[r][c][beta] = mat[r][c]
    body = " \\\\\n  ".join(" & ".join(_latex_entry(e) for e in row) for row in entries)
    rest = rf"\mathrm{{Rest}}_{{x_{{{D.n}}}=0}} \circ " if D.restricted else ""
    col_labels = ", ".join(index_label(I) for I in cols)
    row_labels = ", ".join(index_label(J) for J in rows)
    return (
        f"% columns: {col_labels}; rows: {row_labels}\n"
        f"{_latex_name(D.name)} = {rest}\\begin{{pmatrix}}\n  {body}\n\\end{{pmatrix}}\n"
    )


def report_json(report) -> str:
    return dumps(report.to_json())

"""Verification engines: intertwining checks, factorization identities, and the
brute-force dimension oracle.

Soundness rests on the degree-bound lemma: an operator sum_beta r_beta(x) d^beta
of order <= M with polynomial coefficients that kills every monomial form of
degree <= M is zero (apply it to x^beta / beta! in increasing order of beta).
The operator-level engine computes that residual in normal form directly; the
monomial engine evaluates it on the monomial forms.  Both give the same verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .diffop import DiffOp, compose
from .exact import Q, RatMatrix, RationalLike, format_rational, is_natural, monomials, monomials_upto, nullspace
from .forms import PolyForm, basis, pullback_reflection
from .operators import (
    MatDiffOp,
    ParameterError,
    branson,
    branson_prime,
    build_renormalized,
    constants,
)
from .rep import (
    DEFAULT_SIGNS,
    Signs,
    equivariance_residual,
    label_name,
    probe_labels,
    realize,
)

VERIFIED, FALSIFIED, INAPPLICABLE = "verified", "falsified", "inapplicable"


@dataclass
class Report:
    verdict: str
    subject: str = ""
    witness: Optional[dict] = None
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "subject": self.subject,
            "witness": self.witness,
            "stats": self.stats,
        }


def proportionality(A: DiffOp, B: DiffOp) -> Optional[Fraction]:
    """c with A == c * B, or None.  B must be nonzero."""
    if B.is_zero():
        raise ValueError("reference operator is zero")
    key = min(B.terms)
    e = min(B.terms[key])
    c = A.terms.get(key, {}).get(e, Fraction(0)) / B.terms[key][e]
    return c if A == B.scale(c) else None


# -- intertwining ---------------------------------------------------------------------


def _apply_generator(label, dim, deg, weight, w: PolyForm, signs: Signs) -> PolyForm:
    if label[0] == "P":
        return pullback_reflection(w, label[1])
    return realize(label, dim, deg, weight, signs).op.apply(w)


def _residual_on(D: MatDiffOp, label, w: PolyForm, signs: Signs) -> PolyForm:
    """D(Z w) - Z'(D w) evaluated on a form."""
    op = D.op
    left = op.apply(_apply_generator(label, op.n, op.src, D.lam, w, signs))
    right = _apply_generator(label, op.target_dim, op.tgt, D.nu, op.apply(w), signs)
    return left - right


def _witness(D: MatDiffOp, label, w: PolyForm, signs: Signs) -> dict:
    res = _residual_on(D, label, w, signs)
    return {
        "generator": label_name(label),
        "form": w.to_json(),
        "residual": res.to_json(),
    }


def _minimal_monomial(R: DiffOp) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Lowest-degree, lexicographically first (beta, I) among the residual's terms.

    By the degree-bound lemma the residual does not vanish on x^beta dx_I.
    """
    best = None
    for (a, b), m in R.terms.items():
        for (J, I) in m:
            key = (sum(b), b, I)
            if best is None or key < best:
                best = key
    return best[1], best[2]


def check_sbo(
    D: MatDiffOp,
    max_degree: Optional[int] = None,
    method: str = "operator",
    signs: Signs = DEFAULT_SIGNS,
) -> Report:
    """Check that D intertwines the source and target actions.

    The probes are all generators of o(n,1) (of o(n+1,1) for endomorphisms) plus
    the reflection x_1 -> -x_1, which the Lie algebra cannot see.
    """
    if not isinstance(D, MatDiffOp):
        raise TypeError("check_sbo needs a MatDiffOp carrying its weights")
    if not D.op.is_constant():
        raise ParameterError("only constant-coefficient operators can be symmetry breaking")
    order = max(D.order(), 0)
    if max_degree is None:
        max_degree = order + 1
    if max_degree < order + 1:
        raise ParameterError(f"max_degree must be at least order + 1 = {order + 1}")
    labs = probe_labels(D)
    n_forms = len(monomials_upto(D.n, max_degree)) * len(basis(D.n, D.i))
    stats = {
        "method": method,
        "lie_generators": sum(1 for L in labs if L[0] != "P"),
        "reflections": sum(1 for L in labs if L[0] == "P"),
        "max_degree": max_degree,
        "monomial_forms": n_forms,
        "order": D.order(),
    }
    subject = D.name or repr(D)
    if D.is_zero():
        return Report(INAPPLICABLE, subject, None, dict(stats, reason="zero operator"))

    if method == "operator":
        for L in labs:
            R = equivariance_residual(D, L, signs)
            if not R.is_zero():
                beta, I = _minimal_monomial(R)
                w = PolyForm.monomial(beta, I)
                stats["residual_terms"] = R.nterms()
                return Report(FALSIFIED, subject, _witness(D, L, w, signs), stats)
        return Report(VERIFIED, subject, None, stats)

    if method == "monomial":
        n, i = D.n, D.i
        forms = [
            PolyForm.monomial(e, I)
            for e in sorted(monomials_upto(n, max_degree), key=lambda e: (sum(e), e))
            for I in basis(n, i)
        ]
        tested = 0
        for L in labs:
            for w in forms:
                tested += 1
                if not _residual_on(D, L, w, signs).is_zero():
                    stats["monomials_tested"] = tested
                    return Report(FALSIFIED, subject, _witness(D, L, w, signs), stats)
        stats["monomials_tested"] = tested
        return Report(VERIFIED, subject, None, stats)

    raise ValueError(f"unknown method {method!r}")


# -- factorization identities ----------------------------------------------------------

THEOREMS = ("4.1", "4.2", "5.1", "5.2")


def factorization_sides(theorem: str, n: int, i: int, a: int, ell: int):
    """(left side, right-hand operator without its constant, the constant)."""
    if a < 0 or ell < 1:
        raise ParameterError("need a in N and ell >= 1")
    half, half1 = Fraction(n, 2), Fraction(n - 1, 2)
    c = constants(n, i, a, ell)
    if theorem in ("4.1", "4.2"):
        if not 0 <= i <= n - 1:
            raise ParameterError(f"identity {theorem} needs 0 <= i <= n-1")
        j = i
    elif theorem in ("5.1", "5.2"):
        if not 1 <= i <= n:
            raise ParameterError(f"identity {theorem} needs 1 <= i <= n")
        j = i - 1
    else:
        raise ParameterError(f"unknown identity {theorem!r}; expected one of {THEOREMS}")

    if theorem.endswith(".1"):
        T = branson(n, i, ell)
        sbo = build_renormalized(n, i, j, half + ell, a + ell + half)
        rhs = build_renormalized(n, i, j, half - ell, a + ell + half)
        const = (c.p_minus if theorem == "4.1" else c.p_plus) * c.K
        lhs = compose(sbo.op, T.op)
        name = f"{sbo.name} o {T.name}"
    else:
        Tp = branson_prime(n, j, ell)
        sbo = build_renormalized(n, i, j, half1 - a - ell, half1 - ell)
        rhs = build_renormalized(n, i, j, half1 - a - ell, half1 + ell)
        const = (c.q if theorem == "4.2" else c.r) * c.K
        lhs = compose(Tp.op, sbo.op)
        name = f"{Tp.name} o {sbo.name}"
    left = MatDiffOp(lhs, rhs.lam, rhs.nu, name)
    return left, rhs, const


def check_factorization(theorem: str, n: int, i: int, a: int, ell: int) -> Report:
    left, rhs, const = factorization_sides(theorem, n, i, a, ell)
    subject = f"factorization {theorem}: {left.name} = {format_rational(const)} {rhs.name}"
    stats = {
        "theorem": theorem,
        "n": n,
        "i": i,
        "a": a,
        "ell": ell,
        "constant": format_rational(const),
        "lhs_terms": left.op.nterms(),
    }
    diff = left.op - rhs.op.scale(const)
    if diff.is_zero():
        return Report(VERIFIED, subject, None, stats)
    observed = proportionality(left.op, rhs.op)
    witness = {
        "stated_constant": format_rational(const),
        "observed_constant": None if observed is None else format_rational(observed),
        "difference_terms": diff.nterms(),
    }
    return Report(FALSIFIED, subject, witness, stats)


# -- dimension oracle -----------------------------------------------------------------


@dataclass
class SpaceResult:
    dimension: int
    basis: List[MatDiffOp]
    unknowns: int = 0
    equations: int = 0


def oracle_labels(n: int):
    """Probes not imposed structurally by the ansatz: rotations, special
    conformal maps, and the reflection x_1 -> -x_1."""
    from .rep import subalgebra_labels

    return [L for L in subalgebra_labels(n) if L[0] in ("R", "S")] + [("P", 0)]


def solve_sbo_space(n: int, i: int, j: int, lam: RationalLike, nu: RationalLike) -> SpaceResult:
    """All constant-coefficient Rest o sum_{|beta| = nu - lam} C_beta d^beta that
    intertwine; returns the dimension and a basis of the solution space."""
    lam, nu = Q(lam), Q(nu)
    if not (0 <= i <= n and 0 <= j <= n - 1) or not is_natural(nu - lam):
        return SpaceResult(0, [])
    ell = int(nu - lam)
    unknowns = [
        (beta, J, I)
        for beta in monomials(n, ell)
        for J in basis(n - 1, j)
        for I in basis(n, i)
    ]
    if not unknowns:
        return SpaceResult(0, [])
    z = (0,) * n
    labs = oracle_labels(n)
    rows: Dict[tuple, Dict[int, Fraction]] = {}
    for col, (beta, J, I) in enumerate(unknowns):
        Du = MatDiffOp(DiffOp(n, i, j, {(z, beta): {(J, I): Fraction(1)}}, True), lam, nu)
        for L in labs:
            R = equivariance_residual(Du, L)
            for a, b, Jr, Ir, c in R.flat():
                rows.setdefault((L, a, b, Jr, Ir), {})[col] = c
    keys = sorted(rows)
    M = RatMatrix(
        [[rows[k].get(c, Fraction(0)) for c in range(len(unknowns))] for k in keys],
        len(unknowns),
    )
    kernel = nullspace(M) if keys else [
        [Fraction(int(r == c)) for r in range(len(unknowns))] for c in range(len(unknowns))
    ]
    out = []
    for v in kernel:
        terms: Dict = {}
        for c, (beta, J, I) in zip(v, unknowns):
            if c:
                terms.setdefault((z, beta), {})[(J, I)] = c
        op = DiffOp(n, i, j, terms, True)
        lead = next(op.flat())[4]
        out.append(MatDiffOp(op.scale(1 / lead), lam, nu, f"oracle^{{{i},{j}}}"))
    return SpaceResult(len(out), out, len(unknowns), len(keys))

"""Renormalized Gegenbauer polynomials and the scalar Juhl operators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple

from .diffop import DiffOp
from .exact import Q, RationalLike, format_rational, is_natural
from .forms import basis


@dataclass(frozen=True)
class UniPoly:
    """Polynomial in one variable z; ``coeffs[k]`` multiplies z^k."""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(Q(x) for x in c))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z: RationalLike) -> Fraction:
        z = Q(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)


@dataclass(frozen=True)
class BiPoly:
    """Polynomial in (s, t); keys are (power of s, power of t)."""

    terms: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: Q(v) for k, v in self.terms.items() if v})

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        out: Dict[Tuple[int, int], Fraction] = {}
        for (a, b), c in self.terms.items():
            for (p, q), d in other.terms.items():
                out[(a + p, b + q)] = out.get((a + p, b + q), 0) + c * d
        return BiPoly(out)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BiPoly(out)


def _gamma_ratio(alpha: Fraction, top: int, bottom: int) -> Fraction:
    """Gamma(alpha + top) / Gamma(alpha + bottom) for top >= bottom, as a finite product."""
    r = Fraction(1)
    for m in range(bottom, top):
        r *= alpha + m
    return r


@lru_cache(maxsize=None)
def _gegenbauer(alpha: Fraction, ell: int) -> UniPoly:
    c = [Fraction(0)] * (ell + 1)
    bottom = (ell + 1) // 2
    for k in range(ell // 2 + 1):
        ratio = _gamma_ratio(alpha, ell - k, bottom)
        c[ell - 2 * k] = (
            (-1) ** k * ratio * 2 ** (ell - 2 * k) / (factorial(k) * factorial(ell - 2 * k))
        )
    return UniPoly(tuple(c))


def gegenbauer(alpha: RationalLike, ell: int) -> UniPoly:
    """Renormalized Gegenbauer polynomial in z.

    The Gamma quotients of the defining sum are finite ascending products, so
    every rational alpha is allowed (no poles) and the result is never zero.
    """
    if ell < 0:
        raise ValueError("degree must be a natural number")
    return _gegenbauer(Q(alpha), ell)


def inflate(alpha: RationalLike, ell: int) -> BiPoly:
    """s^(ell/2) C(t / sqrt(s)): the z^(ell-2k) term becomes s^k t^(ell-2k)."""
    g = gegenbauer(alpha, ell)
    return BiPoly({((ell - p) // 2, p): c for p, c in enumerate(g.coeffs) if c})


@dataclass(frozen=True)
class ScalarDiffOp:
    """A polynomial in (s, t) read as s = -Laplacian on R^{n-1}, t = d/dx_n.

    ``restricted`` marks composition with Rest_{x_n=0} on the left.
    """

    n: int
    poly: BiPoly
    restricted: bool = True
    lam: Fraction | None = None
    nu: Fraction | None = None

    def order(self) -> int:
        return max((2 * a + b for a, b in self.poly.terms), default=-1)

    def diffop(self, deg: int = 0) -> DiffOp:
        """Expanded matrix-valued operator acting componentwise on deg-forms."""
        op = _expand(self.n, deg, self.poly)
        return op.restrict() if self.restricted else op

    def apply(self, w):
        return self.diffop(w.deg).apply(w)


@lru_cache(maxsize=None)
def _st_monomial(n: int, a: int, b: int) -> Dict[Tuple[int, ...], Fraction]:
    """(-Laplacian_{R^{n-1}})^a (d/dx_n)^b as {beta: coef}."""
    cur: Dict[Tuple[int, ...], Fraction] = {(0,) * n: Fraction(1)}
    for _ in range(a):
        nxt: Dict[Tuple[int, ...], Fraction] = {}
        for beta, c in cur.items():
            for k in range(n - 1):
                e = list(beta)
                e[k] += 2
                e = tuple(e)
                nxt[e] = nxt.get(e, 0) - c
        cur = nxt
    return {beta[:-1] + (beta[-1] + b,): c for beta, c in cur.items()}


def _expand(n: int, deg: int, poly: BiPoly) -> DiffOp:
    z = (0,) * n
    coefs: Dict[Tuple[int, ...], Fraction] = {}
    for (a, b), c in poly.terms.items():
        for beta, v in _st_monomial(n, a, b).items():
            coefs[beta] = coefs.get(beta, 0) + c * v
    idx = basis(n, deg)
    terms = {(z, beta): {(I, I): c for I in idx} for beta, c in coefs.items() if c}
    return DiffOp(n, deg, deg, terms)


def juhl(lam: RationalLike, nu: RationalLike, n: int) -> ScalarDiffOp:
    """Normalized Juhl operator from weight lam on R^n to weight nu on R^{n-1}."""
    lam, nu = Q(lam), Q(nu)
    if not is_natural(nu - lam):
        raise ValueError(f"nu - lambda must be a natural number, got {format_rational(nu - lam)}")
    ell = int(nu - lam)
    alpha = lam - Fraction(n - 1, 2)
    return ScalarDiffOp(n, inflate(alpha, ell), True, lam, nu)


def gegenbauer_latex(alpha: RationalLike, ell: int) -> str:
    g = gegenbauer(alpha, ell)
    parts: List[str] = []
    for p in range(g.degree(), -1, -1):
        c = g[p]
        if c:
            parts.append(_latex_term(c, "z" if p == 1 else (f"z^{{{p}}}" if p else "")))
    body = _join(parts)
    return rf"\widetilde{{C}}^{{{_latex_q(Q(alpha))}}}_{{{ell}}}(z) = {body}"


def juhl_latex(lam: RationalLike, nu: RationalLike, n: int) -> str:
    op = juhl(lam, nu, n)
    parts = []
    for (a, b) in sorted(op.poly.terms, key=lambda k: (-k[0], k[1])):
        c = op.poly.terms[(a, b)] * (-1) ** a
        pieces = []
        if a:
            pieces.append(rf"\Delta_{{\mathbb{{R}}^{{{n - 1}}}}}" + (f"^{{{a}}}" if a > 1 else ""))
        if b:
            pieces.append(
                rf"\frac{{\partial^{{{b}}}}}{{\partial x_{{{n}}}^{{{b}}}}}"
                if b > 1
                else rf"\frac{{\partial}}{{\partial x_{{{n}}}}}"
            )
        parts.append(_latex_term(c, " ".join(pieces)))
    body = _join(parts) if parts else "0"
    return (
        rf"\widetilde{{\mathbb{{C}}}}_{{{_latex_q(op.lam)}, {_latex_q(op.nu)}}} = "
        rf"\mathrm{{Rest}}_{{x_{{{n}}}=0}} \circ \left({body}\right)"
    )


def _latex_q(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    return rf"{sign}\frac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def _latex_term(c: Fraction, mono: str) -> str:
    if not mono:
        return _latex_q(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{_latex_q(c)} {mono}"


def _join(parts: List[str]) -> str:
    out = ""
    for p in parts:
        if not out:
            out = p
        elif p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out

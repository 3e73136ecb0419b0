"""The matrix-valued operator families between forms on R^n and R^{n-1}.

All operators are built as exact :class:`~sbo.diffop.DiffOp` normal forms from
d, d*, iota_{d/dx_n}, the Laplacian and the scalar Juhl operators, and wrapped
in a :class:`MatDiffOp` that records the source/target weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .diffop import DiffOp, codiff_op, compose, d_op, iota_n, laplacian_op
from .exact import Q, RationalLike, format_rational, is_natural
from .forms import Index, basis
from .special import juhl


class ParameterError(ValueError):
    """Parameters outside the range where an operator family is defined."""


@dataclass(frozen=True, eq=False)
class MatDiffOp:
    """A differential operator from i-forms (weight lam) to j-forms (weight nu).

    ``op.restricted`` distinguishes symmetry breaking operators R^n -> R^{n-1}
    from endomorphisms of forms on a single space (Branson operators).
    """

    op: DiffOp
    lam: Fraction
    nu: Fraction
    name: str = ""
    delta: int = 0
    epsilon: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", Q(self.lam))
        object.__setattr__(self, "nu", Q(self.nu))
        if self.epsilon is None:
            # every parity clause of the classification reads eps - delta = nu - lam mod 2
            d = self.nu - self.lam
            eps = (self.delta + int(d)) % 2 if d.denominator == 1 else self.delta
            object.__setattr__(self, "epsilon", eps)

    @property
    def n(self) -> int:
        return self.op.n

    @property
    def i(self) -> int:
        return self.op.src

    @property
    def j(self) -> int:
        return self.op.tgt

    @property
    def restricted(self) -> bool:
        return self.op.restricted

    @property
    def target_dim(self) -> int:
        return self.op.target_dim

    def order(self) -> int:
        return self.op.order()

    def is_zero(self) -> bool:
        return self.op.is_zero()

    def scale(self, c: RationalLike) -> "MatDiffOp":
        return MatDiffOp(self.op.scale(c), self.lam, self.nu, self.name, self.delta, self.epsilon)

    def terms(self) -> Dict[Tuple[int, ...], List[List[Fraction]]]:
        """beta -> dense matrix (rows: target index sets, columns: source index sets)."""
        if not self.op.is_constant():
            raise ValueError("only constant-coefficient operators have a beta -> matrix form")
        rows = basis(self.target_dim, self.j)
        cols = basis(self.n, self.i)
        rpos = {J: r for r, J in enumerate(rows)}
        cpos = {I: c for c, I in enumerate(cols)}
        out = {}
        for (a, b), m in sorted(self.op.terms.items()):
            mat = [[Fraction(0)] * len(cols) for _ in rows]
            for (J, I), c in m.items():
                mat[rpos[J]][cpos[I]] = c
            out[b] = mat
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatDiffOp):
            return NotImplemented
        return self.op == other.op and self.lam == other.lam and self.nu == other.nu

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"MatDiffOp({self.name or '?'}: I({self.i},{format_rational(self.lam)}) -> "
            f"J({self.j},{format_rational(self.nu)}), n={self.n}, order {self.order()})"
        )


def _ell(lam: Fraction, nu: Fraction) -> int:
    if not is_natural(nu - lam):
        raise ParameterError(
            f"nu - lambda must be a natural number, got {format_rational(nu - lam)}"
        )
    return int(nu - lam)


def _name(i, j, lam, nu, tilde=True) -> str:
    head = "C~" if tilde else "C"
    return f"{head}^{{{i},{j}}}_{{{format_rational(lam)},{format_rational(nu)}}}"


def gamma_factor(alpha: RationalLike, ell: int) -> Fraction:
    alpha = Q(alpha)
    if ell % 2:
        return Fraction(1)
    return alpha + Fraction(ell, 2)


def _juhl_op(lam, nu, n, deg) -> DiffOp:
    return juhl(lam, nu, n).diffop(deg)


def build_c_ii(n: int, i: int, lam: RationalLike, nu: RationalLike) -> MatDiffOp:
    """C^{i,i}_{lam,nu} (un-renormalized); summands with a negative Juhl degree are absent."""
    lam, nu = Q(lam), Q(nu)
    if not 0 <= i <= n - 1:
        raise ParameterError(f"C^{{i,i}} needs 0 <= i <= n-1, got i={i}, n={n}")
    ell = _ell(lam, nu)
    op = _juhl_op(lam, nu, n, i).scale(Fraction(1, 2) * (nu - i))
    if ell >= 1:
        g = gamma_factor(lam - Fraction(n, 2), ell)
        term = compose(_juhl_op(lam, nu - 1, n, i), compose(d_op(n, i - 1), iota_n(n, i)))
        op = op - term.scale(g)
    if ell >= 2:
        term = compose(_juhl_op(lam + 1, nu - 1, n, i), compose(d_op(n, i - 1), codiff_op(n, i)))
        op = op + term
    return MatDiffOp(op, lam, nu, _name(i, i, lam, nu, tilde=False))


def build_c_ii1(n: int, i: int, lam: RationalLike, nu: RationalLike) -> MatDiffOp:
    """C^{i,i-1}_{lam,nu} (un-renormalized)."""
    lam, nu = Q(lam), Q(nu)
    if not 1 <= i <= n:
        raise ParameterError(f"C^{{i,i-1}} needs 1 <= i <= n, got i={i}, n={n}")
    ell = _ell(lam, nu)
    iota = iota_n(n, i)
    op = compose(_juhl_op(lam, nu, n, i - 1), iota).scale(Fraction(1, 2) * (lam + i - n))
    if ell >= 1:
        g = gamma_factor(lam - Fraction(n - 1, 2), ell)
        op = op - compose(_juhl_op(lam + 1, nu, n, i - 1), codiff_op(n, i)).scale(g)
    if ell >= 2:
        inner = compose(d_op(n, i - 2), compose(codiff_op(n, i - 1), iota))
        op = op - compose(_juhl_op(lam + 1, nu - 1, n, i - 1), inner)
    return MatDiffOp(op, lam, nu, _name(i, i - 1, lam, nu, tilde=False))


def build_renormalized(n: int, i: int, j: int, lam: RationalLike, nu: RationalLike) -> MatDiffOp:
    """The nonzero generators for Cases 1 (j = i) and 2 (j = i - 1)."""
    lam, nu = Q(lam), Q(nu)
    _ell(lam, nu)
    name = _name(i, j, lam, nu)
    if j == i:
        if not 0 <= i <= n - 1:
            raise ParameterError(f"Case 1 needs 0 <= i <= n-1, got i={i}")
        if lam == nu:
            op = DiffOp.identity(n, i).restrict()
        elif i == 0:
            op = _juhl_op(lam, nu, n, 0)
        else:
            op = build_c_ii(n, i, lam, nu).op
    elif j == i - 1:
        if not 1 <= i <= n:
            raise ParameterError(f"Case 2 needs 1 <= i <= n, got i={i}")
        if lam == nu:
            op = iota_n(n, i).restrict()
        elif i == n:
            op = compose(_juhl_op(lam, nu, n, n - 1), iota_n(n, n))
        else:
            op = build_c_ii1(n, i, lam, nu).op
    else:
        raise ParameterError(f"renormalized family needs j in {{i, i-1}}, got (i,j)=({i},{j})")
    return MatDiffOp(op, lam, nu, name)


EXCEPTIONAL_CASES = ("3", "3'", "4", "4'")


def build_exceptional(
    n: int, case: str, i: Optional[int] = None, lam: Optional[RationalLike] = None
) -> MatDiffOp:
    """Generators for the isolated Cases 3, 3', 4 and 4'.

    Case 4' uses the renormalized C~^{n,n-1}_{lam,0}: the plain C^{n,n-1}_{lam,0}
    vanishes identically (nu = n - i = 0 lies on its vanishing locus).
    """
    case = str(case).replace("′", "'")
    if case == "3":
        if i is None or not 1 <= i <= n - 2:
            raise ParameterError(f"Case 3 needs 1 <= i <= n-2, got i={i}")
        if lam is not None and Q(lam) != i:
            raise ParameterError("Case 3 needs lambda = i")
        op = compose(DiffOp.identity(n, i + 1).restrict(), d_op(n, i))
        return MatDiffOp(op, i, i + 1, _name(i, i + 1, i, i + 1))
    if case == "3'":
        if i not in (None, 0):
            raise ParameterError("Case 3' needs i = 0")
        lam = Q(0 if lam is None else lam)
        if not is_natural(-lam):
            raise ParameterError("Case 3' needs -lambda in N")
        op = compose(d_op(n - 1, 0), _juhl_op(lam, 0, n, 0))
        return MatDiffOp(op, lam, 1, _name(0, 1, lam, 1))
    if case == "4":
        if i is None or not 2 <= i <= n:
            raise ParameterError(f"Case 4 needs 2 <= i <= n, got i={i}")
        if lam is not None and Q(lam) != n - i:
            raise ParameterError("Case 4 needs lambda = n - i")
        op = compose(iota_n(n, i - 1).restrict(), codiff_op(n, i))
        return MatDiffOp(op, n - i, n - i + 1, _name(i, i - 2, n - i, n - i + 1))
    if case == "4'":
        if i not in (None, n):
            raise ParameterError("Case 4' needs i = n")
        lam = Q(0 if lam is None else lam)
        if not is_natural(-lam):
            raise ParameterError("Case 4' needs -lambda in N")
        inner = build_renormalized(n, n, n - 1, lam, 0).op
        op = -compose(codiff_op(n - 1, n - 1), inner)
        return MatDiffOp(op, lam, 1, _name(n, n - 2, lam, 1))
    raise ParameterError(f"unknown exceptional case {case!r}")


def branson(m: int, i: int, ell: int) -> MatDiffOp:
    """((m/2-i-ell) d d* + (m/2-i+ell) d* d) Laplacian^(ell-1) on i-forms on R^m."""
    if ell < 1:
        raise ParameterError("Branson operators need ell >= 1")
    if not 0 <= i <= m:
        raise ParameterError(f"form degree {i} out of range for R^{m}")
    half = Fraction(m, 2)
    dds = compose(d_op(m, i - 1), codiff_op(m, i))
    dsd = compose(codiff_op(m, i + 1), d_op(m, i))
    core = dds.scale(half - i - ell) + dsd.scale(half - i + ell)
    op = compose(core, laplacian_op(m, i, ell - 1))
    return MatDiffOp(op, half - ell, half + ell, f"T^{{({i})}}_{{{2 * ell}}}")


def branson_alt(m: int, i: int, ell: int) -> MatDiffOp:
    """The second displayed form: (-2 ell d d* - (m/2-i+ell) Laplacian) Laplacian^(ell-1)."""
    if ell < 1:
        raise ParameterError("Branson operators need ell >= 1")
    half = Fraction(m, 2)
    dds = compose(d_op(m, i - 1), codiff_op(m, i))
    core = dds.scale(-2 * ell) - laplacian_op(m, i).scale(half - i + ell)
    op = compose(core, laplacian_op(m, i, ell - 1))
    return MatDiffOp(op, half - ell, half + ell, f"T^{{({i})}}_{{{2 * ell}}}")


def branson_prime(n: int, j: int, ell: int) -> MatDiffOp:
    """The Branson operator on j-forms on R^{n-1}."""
    t = branson(n - 1, j, ell)
    return MatDiffOp(t.op, t.lam, t.nu, f"T'^{{({j})}}_{{{2 * ell}}}")


@dataclass(frozen=True)
class Constants:
    p_plus: Fraction
    p_minus: Fraction
    q: Fraction
    r: Fraction
    K: Fraction


def k_const(ell: int, a: int) -> Fraction:
    out = Fraction(1)
    for k in range(1, ell + 1):
        out *= a // 2 + k
    return out


def constants(n: int, i: int, a: int, ell: int) -> Constants:
    if a < 0 or ell < 1:
        raise ParameterError("need a >= 0 and ell >= 1")
    half = Fraction(n, 2)
    if a:
        p_plus, p_minus = i + ell - half, i - ell - half
    else:
        p_plus, p_minus = Fraction(2), Fraction(-2)
    if i == 0:
        q = -(ell + Fraction(n - 1, 2))
    elif a:
        q = i + ell - Fraction(n - 1, 2)
    else:
        q = Fraction(-2)
    if i == n:
        r = -(ell + Fraction(n + 1, 2))
    elif a:
        r = i - ell - Fraction(n + 1, 2)
    else:
        r = Fraction(2)
    return Constants(p_plus, p_minus, q, r, k_const(ell, a))


def vanishing(n: int, i: int, j: int, lam: RationalLike, nu: RationalLike) -> bool:
    """Whether the un-renormalized C^{i,j}_{lam,nu} is the zero operator."""
    lam, nu = Q(lam), Q(nu)
    if j == i:
        return (lam == nu == i) or (nu == i == 0)
    if j == i - 1:
        return (lam == nu == n - i) or (nu == n - i == 0)
    raise ParameterError("vanishing loci are only stated for j in {i, i-1}")


def index_label(I: Index) -> str:
    return "^".join(f"dx{k + 1}" for k in I) or "1"

"""Exact rationals, multivariate polynomials and linear algebra over Q.

Nothing in this module (or anywhere in the package) touches floating point.
Rationals are plain :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm
from typing import Dict, Iterable, List, Sequence, Tuple, Union

Rational = Fraction
Exp = Tuple[int, ...]
RationalLike = Union[int, Fraction, str]


def Q(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    # Fraction() would also accept "1.5" and "1e3"; those are not exact notation here.
    if any(c in s for c in ".eE"):
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational of the form p/q: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_natural(x: RationalLike) -> bool:
    """True iff x is in N = {0, 1, 2, ...}."""
    x = Q(x)
    return x.denominator == 1 and x >= 0


def monomials(nvars: int, degree: int) -> List[Exp]:
    """All exponent vectors of total degree exactly ``degree``, in lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomials_upto(nvars: int, degree: int) -> List[Exp]:
    out = []
    for d in range(degree + 1):
        out.extend(monomials(nvars, d))
    return out


class MultiPoly:
    """Polynomial in x_0..x_{m-1} with rational coefficients.

    Canonical: no zero coefficient is ever stored, so equality is equality of
    the term maps.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exp, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                if c:
                    clean[tuple(e)] = Q(c)
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: RationalLike) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Q(c)})

    @classmethod
    def monomial(cls, exp: Sequence[int], c: RationalLike = 1) -> "MultiPoly":
        return cls(len(exp), {tuple(exp): Q(c)})

    @classmethod
    def var(cls, nvars: int, k: int) -> "MultiPoly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.nvars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = Q(other)
            return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        t: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def diff(self, k: int) -> "MultiPoly":
        """Partial derivative with respect to x_k (0-based)."""
        if not 0 <= k < self.nvars:
            raise IndexError(f"variable index {k} out of range for {self.nvars} variables")
        t = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                t[tuple(e2)] = c * e[k]
        return MultiPoly(self.nvars, t)

    def set_last_zero(self) -> "MultiPoly":
        """Substitute x_{m-1} = 0 and drop that variable."""
        return MultiPoly(
            self.nvars - 1, {e[:-1]: c for e, c in self.terms.items() if e[-1] == 0}
        )

    def embed(self, nvars: int) -> "MultiPoly":
        """View as a polynomial in more variables (new ones appended)."""
        pad = (0,) * (nvars - self.nvars)
        return MultiPoly(nvars, {e + pad: c for e, c in self.terms.items()})

    def substitute_scale(self, k: int, s: int) -> "MultiPoly":
        """p(..., s*x_k, ...)."""
        return MultiPoly(
            self.nvars, {e: c * (s ** e[k]) for e, c in self.terms.items()}
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{k + 1}" + (f"^{p}" if p > 1 else "") for k, p in enumerate(e) if p
            )
            parts.append(f"{format_rational(c)}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_diff(p: MultiPoly, k: int) -> MultiPoly:
    return p.diff(k)


class RatMatrix:
    """Dense matrix over Q."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[RationalLike]], cols: int | None = None):
        self.entries = [[Q(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        for row in self.entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[int(r == c) for c in range(n)] for r in range(n)], n)

    def matvec(self, v: Sequence[Fraction]) -> List[Fraction]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries]

    def rank(self) -> int:
        return len(_bareiss_echelon(self._integer_rows(), self.cols)[1])

    def nullspace(self) -> List[List[Fraction]]:
        return nullspace(self)

    def _integer_rows(self) -> List[List[int]]:
        out = []
        for row in self.entries:
            m = lcm(*(x.denominator for x in row)) if row else 1
            out.append([int(x * m) for x in row])
        return out


def _bareiss_echelon(rows: List[List[int]], ncols: int):
    """Fraction-free (Bareiss) row echelon form of an integer matrix.

    Returns (echelon rows, pivot columns).  All intermediate entries stay
    integral; the one-step division by the previous pivot is exact.
    """
    m = [list(r) for r in rows if any(r)]
    pivots: List[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((k for k in range(r, len(m)) if m[k][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for k in range(r + 1, len(m)):
            row = m[k]
            f = row[c]
            if f:
                m[k] = [(piv * row[j] - f * prow[j]) // prev for j in range(ncols)]
            else:
                m[k] = [(piv * row[j]) // prev for j in range(ncols)]
        prev = piv
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def nullspace(M: RatMatrix) -> List[List[Fraction]]:
    """Exact basis of ker M; one vector per free column, that entry set to 1."""
    ech, pivots = _bareiss_echelon(M._integer_rows(), M.cols)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = ech[r]
            s = sum((row[j] * v[j] for j in range(c + 1, M.cols) if row[j]), Fraction(0))
            v[c] = -s / row[c]
        basis.append(v)
    return basis

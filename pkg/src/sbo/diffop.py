"""Matrix-valued differential operators with polynomial coefficients.

An operator is stored in normal form

    P = sum  x^alpha  d^beta  (x)  E_{J,I}

i.e. coefficients to the left of derivatives, with E_{J,I} the elementary map
dx_I -> dx_J between exterior powers.  Composition uses the Leibniz rule
d^b x^a = sum_k binom(b,k) a!/(a-k)! x^(a-k) d^(b-k), so operator identities
are decided by comparing term maps.

A *restricted* operator is Rest_{x_n=0} o P: it takes forms on R^n to forms on
R^{n-1}.  Its normal form has no x_n in the coefficients and no dx_n in the
output index sets.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, Iterator, List, Tuple

from .exact import MultiPoly, Q, RationalLike
from .forms import Index, PolyForm, basis, contract, restrict, wedge_left

Exp = Tuple[int, ...]
Key = Tuple[Exp, Exp]
Matrix = Dict[Tuple[Index, Index], Fraction]


@lru_cache(maxsize=None)
def _leibniz(b: Exp, a: Exp) -> Tuple[Tuple[Exp, int], ...]:
    ranges = [range(min(bi, ai) + 1) for bi, ai in zip(b, a)]
    out = []
    for k in product(*ranges):
        f = 1
        for bi, ai, ki in zip(b, a, k):
            f *= comb(bi, ki)
            for t in range(ki):
                f *= ai - t
        out.append((k, f))
    return tuple(out)


def _falling(g: Exp, b: Exp) -> int:
    f = 1
    for gi, bi in zip(g, b):
        for t in range(bi):
            f *= gi - t
    return f


class DiffOp:
    __slots__ = ("n", "src", "tgt", "restricted", "terms")

    def __init__(
        self,
        n: int,
        src: int,
        tgt: int,
        terms: Dict[Key, Matrix] | None = None,
        restricted: bool = False,
    ):
        self.n = n
        self.src = src
        self.tgt = tgt
        self.restricted = restricted
        clean: Dict[Key, Matrix] = {}
        last = n - 1
        for (a, b), M in (terms or {}).items():
            if restricted and a[last]:
                continue
            m = {}
            for (J, I), c in M.items():
                if c and not (restricted and last in J):
                    m[(J, I)] = c
            if m:
                clean[(tuple(a), tuple(b))] = m
        self.terms = clean

    @property
    def target_dim(self) -> int:
        return self.n - 1 if self.restricted else self.n

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, n: int, src: int, tgt: int, restricted: bool = False) -> "DiffOp":
        return cls(n, src, tgt, {}, restricted)

    @classmethod
    def identity(cls, n: int, deg: int) -> "DiffOp":
        z = (0,) * n
        return cls(n, deg, deg, {(z, z): {(I, I): Fraction(1) for I in basis(n, deg)}})

    @classmethod
    def scalar(cls, n: int, deg: int, coef: MultiPoly, beta: Exp | None = None) -> "DiffOp":
        """Multiplication by a polynomial (then d^beta) acting componentwise."""
        beta = beta or (0,) * n
        terms = {}
        for a, c in coef.terms.items():
            terms[(a, beta)] = {(I, I): c for I in basis(n, deg)}
        return cls(n, deg, deg, terms)

    # -- algebra ---------------------------------------------------------------

    def _same_shape(self, other: "DiffOp") -> None:
        if (self.n, self.src, self.tgt, self.restricted) != (
            other.n,
            other.src,
            other.tgt,
            other.restricted,
        ):
            raise ValueError(
                "operator shape mismatch: "
                f"{(self.n, self.src, self.tgt, self.restricted)} vs "
                f"{(other.n, other.src, other.tgt, other.restricted)}"
            )

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._same_shape(other)
        terms = {k: dict(m) for k, m in self.terms.items()}
        for k, m in other.terms.items():
            acc = terms.setdefault(k, {})
            for e, c in m.items():
                acc[e] = acc.get(e, 0) + c
        return DiffOp(self.n, self.src, self.tgt, terms, self.restricted)

    def __neg__(self) -> "DiffOp":
        return self.scale(-1)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c: RationalLike) -> "DiffOp":
        c = Q(c)
        terms = {k: {e: c * v for e, v in m.items()} for k, m in self.terms.items()}
        return DiffOp(self.n, self.src, self.tgt, terms, self.restricted)

    def __rmul__(self, c) -> "DiffOp":
        return self.scale(c)

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return (
            self.n == other.n
            and self.src == other.src
            and self.tgt == other.tgt
            and self.restricted == other.restricted
            and self.terms == other.terms
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Highest derivative order present; -1 for the zero operator."""
        return max((sum(b) for _, b in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(a) for a, _ in self.terms)

    def nterms(self) -> int:
        return sum(len(m) for m in self.terms.values())

    def flat(self) -> Iterator[Tuple[Exp, Exp, Index, Index, Fraction]]:
        """(alpha, beta, J, I, coef) in a deterministic order."""
        for (a, b) in sorted(self.terms):
            m = self.terms[(a, b)]
            for (J, I) in sorted(m):
                yield a, b, J, I, m[(J, I)]

    def embed(self, n: int) -> "DiffOp":
        """The same operator viewed on R^n (n >= self.n) acting on the first coordinates."""
        if self.restricted:
            raise ValueError("cannot embed a restricted operator")
        pad = (0,) * (n - self.n)
        terms = {(a + pad, b + pad): dict(m) for (a, b), m in self.terms.items()}
        return DiffOp(n, self.src, self.tgt, terms)

    def restrict(self) -> "DiffOp":
        """Rest_{x_n=0} o self."""
        if self.restricted:
            raise ValueError("operator is already restricted")
        return DiffOp(self.n, self.src, self.tgt, self.terms, restricted=True)

    def reflect(self, k: int) -> "DiffOp":
        """Conjugate by the pullback of x_k -> -x_k on source and target.

        An operator commutes with that reflection iff ``op.reflect(k) == op``.
        """
        terms = {}
        for (a, b), m in self.terms.items():
            s0 = (-1) ** (a[k] + b[k])
            terms[(a, b)] = {
                (J, I): c * s0 * (-1 if k in J else 1) * (-1 if k in I else 1)
                for (J, I), c in m.items()
            }
        return DiffOp(self.n, self.src, self.tgt, terms, self.restricted)

    def apply(self, w: PolyForm) -> PolyForm:
        if w.dim != self.n or w.deg != self.src:
            raise ValueError(
                f"operator on {self.src}-forms on R^{self.n} applied to a "
                f"{w.deg}-form on R^{w.dim}"
            )
        by_inn: Dict[Index, List] = defaultdict(list)
        for (a, b), m in self.terms.items():
            for (J, I), c in m.items():
                by_inn[I].append((a, b, J, c))
        out: Dict[Index, Dict[Exp, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
        for I, f in w.components.items():
            for a, b, J, c in by_inn.get(I, ()):
                acc = out[J]
                for g, v in f.terms.items():
                    if all(gi >= bi for gi, bi in zip(g, b)):
                        e = tuple(gi - bi + ai for gi, bi, ai in zip(g, b, a))
                        acc[e] += c * v * _falling(g, b)
        res = PolyForm(
            self.n, self.tgt, {J: MultiPoly(self.n, dict(t)) for J, t in out.items()}
        )
        if self.restricted:
            return restrict(res)
        return res

    def __repr__(self) -> str:
        kind = "Rest o " if self.restricted else ""
        return (
            f"DiffOp({kind}{self.src}-forms -> {self.tgt}-forms on R^{self.n}, "
            f"{self.nterms()} terms, order {self.order()})"
        )


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """A o B.

    If B is restricted, A must be an unrestricted operator on R^{n-1}; it is
    tangential, so it commutes with restriction and is embedded into R^n.
    """
    if B.restricted:
        if A.restricted or A.n != B.n - 1:
            raise ValueError("left factor of a restricted operator must live on R^{n-1}")
        A = A.embed(B.n)
        restricted = True
    else:
        if A.n != B.n:
            raise ValueError(f"dimension mismatch: R^{A.n} vs R^{B.n}")
        restricted = A.restricted
    if A.src != B.tgt:
        raise ValueError(f"degree mismatch: {A.src}-forms expected, got {B.tgt}-forms")

    b_rows = []
    for (a2, b2), M2 in B.terms.items():
        rows: Dict[Index, List] = defaultdict(list)
        for (K, I), c in M2.items():
            rows[K].append((I, c))
        b_rows.append((a2, b2, rows))

    out: Dict[Key, Dict] = defaultdict(lambda: defaultdict(Fraction))
    for (a1, b1), M1 in A.terms.items():
        for a2, b2, rows in b_rows:
            prod_m: Dict[Tuple[Index, Index], Fraction] = defaultdict(Fraction)
            for (J, K), c1 in M1.items():
                r = rows.get(K)
                if r:
                    for I, c2 in r:
                        prod_m[(J, I)] += c1 * c2
            if not prod_m:
                continue
            for k, f in _leibniz(b1, a2):
                alpha = tuple(x + y - z for x, y, z in zip(a1, a2, k))
                beta = tuple(x - z + y for x, y, z in zip(b1, b2, k))
                acc = out[(alpha, beta)]
                for e, v in prod_m.items():
                    acc[e] += f * v
    return DiffOp(A.n, B.src, A.tgt, {k: dict(m) for k, m in out.items()}, restricted)


def commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    return compose(A, B) - compose(B, A)


# -- the basic form operators ----------------------------------------------------


def partial(n: int, deg: int, beta: Exp) -> DiffOp:
    z = (0,) * n
    return DiffOp(n, deg, deg, {(z, tuple(beta)): {(I, I): Fraction(1) for I in basis(n, deg)}})


def _unit(n: int, k: int) -> Exp:
    e = [0] * n
    e[k] = 1
    return tuple(e)


def d_op(n: int, deg: int) -> DiffOp:
    """Exterior derivative on deg-forms on R^n."""
    z = (0,) * n
    terms = {}
    for k in range(n):
        m = {}
        for I in basis(n, deg):
            s, J = wedge_left(k, I)
            if s:
                m[(J, I)] = Fraction(s)
        terms[(z, _unit(n, k))] = m
    return DiffOp(n, deg, deg + 1, terms)


def interior_op(n: int, deg: int, k: int) -> DiffOp:
    z = (0,) * n
    m = {}
    for I in basis(n, deg):
        s, J = contract(k, I)
        if s:
            m[(J, I)] = Fraction(s)
    return DiffOp(n, deg, deg - 1, {(z, z): m})


def iota_n(n: int, deg: int) -> DiffOp:
    return interior_op(n, deg, n - 1)


def codiff_op(n: int, deg: int) -> DiffOp:
    """d* = -sum_k iota_k d/dx_k."""
    z = (0,) * n
    terms = {}
    for k in range(n):
        m = {}
        for I in basis(n, deg):
            s, J = contract(k, I)
            if s:
                m[(J, I)] = Fraction(-s)
        terms[(z, _unit(n, k))] = m
    return DiffOp(n, deg, deg - 1, terms)


def laplacian_op(n: int, deg: int, power: int = 1) -> DiffOp:
    """(sum_k d^2/dx_k^2)^power, componentwise."""
    out = DiffOp.identity(n, deg)
    z = (0,) * n
    lap = DiffOp(
        n,
        deg,
        deg,
        {(z, tuple(2 * x for x in _unit(n, k))): {(I, I): Fraction(1) for I in basis(n, deg)} for k in range(n)},
    )
    for _ in range(power):
        out = compose(lap, out)
    return out


def rest_op(n: int, deg: int) -> DiffOp:
    return DiffOp.identity(n, deg).restrict()


def exterior_derivation(n: int, deg: int, j: int, k: int) -> Matrix:
    """Matrix on deg-forms of the derivation dx_j -> dx_k, dx_k -> -dx_j."""
    m: Matrix = {}
    for I in basis(n, deg):
        for src, dst, sgn in ((j, k, 1), (k, j, -1)):
            s1, rest = contract(src, I)
            if not s1:
                continue
            s2, J = wedge_left(dst, rest)
            if not s2:
                continue
            key = (J, I)
            m[key] = m.get(key, 0) + Fraction(s1 * s2 * sgn)
    return {e: c for e, c in m.items() if c}

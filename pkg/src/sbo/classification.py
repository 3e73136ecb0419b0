"""The classification of differential symmetry breaking operators as data.

A 6-tuple (i, j, lam, nu, delta, epsilon) admits a nonzero differential SBO
(and then exactly a one-dimensional space of them) iff it matches one of six
cases.  Parities delta, epsilon live in Z/2 and are stored as 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Tuple

from .exact import Q, RationalLike, format_rational, is_natural
from .operators import MatDiffOp, ParameterError, build_exceptional, build_renormalized

SCOPE_ADVISORY = (
    "the classification is only established for n >= 3; the construction and "
    "verification engines still run at n = 2 (results there are outside its scope)"
)


@dataclass(frozen=True)
class Params6:
    n: int
    i: int
    j: int
    lam: Fraction
    nu: Fraction
    delta: int = 0
    epsilon: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", Q(self.lam))
        object.__setattr__(self, "nu", Q(self.nu))
        if self.n < 3:
            raise ParameterError(f"n = {self.n} < 3: {SCOPE_ADVISORY}")
        if not 0 <= self.i <= self.n:
            raise ParameterError(f"need 0 <= i <= n, got i={self.i}")
        if not 0 <= self.j <= self.n - 1:
            raise ParameterError(f"need 0 <= j <= n-1, got j={self.j}")
        if self.delta not in (0, 1) or self.epsilon not in (0, 1):
            raise ParameterError("delta and epsilon must be 0 or 1")


def _int(x: Fraction) -> int:
    return x.numerator if x.denominator == 1 else 0


@dataclass(frozen=True)
class CaseDescriptor:
    """One row of the table: structural constraints plus the parity clause.

    ``parity(p)`` is the value epsilon - delta must take mod 2 (only called once
    ``constraints`` hold, so every integrality it relies on is guaranteed).
    """

    tag: str
    description: str
    constraints: Callable[[Params6], bool]
    parity: Callable[[Params6], int]
    parity_text: str

    def matches(self, p: Params6) -> bool:
        return self.constraints(p) and (p.epsilon - p.delta - self.parity(p)) % 2 == 0

    def __repr__(self) -> str:
        return f"Case {self.tag}"


CASES: Tuple[CaseDescriptor, ...] = (
    CaseDescriptor(
        "1",
        "j = i, 0 <= i <= n-1, nu - lam in N",
        lambda p: p.j == p.i and 0 <= p.i <= p.n - 1 and is_natural(p.nu - p.lam),
        lambda p: _int(p.nu - p.lam),
        "epsilon - delta = nu - lam mod 2",
    ),
    CaseDescriptor(
        "2",
        "j = i-1, 1 <= i <= n, nu - lam in N",
        lambda p: p.j == p.i - 1 and 1 <= p.i <= p.n and is_natural(p.nu - p.lam),
        lambda p: _int(p.nu - p.lam),
        "epsilon - delta = nu - lam mod 2",
    ),
    CaseDescriptor(
        "3",
        "j = i+1, 1 <= i <= n-2, (lam, nu) = (i, i+1)",
        lambda p: p.j == p.i + 1 and 1 <= p.i <= p.n - 2 and (p.lam, p.nu) == (p.i, p.i + 1),
        lambda p: 1,
        "epsilon = delta + 1 mod 2",
    ),
    CaseDescriptor(
        "3'",
        "(i, j) = (0, 1), -lam in N, nu = 1",
        lambda p: (p.i, p.j) == (0, 1) and is_natural(-p.lam) and p.nu == 1,
        lambda p: _int(p.lam) + 1,
        "epsilon = delta + lam + 1 mod 2",
    ),
    CaseDescriptor(
        "4",
        "j = i-2, 2 <= i <= n-1, (lam, nu) = (n-i, n-i+1)",
        lambda p: p.j == p.i - 2
        and 2 <= p.i <= p.n - 1
        and (p.lam, p.nu) == (p.n - p.i, p.n - p.i + 1),
        lambda p: 1,
        "epsilon = delta + 1 mod 2",
    ),
    CaseDescriptor(
        "4'",
        "(i, j) = (n, n-2), -lam in N, nu = 1",
        lambda p: (p.i, p.j) == (p.n, p.n - 2) and is_natural(-p.lam) and p.nu == 1,
        lambda p: _int(p.lam) + 1,
        "epsilon = delta + lam + 1 mod 2",
    ),
)


def match_case(p: Params6, ignore_parity: bool = False) -> Optional[CaseDescriptor]:
    hits = [c for c in CASES if (c.constraints(p) if ignore_parity else c.matches(p))]
    if len(hits) > 1:
        raise AssertionError(f"cases overlap at {p}: {hits}")
    return hits[0] if hits else None


def operator_name(case: CaseDescriptor, p: Params6) -> str:
    lam, nu = format_rational(p.lam), format_rational(p.nu)
    return f"C~^{{{p.i},{p.j}}}_{{{lam},{nu}}}"


@dataclass(frozen=True)
class Classification:
    dimension: int
    case: Optional[CaseDescriptor]
    operator_name: Optional[str]

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "case": None if self.case is None else self.case.tag,
            "operator_name": self.operator_name,
        }


def classify(p: Params6) -> Classification:
    c = match_case(p)
    if c is None:
        return Classification(0, None, None)
    return Classification(1, c, operator_name(c, p))


def max_dimension(n: int, i: int, j: int, lam: RationalLike, nu: RationalLike) -> int:
    """Dimension maximized over the parities (what the Lie algebra can see)."""
    return max(
        classify(Params6(n, i, j, lam, nu, d, e)).dimension for d in (0, 1) for e in (0, 1)
    )


def enumerate_xi(
    n: int, lam_range: Iterable[RationalLike], nu_range: Iterable[RationalLike]
) -> List[Tuple[int, int, Fraction, Fraction]]:
    """Quadruples (i, j, lam, nu) in the given ranges admitting some parities."""
    lams = [Q(x) for x in lam_range]
    nus = [Q(x) for x in nu_range]
    out = []
    for i in range(n + 1):
        for j in range(n):
            for lam in lams:
                for nu in nus:
                    if max_dimension(n, i, j, lam, nu):
                        out.append((i, j, lam, nu))
    return out


def theorem_b_operator(n: int, i: int, j: int, lam: RationalLike, nu: RationalLike) -> MatDiffOp:
    """The constructed generator for a quadruple in Xi."""
    lam, nu = Q(lam), Q(nu)
    c = match_case(Params6(n, i, j, lam, nu), ignore_parity=True)
    if c is None:
        raise ParameterError(
            f"(i, j, lam, nu) = ({i}, {j}, {format_rational(lam)}, {format_rational(nu)}) "
            "admits no differential symmetry breaking operator"
        )
    if c.tag in ("1", "2"):
        return build_renormalized(n, i, j, lam, nu)
    return build_exceptional(n, c.tag, i, lam)

"""Polynomial differential forms on R^m and flat exterior calculus.

Coordinates are 0-based: x_0..x_{m-1}; the normal direction x_n of the
hyperplane {x_n = 0} is the last coordinate, index m-1.  A basis form
dx_I is keyed by the strictly increasing tuple I.

Conventions (fixed once, used everywhere):

* d = sum_k dx_k ^ d/dx_k
* d* = -sum_k iota_k d/dx_k, so that d d* + d* d = -Laplacian
* iota_k dx_I = (-1)^p dx_{I minus k}, p = position of k in I
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterator, List, Tuple

from .exact import MultiPoly, Q, RationalLike, format_rational, parse_rational

Index = Tuple[int, ...]


def basis(m: int, deg: int) -> List[Index]:
    """Index sets of degree ``deg`` in lexicographic order (empty if out of range)."""
    if deg < 0 or deg > m:
        return []
    return list(combinations(range(m), deg))


def wedge_left(k: int, I: Index) -> Tuple[int, Index]:
    """dx_k ^ dx_I = sign * dx_J.  Returns (0, ()) when k is in I."""
    if k in I:
        return 0, ()
    p = sum(1 for a in I if a < k)
    J = I[:p] + (k,) + I[p:]
    return (-1) ** p, J


def contract(k: int, I: Index) -> Tuple[int, Index]:
    """iota_{d/dx_k} dx_I = sign * dx_J.  Returns (0, ()) when k is not in I."""
    if k not in I:
        return 0, ()
    p = I.index(k)
    return (-1) ** p, I[:p] + I[p + 1 :]


class PolyForm:
    """sum_I f_I dx_I with polynomial coefficients f_I."""

    __slots__ = ("dim", "deg", "components")

    def __init__(self, dim: int, deg: int, components: Dict[Index, MultiPoly] | None = None):
        self.dim = dim
        self.deg = deg
        clean = {}
        for I, f in (components or {}).items():
            I = tuple(I)
            if len(I) != deg or list(I) != sorted(set(I)) or (I and not 0 <= I[0] <= I[-1] < dim):
                raise ValueError(f"bad index set {I} for a {deg}-form on R^{dim}")
            if f.nvars != dim:
                raise ValueError("coefficient lives in the wrong number of variables")
            if not f.is_zero():
                clean[I] = f
        self.components = clean

    @classmethod
    def zero(cls, dim: int, deg: int) -> "PolyForm":
        return cls(dim, deg)

    @classmethod
    def monomial(cls, exp, index: Index, coef: RationalLike = 1) -> "PolyForm":
        exp = tuple(exp)
        return cls(len(exp), len(index), {tuple(index): MultiPoly.monomial(exp, coef)})

    @classmethod
    def function(cls, f: MultiPoly) -> "PolyForm":
        return cls(f.nvars, 0, {(): f})

    def _check(self, other: "PolyForm") -> None:
        if (self.dim, self.deg) != (other.dim, other.deg):
            raise ValueError(
                f"form mismatch: ({self.dim},{self.deg}) vs ({other.dim},{other.deg})"
            )

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        comps = dict(self.components)
        for I, f in other.components.items():
            comps[I] = comps[I] + f if I in comps else f
        return PolyForm(self.dim, self.deg, comps)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.dim, self.deg, {I: -f for I, f in self.components.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __mul__(self, c) -> "PolyForm":
        if isinstance(c, MultiPoly):
            return PolyForm(self.dim, self.deg, {I: f * c for I, f in self.components.items()})
        c = Q(c)
        return PolyForm(self.dim, self.deg, {I: f * c for I, f in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.dim, self.deg, self.components) == (other.dim, other.deg, other.components)

    def is_zero(self) -> bool:
        return not self.components

    def items(self) -> Iterator[Tuple[Index, MultiPoly]]:
        return iter(sorted(self.components.items()))

    def __repr__(self) -> str:
        if not self.components:
            return f"0 ({self.deg}-form on R^{self.dim})"
        parts = []
        for I, f in self.items():
            dx = "^".join(f"dx{k + 1}" for k in I) or "1"
            parts.append(f"({f}) {dx}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        """Index sets are written 1-based, matching dx_1..dx_m."""
        return {
            "dim": self.dim,
            "deg": self.deg,
            "components": [
                {
                    "index": [k + 1 for k in I],
                    "poly": [
                        {"exp": list(e), "coef": format_rational(c)}
                        for e, c in sorted(f.terms.items(), reverse=True)
                    ],
                }
                for I, f in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyForm":
        dim, deg = data["dim"], data["deg"]
        comps = {}
        for comp in data["components"]:
            I = tuple(k - 1 for k in comp["index"])
            comps[I] = MultiPoly(
                dim, {tuple(t["exp"]): parse_rational(t["coef"]) for t in comp["poly"]}
            )
        return cls(dim, deg, comps)


def exterior_d(w: PolyForm) -> PolyForm:
    """Degree goes up by one; on top-degree forms the result is the zero form."""
    if w.deg >= w.dim:
        return PolyForm.zero(w.dim, w.deg + 1)
    out: Dict[Index, MultiPoly] = {}
    for I, f in w.components.items():
        for k in range(w.dim):
            s, J = wedge_left(k, I)
            if not s:
                continue
            g = f.diff(k)
            if g.is_zero():
                continue
            g = g if s > 0 else -g
            out[J] = out[J] + g if J in out else g
    return PolyForm(w.dim, w.deg + 1, out)


def interior(w: PolyForm, k: int) -> PolyForm:
    """iota_{d/dx_k} w (the zero form of degree -1 on functions)."""
    if w.deg == 0:
        return PolyForm.zero(w.dim, -1)
    out: Dict[Index, MultiPoly] = {}
    for I, f in w.components.items():
        s, J = contract(k, I)
        if s:
            g = f if s > 0 else -f
            out[J] = out[J] + g if J in out else g
    return PolyForm(w.dim, w.deg - 1, out)


def interior_n(w: PolyForm) -> PolyForm:
    """Contraction with the normal field d/dx_n (last coordinate)."""
    return interior(w, w.dim - 1)


def codifferential(w: PolyForm) -> PolyForm:
    if w.deg == 0:
        return PolyForm.zero(w.dim, -1)
    out = PolyForm.zero(w.dim, w.deg - 1)
    for k in range(w.dim):
        dk = PolyForm(w.dim, w.deg, {I: f.diff(k) for I, f in w.components.items()})
        out = out - interior(dk, k)
    return out


def laplacian(w: PolyForm) -> PolyForm:
    """Componentwise sum_k d^2/dx_k^2."""
    comps = {}
    for I, f in w.components.items():
        g = MultiPoly.zero(w.dim)
        for k in range(w.dim):
            g = g + f.diff(k).diff(k)
        comps[I] = g
    return PolyForm(w.dim, w.deg, comps)


def restrict(w: PolyForm) -> PolyForm:
    """Pullback to the hyperplane x_n = 0 (a form on R^{m-1} of the same degree)."""
    m = w.dim - 1
    if w.deg > m:
        return PolyForm.zero(m, w.deg)
    comps = {I: f.set_last_zero() for I, f in w.components.items() if m not in I}
    return PolyForm(m, w.deg, comps)


def pullback_reflection(w: PolyForm, k: int) -> PolyForm:
    """Pullback by the reflection x_k -> -x_k."""
    comps = {}
    for I, f in w.components.items():
        g = f.substitute_scale(k, -1)
        comps[I] = -g if k in I else g
    return PolyForm(w.dim, w.deg, comps)


__all__ = [
    "PolyForm",
    "basis",
    "wedge_left",
    "contract",
    "exterior_d",
    "codifferential",
    "interior",
    "interior_n",
    "laplacian",
    "restrict",
    "pullback_reflection",
]

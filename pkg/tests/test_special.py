from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sbo.diffop import DiffOp
from sbo.exact import MultiPoly
from sbo.forms import PolyForm
from sbo.special import BiPoly, UniPoly, gegenbauer, gegenbauer_latex, inflate, juhl, juhl_latex

from conftest import rationals

ALPHAS = [Fraction(k, 2) for k in range(-6, 7)]


def test_gegenbauer_examples():
    a = Fraction(2, 7)
    assert gegenbauer(a, 0) == UniPoly((1,))
    assert gegenbauer(a, 1) == UniPoly((0, 2))
    assert gegenbauer(a, 2) == UniPoly((-1, 0, 2 * (a + 1)))
    assert gegenbauer(a, 3) == UniPoly((0, -2, 0, Fraction(4, 3) * (a + 2)))


def test_inflation_examples():
    a = Fraction(-3, 5)
    assert inflate(a, 0) == BiPoly({(0, 0): 1})
    assert inflate(a, 1) == BiPoly({(0, 1): 2})
    assert inflate(a, 2) == BiPoly({(0, 2): 2 * (a + 1), (1, 0): -1})


def _classical(ell):
    """sympy's Gegenbauer polynomial divided by Gamma(a + [(ell+1)/2]) / Gamma(a),
    as a polynomial in (a, z) after cancellation."""
    a, z = sympy.symbols("a z")
    expr = sympy.gegenbauer(ell, a, z) / sympy.rf(a, (ell + 1) // 2)
    return a, z, sympy.Poly(sympy.cancel(sympy.expand_func(expr)), z)


@pytest.mark.parametrize("ell", range(0, 7))
def test_against_classical_gegenbauer(ell):
    a, z, P = _classical(ell)
    for alpha in ALPHAS:
        coeffs = P.all_coeffs()[::-1]
        expected = [sympy.nsimplify(c.subs(a, sympy.Rational(alpha.numerator, alpha.denominator))) for c in coeffs]
        got = gegenbauer(alpha, ell)
        assert [sympy.Rational(got[k].numerator, got[k].denominator) for k in range(len(expected))] == expected


def test_never_zero():
    for alpha in [Fraction(k, 2) for k in range(-6, 7)]:
        for ell in range(9):
            assert not gegenbauer(alpha, ell).is_zero()


@given(rationals, st.integers(0, 8))
def test_parity_and_degree(alpha, ell):
    g = gegenbauer(alpha, ell)
    assert all(c == 0 for p, c in enumerate(g.coeffs) if (p - ell) % 2)
    b = (ell + 1) // 2
    lead_vanishes = any(alpha + m == 0 for m in range(b, ell))
    assert (g.degree() == ell) == (not lead_vanishes)


def test_juhl_low_orders():
    n = 4
    z = (0,) * n
    lam = Fraction(5, 3)
    assert juhl(lam, lam, n).diffop(0) == DiffOp.identity(n, 0).restrict()
    assert juhl(lam, lam + 1, n).diffop(0) == DiffOp(n, 0, 0, {(z, (0, 0, 0, 1)): {((), ()): 2}}, True)


@pytest.mark.parametrize("lam", [Fraction(-2), Fraction(1, 3), Fraction(7, 2)])
def test_juhl_second_order_closed_form(lam):
    n = 4
    op = juhl(lam, lam + 2, n)
    x = [MultiPoly.var(n, k) for k in range(n)]
    for f in (x[0] ** 2, x[3] ** 2, x[0] * x[1] * x[3] ** 2, x[2] ** 2 * x[3] ** 2):
        w = PolyForm.function(f)
        lap = sum((f.diff(k).diff(k) for k in range(n - 1)), MultiPoly.zero(n))
        closed = lap + f.diff(3).diff(3) * (2 * lam - n + 3)
        assert op.apply(w) == PolyForm.function(closed.set_last_zero())


def test_juhl_rejects_non_natural_order():
    with pytest.raises(ValueError):
        juhl(1, Fraction(3, 2), 3)
    with pytest.raises(ValueError):
        juhl(2, 1, 3)


def test_latex():
    assert gegenbauer_latex(0, 2) == r"\widetilde{C}^{0}_{2}(z) = 2 z^{2} - 1"
    tex = juhl_latex(1, 3, 4)
    assert tex.startswith(r"\widetilde{\mathbb{C}}_{1, 3} = \mathrm{Rest}_{x_{4}=0}")
    assert r"\Delta_{\mathbb{R}^{3}}" in tex

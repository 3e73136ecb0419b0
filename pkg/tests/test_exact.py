from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sbo.exact import (
    MultiPoly,
    Q,
    RatMatrix,
    format_rational,
    is_natural,
    monomials,
    monomials_upto,
    nullspace,
    parse_rational,
    poly_arith,
    poly_diff,
)

from conftest import polys, rationals

x1, x2 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)


def test_difference_of_squares():
    assert poly_arith(x1 + x2, x1 - x2, "mul") == x1 * x1 - x2 * x2


def test_times_zero_is_empty():
    p = poly_arith(x1 + 3, MultiPoly.zero(2), "mul")
    assert p.terms == {} and p.is_zero()


def test_halves_add_exactly():
    half = x1 * Fraction(1, 2)
    assert poly_arith(half, half, "add") == x1


def test_variable_count_mismatch():
    with pytest.raises(ValueError):
        poly_arith(x1, MultiPoly.var(3, 0), "add")


def test_derivatives():
    assert poly_diff(x1 * x1 * x2, 0) == x1 * x2 * 2
    assert poly_diff(x1 ** 3, 1).is_zero()
    x3 = MultiPoly.var(3, 2)
    assert poly_diff(poly_diff(x3 * x3, 2), 2) == MultiPoly.const(3, 2)
    with pytest.raises((ValueError, IndexError)):
        poly_diff(x1, 2)


def test_rational_parsing():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(Fraction(8, 4)) == "2"
    for bad in ("1.5", "1e3", "x", "1/0"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational(bad)


def test_is_natural():
    assert is_natural(0) and is_natural(Fraction(6, 3))
    assert not is_natural(-1) and not is_natural(Fraction(1, 2))


def test_monomial_counts():
    assert len(monomials(3, 2)) == 6
    assert len(monomials_upto(3, 2)) == 10


@given(polys(3), polys(3), polys(3))
def test_ring_axioms(p, q, r):
    assert p + q - q == p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(polys(3))
def test_no_zero_coefficients_and_no_floats(p):
    p2 = p * p - p
    assert all(c != 0 for c in p2.terms.values())
    assert all(isinstance(c, Fraction) for c in p2.terms.values())


@given(polys(3), polys(3), st.integers(0, 2))
def test_leibniz(p, q, k):
    assert (p * q).diff(k) == p.diff(k) * q + p * q.diff(k)


def test_nullspace_examples():
    assert nullspace(RatMatrix.identity(3)) == []
    assert len(nullspace(RatMatrix.zeros(2, 3))) == 3
    (v,) = nullspace(RatMatrix([[1, 1], [2, 2]]))
    assert v[0] == -v[1] != 0


matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(rationals, min_size=c, max_size=c), min_size=1, max_size=6)
)


@given(matrices)
def test_nullspace_against_sympy(rows):
    M = RatMatrix(rows)
    ker = nullspace(M)
    for v in ker:
        assert all(c == 0 for c in M.matvec(v))
    S = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows])
    assert M.rank() == S.rank()
    assert len(ker) + M.rank() == len(rows[0])
    # the kernel vectors are independent
    if ker:
        assert RatMatrix(ker).rank() == len(ker)


def test_bareiss_handles_large_entries():
    rows = [[Fraction(10**30 + k, 7 ** (k + 1)) for k in range(4)] for _ in range(2)]
    rows.append([Fraction(k * k + 1, 3) for k in range(4)])
    M = RatMatrix(rows)
    assert M.rank() == 2
    for v in nullspace(M):
        assert all(c == 0 for c in M.matvec(v))


def test_coercion():
    assert Q("2/4") == Fraction(1, 2)
    assert Q(3) == Fraction(3)

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sbo.diffop import (
    DiffOp,
    codiff_op,
    commutator,
    compose,
    d_op,
    iota_n,
    laplacian_op,
    partial,
    rest_op,
)
from sbo.exact import MultiPoly
from sbo.forms import codifferential, exterior_d, interior_n, laplacian, restrict

from conftest import forms, polys


@given(forms(dim=3))
def test_operators_match_direct_calculus(w):
    n, i = 3, w.deg
    assert d_op(n, i).apply(w) == exterior_d(w)
    assert codiff_op(n, i).apply(w) == codifferential(w)
    assert iota_n(n, i).apply(w) == interior_n(w)
    assert laplacian_op(n, i).apply(w) == laplacian(w)
    assert rest_op(n, i).apply(w) == restrict(w)


@given(forms(dim=3, deg=1), polys(3, 2), polys(3, 2))
def test_composition_agrees_with_sequential_application(w, f, g):
    A = DiffOp.scalar(3, 1, f, (1, 0, 0)) + d_op(3, 0) @ codiff_op(3, 1)
    B = DiffOp.scalar(3, 1, g, (0, 0, 1))
    assert compose(A, B).apply(w) == A.apply(B.apply(w))


@given(forms(dim=4, deg=2))
def test_restricted_composition(w):
    inner = compose(rest_op(4, 1), iota_n(4, 2))
    outer = d_op(3, 1)
    assert compose(outer, inner).apply(w) == exterior_d(restrict(interior_n(w)))


def test_operator_identities():
    for n in (3, 4):
        for i in range(n + 1):
            hodge = compose(d_op(n, i - 1), codiff_op(n, i)) if i else DiffOp.zero(n, i, i)
            if i < n:
                hodge = hodge + compose(codiff_op(n, i + 1), d_op(n, i))
            assert hodge == -laplacian_op(n, i)
            if i + 2 <= n:
                assert compose(d_op(n, i + 1), d_op(n, i)).is_zero()
            if i >= 2:
                assert compose(iota_n(n, i - 1), iota_n(n, i)).is_zero()


def test_weyl_relation():
    x = DiffOp.scalar(2, 0, MultiPoly.var(2, 0))
    dx = partial(2, 0, (1, 0))
    assert commutator(dx, x) == DiffOp.identity(2, 0)


def test_order_and_constancy():
    op = laplacian_op(3, 1, 2)
    assert op.order() == 4 and op.is_constant()
    assert DiffOp.zero(3, 1, 1).order() == -1


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        compose(d_op(3, 1), d_op(3, 1))


@given(st.integers(0, 2), forms(dim=3))
def test_reflection_conjugation(k, w):
    from sbo.forms import pullback_reflection

    A = d_op(3, w.deg) if w.deg < 3 else codiff_op(3, w.deg)
    lhs = A.reflect(k).apply(w)
    rhs = pullback_reflection(A.apply(pullback_reflection(w, k)), k)
    assert lhs == rhs

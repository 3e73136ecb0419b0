from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sbo.diffop import DiffOp, compose, iota_n
from sbo.exact import MultiPoly, monomials_upto
from sbo.forms import PolyForm, basis
from sbo.operators import MatDiffOp, ParameterError, build_renormalized, constants
from sbo.rep import equivariance_residual, subalgebra_labels
from sbo.verify import (
    FALSIFIED,
    INAPPLICABLE,
    VERIFIED,
    _minimal_monomial,
    check_factorization,
    check_sbo,
    factorization_sides,
    proportionality,
    solve_sbo_space,
)

from conftest import rationals

Z3 = (0, 0, 0)


def rest(n, i, lam):
    return MatDiffOp(DiffOp.identity(n, i).restrict(), lam, lam)


@given(rationals)
def test_restriction_is_symmetry_breaking(lam):
    for i in range(3):
        assert check_sbo(rest(3, i, lam)).verdict == VERIFIED


@given(rationals)
def test_restricted_normal_contraction(lam):
    # I(i, lam) is the space of i-forms of conformal weight u = lam - i, so the
    # weight shift u -> u + 1 of Rest o iota is nu = lam in these coordinates
    D = MatDiffOp(iota_n(3, 2).restrict(), lam, lam)
    assert check_sbo(D).verdict == VERIFIED
    assert check_sbo(MatDiffOp(D.op, lam, lam + 1)).verdict == FALSIFIED


def test_tangential_derivative_is_not():
    D = MatDiffOp(DiffOp(3, 0, 0, {(Z3, (1, 0, 0)): {((), ()): 1}}, True), Fraction(1, 3), Fraction(4, 3))
    rep = check_sbo(D)
    assert rep.verdict == FALSIFIED
    assert rep.witness["generator"] == "rotation (1,2)"
    assert PolyForm.from_json(rep.witness["form"]) == PolyForm.monomial((0, 1, 0), ())
    assert not PolyForm.from_json(rep.witness["residual"]).is_zero()


def test_reflection_probe_is_needed():
    # multiplying by dx1^dx2 commutes with the whole Lie algebra but not with x1 -> -x1
    H = MatDiffOp(DiffOp(3, 0, 2, {(Z3, Z3): {((0, 1), ()): 1}}, True), Fraction(2, 5), Fraction(2, 5))
    assert all(equivariance_residual(H, L).is_zero() for L in subalgebra_labels(3))
    rep = check_sbo(H)
    assert rep.verdict == FALSIFIED and rep.witness["generator"].startswith("reflection")


def test_max_degree_precondition():
    D = build_renormalized(3, 1, 1, 0, 2)
    with pytest.raises(ParameterError):
        check_sbo(D, max_degree=2)
    assert check_sbo(D, max_degree=5).verdict == VERIFIED


def test_zero_operator_is_inapplicable():
    D = MatDiffOp(DiffOp.zero(3, 1, 1, True), 1, 1)
    assert check_sbo(D).verdict == INAPPLICABLE


@pytest.mark.parametrize(
    "D",
    [
        build_renormalized(3, 2, 1, Fraction(1, 2), Fraction(5, 2)),
        build_renormalized(4, 1, 1, -1, 0),
        MatDiffOp(DiffOp(3, 1, 1, {(Z3, (0, 0, 1)): {((0,), (0,)): 1}}, True), 0, 1),
        MatDiffOp(DiffOp(3, 1, 0, {(Z3, (1, 0, 0)): {((), (0,)): 1}}, True), 2, 3),
    ],
)
def test_engines_agree(D):
    a, b = check_sbo(D, method="operator"), check_sbo(D, method="monomial")
    assert a.verdict == b.verdict
    if a.verdict == FALSIFIED:
        assert a.witness["generator"] == b.witness["generator"]


@given(st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda c: c != 0))
def test_scalar_multiples(c):
    D = build_renormalized(3, 1, 0, Fraction(1, 3), Fraction(7, 3))
    assert check_sbo(D.scale(c)).verdict == check_sbo(D).verdict == VERIFIED
    E = MatDiffOp(DiffOp(3, 0, 0, {(Z3, (1, 0, 0)): {((), ()): 1}}, True), 0, 1)
    assert check_sbo(E.scale(c)).verdict == FALSIFIED


@st.composite
def random_ops(draw):
    n, src, tgt = 3, draw(st.integers(0, 2)), draw(st.integers(0, 2))
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        a = tuple(draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
        b = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
        J = draw(st.sampled_from(basis(n, tgt)))
        I = draw(st.sampled_from(basis(n, src)))
        terms.setdefault((a, b), {})[(J, I)] = draw(rationals.filter(lambda c: c != 0))
    return DiffOp(n, src, tgt, terms)


@given(random_ops())
def test_degree_bound_lemma(op):
    if op.is_zero():
        return
    M = op.order()
    forms = [PolyForm.monomial(e, I) for e in monomials_upto(3, M) for I in basis(3, op.src)]
    assert any(not op.apply(w).is_zero() for w in forms)
    beta, I = _minimal_monomial(op)
    assert sum(beta) <= M
    assert not op.apply(PolyForm.monomial(beta, I)).is_zero()


def test_oracle_examples():
    for lam, nu in ((0, 0), (1, 3), (Fraction(1, 2), Fraction(3, 2))):
        assert solve_sbo_space(3, 0, 2, lam, nu).dimension == 0
    res = solve_sbo_space(3, 1, 1, 1, 3)
    assert res.dimension == 1
    assert proportionality(res.basis[0].op, build_renormalized(3, 1, 1, 1, 3).op) is not None
    assert solve_sbo_space(4, 2, 0, 2, 3).dimension == 1
    assert solve_sbo_space(3, 1, 1, 1, Fraction(5, 2)).dimension == 0
    assert solve_sbo_space(3, 1, 1, 2, 1).dimension == 0


def test_oracle_half_integer_weights():
    for i, j in ((1, 1), (2, 1), (0, 0)):
        lam = Fraction(-1, 2)
        res = solve_sbo_space(3, i, j, lam, lam + 2)
        assert res.dimension == 1
        assert proportionality(res.basis[0].op, build_renormalized(3, i, j, lam, lam + 2).op) is not None


def test_proportionality():
    D = build_renormalized(3, 1, 1, 0, 2).op
    assert proportionality(D.scale(Fraction(-3, 4)), D) == Fraction(-3, 4)
    assert proportionality(build_renormalized(3, 1, 1, 1, 3).op, D) is None


def test_factorization_example():
    rep = check_factorization("4.1", 4, 1, 0, 1)
    assert rep.verdict == VERIFIED and rep.stats["constant"] == "-2"


def test_factorization_parameter_ranges():
    with pytest.raises(ParameterError):
        check_factorization("4.1", 4, 4, 0, 1)
    with pytest.raises(ParameterError):
        check_factorization("5.2", 4, 0, 0, 1)
    with pytest.raises(ParameterError):
        check_factorization("5.2", 4, 1, 0, 0)
    with pytest.raises(ParameterError):
        check_factorization("6.1", 4, 1, 0, 1)


def test_falsified_factorization_reports_the_observed_constant():
    rep = check_factorization("5.2", 4, 4, 1, 1)
    assert rep.verdict == FALSIFIED
    assert rep.witness["stated_constant"] == "-7/2"
    assert rep.witness["observed_constant"] == "5/2"


def observed(theorem, n, i, a, ell):
    left, rhs, _ = factorization_sides(theorem, n, i, a, ell)
    return proportionality(left.op, rhs.op)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_boundary_constants(n):
    """The constants that do hold at the three boundary branches of the
    factorization identities (renormalized operators on both sides)."""
    half, half1 = Fraction(n, 2), Fraction(n - 1, 2)
    for ell in (1, 2):
        K0 = constants(n, 0, 0, ell).K
        assert observed("4.1", n, 0, 0, ell) == (-ell - half) * K0
        assert observed("5.1", n, n, 0, ell) == (ell + half) * K0
        for a in (0, 1, 2):
            assert observed("5.2", n, n, a, ell) == (ell + half1) * constants(n, n, a, ell).K

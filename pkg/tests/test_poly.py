from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nambu.poly import DimensionError, Polynomial, monomial, monomials_up_to, partial

from oracle import to_sympy, xs
from strategies import polynomials

D = 3
x1, x2, x3 = (Polynomial.var(D, i) for i in (1, 2, 3))


def test_additive_inverse():
    assert (x1 + (-x1)).is_zero()


def test_like_terms_merge():
    assert x1 * x2 + x1 * x2 == 2 * x1 * x2


def test_add_by_hand():
    p = (x1**2 + 1) + x2
    assert p == Polynomial(D, {monomial({1: 2}): 1, monomial({2: 1}): 1, (): 1})
    assert str(p) == "x1^2 + x2 + 1"


def test_difference_of_squares():
    assert (x1 + 1) * (x1 - 1) == x1**2 - 1


def test_multiplicative_identity_and_annihilator():
    p = 3 * x1**2 * x2 - Fraction(1, 2)
    assert p * 0 == 0
    assert (p * Polynomial.zero(D)).is_zero()
    assert p * 1 == p
    assert p * Polynomial.constant(D, 1) == p


def test_partial_power_rule():
    assert partial(x1**2 * x2, 1) == 2 * x1 * x2


def test_partial_of_other_variable_and_constant():
    assert partial(x2, 1).is_zero()
    assert partial(Polynomial.constant(D, 7), 2).is_zero()


def test_partial_index_out_of_range():
    with pytest.raises(IndexError):
        partial(x1, 4)
    with pytest.raises(IndexError):
        partial(x1, 0)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        x1 + Polynomial.var(4, 1)
    with pytest.raises(DimensionError):
        x1 * Polynomial.var(2, 1)


def test_zero_coefficients_are_not_stored():
    p = Polynomial(D, {monomial({1: 1}): 0, (): Fraction(0, 5)})
    assert p.terms == {}
    assert monomial({1: 0, 2: 3}) == ((2, 3),)


def test_coefficients_stay_exact():
    p = Fraction(1, 3) * x1 + Fraction(2, 3) * x1
    assert p == x1
    assert p.terms[((1, 1),)] == Fraction(1)


def test_monomials_up_to_counts():
    # C(d + k, k) monomials of degree <= k in d variables
    assert len(monomials_up_to(3, 2)) == 10
    assert len(monomials_up_to(6, 2, min_degree=1)) == 27
    assert monomials_up_to(2, 1) == [(), ((1, 1),), ((2, 1),)]


def test_printing():
    assert str(3 * x1**2 * x2 - Fraction(1, 2)) == "3*x1^2*x2 - 1/2"
    assert str(Polynomial.zero(D)) == "0"
    assert str(-x3) == "-x3"


def test_evaluate():
    p = 3 * x1**2 * x2 - Fraction(1, 2)
    assert p.evaluate([2, 1, 5]) == Fraction(23, 2)


@settings(max_examples=60, deadline=None)
@given(polynomials(D), polynomials(D), polynomials(D))
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60, deadline=None)
@given(polynomials(D), polynomials(D))
def test_arithmetic_matches_sympy(p, q):
    assert to_sympy(p * q) == sp.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sp.expand(to_sympy(p) - to_sympy(q))


@settings(max_examples=60, deadline=None)
@given(polynomials(D), polynomials(D), st.integers(1, D))
def test_leibniz(p, q, i):
    assert partial(p * q, i) == partial(p, i) * q + p * partial(q, i)


@settings(max_examples=60, deadline=None)
@given(polynomials(D, max_degree=3), st.integers(1, D), st.integers(1, D))
def test_mixed_partials_commute(p, i, j):
    assert partial(partial(p, i), j) == partial(partial(p, j), i)


@settings(max_examples=40, deadline=None)
@given(polynomials(D, max_degree=3), st.integers(1, D))
def test_partial_matches_sympy(p, i):
    assert to_sympy(partial(p, i)) == sp.diff(to_sympy(p), xs(D)[i - 1])

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nambu.multivector import (
    Multivector,
    bracket_eval,
    contract,
    contract_all,
    hamiltonian,
    lie_bracket,
    nj_bracket_eval,
    s_operator,
    schouten,
    wedge,
    wedge_all,
)
from nambu.poly import Polynomial

import oracle
from strategies import multivectors, nonconstant_polynomials, polynomials, vector_fields


def d(dim, *idx):
    return Multivector.basis(dim, *idx)


def x(dim, i):
    return Polynomial.var(dim, i)


def one(dim):
    return Polynomial.constant(dim, 1)


# -- wedge ---------------------------------------------------------------------

def test_wedge_examples():
    assert wedge(d(3, 1), d(3, 2)) == d(3, 1, 2)
    assert wedge(d(3, 2), d(3, 1)) == -d(3, 1, 2)
    assert wedge(d(3, 1) * x(3, 1), d(3, 1, 2)).is_zero()


def test_wedge_beyond_dimension_is_zero():
    w = wedge(d(3, 1, 2), d(3, 2, 3))
    assert w.is_zero() and w.degree == 4


def test_unsorted_basis_gets_permutation_sign():
    assert d(4, 3, 1, 2) == d(4, 1, 2, 3)
    assert d(4, 2, 1, 3) == -d(4, 1, 2, 3)
    assert d(4, 1, 1, 3).is_zero()


# -- contraction and brackets --------------------------------------------------

def test_contract_examples():
    L = d(3, 1, 2, 3)
    assert contract(L, x(3, 1)) == d(3, 2, 3)
    assert contract(L, x(3, 2)) == -d(3, 1, 3)
    assert contract(L, Polynomial.constant(3, 5)).is_zero()


def test_contract_degree_zero_rejected():
    with pytest.raises(ValueError):
        contract(Multivector.scalar(x(3, 1)), x(3, 2))


def test_canonical_bracket():
    L = d(3, 1, 2, 3)
    x1, x2, x3 = (x(3, i) for i in (1, 2, 3))
    assert bracket_eval(L, [x1, x2, x3]) == 1
    assert bracket_eval(L, [x2, x1, x3]) == -1
    assert bracket_eval(L, [x1**2, x2, x3]) == 2 * x1


def test_bracket_arity_checked():
    with pytest.raises(ValueError):
        bracket_eval(d(3, 1, 2, 3), [x(3, 1), x(3, 2)])


def test_hamiltonian_examples():
    assert hamiltonian(d(3, 1, 2, 3), [x(3, 1), x(3, 2)]) == d(3, 3)
    assert hamiltonian(d(2, 1, 2), [x(2, 2)]) == -d(2, 1)
    assert hamiltonian(d(3, 1, 2, 3), [Polynomial.constant(3, 4), x(3, 1) ** 2]).is_zero()
    with pytest.raises(ValueError):
        hamiltonian(d(3, 1, 2, 3), [x(3, 1)])


def test_schouten_examples():
    assert schouten(d(4, 1, 2), d(4, 3, 4) * x(4, 1)) == -d(4, 2, 3, 4)
    assert schouten(d(4, 1), Multivector.scalar(x(4, 1))) == Multivector.scalar(one(4))
    assert schouten(d(4, 1, 2), d(4, 3, 4)).is_zero()


def test_schouten_of_functions_is_zero():
    r = schouten(Multivector.scalar(x(3, 1)), Multivector.scalar(x(3, 2)))
    assert r.is_zero() and r.degree == 0


def test_lie_bracket_of_vector_fields():
    X = d(3, 1) + d(3, 3) * x(3, 2)
    Y = d(3, 2)
    assert lie_bracket(X, Y) == -d(3, 3)


def test_s_operator_examples():
    G = d(3, 1, 2)
    x1, x2, x3 = (x(3, i) for i in (1, 2, 3))
    assert s_operator(G, [x1, x2, x3]) == x3
    assert s_operator(G, [x1, x2, x2]).is_zero()
    y1 = x(1, 1)
    assert s_operator(d(1, 1), [y1, y1**2]) == y1**2


def test_nj_bracket_examples():
    D, G = d(3, 1, 2, 3), d(3, 1, 2)
    x1, x2, x3 = (x(3, i) for i in (1, 2, 3))
    assert nj_bracket_eval(D, G, [x1, x2, x3]) == 1 + x3
    assert nj_bracket_eval(D, None, [x1, x2, x3]) == bracket_eval(D, [x1, x2, x3])
    assert nj_bracket_eval(D, Multivector.zero(3, 2), [x1**2, x2, x3]) == 2 * x1
    y1 = x(1, 1)
    assert nj_bracket_eval(Multivector.zero(1, 2), d(1, 1), [one(1), y1]) == 1


def test_nj_bracket_degree_mismatch():
    with pytest.raises(ValueError):
        nj_bracket_eval(d(3, 1, 2, 3), d(3, 1), [x(3, 1)] * 3)


def test_addition_of_different_degrees_rejected():
    with pytest.raises(ValueError):
        d(3, 1) + d(3, 1, 2)


def test_printing_round_trip_sample():
    L = d(6, 1, 2, 3) + d(6, 4, 5, 6)
    assert str(L) == "d1^d2^d3 + d4^d5^d6"
    M = d(4, 1, 2) * (-x(4, 1)) + d(4, 3, 4) * (x(4, 1) + x(4, 2))
    assert str(M) == "-x1*d1^d2 + (x1 + x2)*d3^d4"


# -- properties against the sympy oracle ----------------------------------------

@settings(max_examples=40, deadline=None)
@given(multivectors(4, 2), multivectors(4, 1), multivectors(4, 1))
def test_wedge_matches_oracle(A, B, C):
    assert oracle.mv_to_dict(wedge(A, B)) == oracle.wedge(oracle.mv_to_dict(A), oracle.mv_to_dict(B))
    assert wedge(wedge(A, B), C) == wedge(A, wedge(B, C))


@settings(max_examples=40, deadline=None)
@given(multivectors(4, 3), polynomials(4))
def test_contract_matches_oracle(L, f):
    expected = oracle.interior(oracle.mv_to_dict(L), oracle.to_sympy(f), 4)
    assert oracle.mv_to_dict(contract(L, f)) == expected


@settings(max_examples=40, deadline=None)
@given(multivectors(4, 3), st.lists(polynomials(4), min_size=3, max_size=3))
def test_bracket_is_jacobian_determinant(L, fs):
    expected = oracle.determinant_bracket(oracle.mv_to_dict(L), [oracle.to_sympy(f) for f in fs], 4)
    assert oracle.to_sympy(bracket_eval(L, fs)) == expected


@settings(max_examples=40, deadline=None)
@given(multivectors(4, 3), st.lists(polynomials(4), min_size=3, max_size=3), st.integers(0, 1))
def test_bracket_antisymmetric(L, fs, i):
    swapped = list(fs)
    swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
    assert bracket_eval(L, swapped) == -bracket_eval(L, fs)


@settings(max_examples=40, deadline=None)
@given(multivectors(4, 3), polynomials(4), polynomials(4), polynomials(4), polynomials(4))
def test_bracket_leibniz(L, f, g, f2, f3):
    lhs = bracket_eval(L, [f * g, f2, f3])
    rhs = f * bracket_eval(L, [g, f2, f3]) + bracket_eval(L, [f, f2, f3]) * g
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(multivectors(4, 3), polynomials(4))
def test_double_contraction_vanishes(L, f):
    assert contract(contract(L, f), f).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_schouten_graded_antisymmetry(p, q, data):
    P = data.draw(multivectors(4, p))
    Q = data.draw(multivectors(4, q))
    sign = 1 if ((p - 1) * (q - 1)) % 2 else -1
    assert schouten(P, Q) == schouten(Q, P) * sign


@st.composite
def decomposable(draw, dim, k):
    fields = [draw(vector_fields(dim)) for _ in range(k)]
    return fields


def _as_sympy_field(X, dim):
    return [oracle.to_sympy(X.coefficient((i,))) for i in range(1, dim + 1)]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_schouten_matches_decomposable_formula(k, l, data):
    dim = 4
    Xs = data.draw(decomposable(dim, k))
    Ys = data.draw(decomposable(dim, l))
    ours = schouten(wedge_all(Xs, dim), wedge_all(Ys, dim))
    expected = oracle.decomposable_schouten(
        [_as_sympy_field(X, dim) for X in Xs], [_as_sympy_field(Y, dim) for Y in Ys], dim
    )
    assert oracle.mv_to_dict(ours) == expected


@settings(max_examples=40, deadline=None)
@given(vector_fields(4, max_degree=2), polynomials(4))
def test_schouten_vector_on_function(X, f):
    assert schouten(X, Multivector.scalar(f)).as_polynomial() == contract(X, f).as_polynomial()


@settings(max_examples=40, deadline=None)
@given(multivectors(4, 2), nonconstant_polynomials(4))
def test_bivector_sign_pin(G, f):
    assert schouten(G, Multivector.scalar(f)) == -contract(G, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_schouten_on_function_general_degree(k, data):
    # [G, f] = (-1)**(deg G - 1) G_f; only even degrees give the bare minus sign
    G = data.draw(multivectors(4, k))
    f = data.draw(polynomials(4))
    assert schouten(G, Multivector.scalar(f)) == contract(G, f) * ((-1) ** (k - 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.data())
def test_schouten_graded_jacobi(p, q, r, data):
    dim = 3
    P = data.draw(multivectors(dim, p, max_terms=2))
    Q = data.draw(multivectors(dim, q, max_terms=2))
    R = data.draw(multivectors(dim, r, max_terms=2))
    assume(p + q + r - 2 <= dim)

    def s(a, b):
        return -1 if ((a - 1) * (b - 1)) % 2 else 1

    total = (
        schouten(P, schouten(Q, R)) * s(p, r)
        + schouten(Q, schouten(R, P)) * s(q, p)
        + schouten(R, schouten(P, Q)) * s(r, q)
    )
    assert total.is_zero()


@settings(max_examples=30, deadline=None)
@given(multivectors(3, 2), multivectors(3, 3), st.lists(polynomials(3), min_size=3, max_size=3))
def test_s_operator_antisymmetric(G, D, fs):
    swapped = [fs[1], fs[0], fs[2]]
    assert s_operator(G, swapped) == -s_operator(G, fs)
    assert nj_bracket_eval(D, G, swapped) == -nj_bracket_eval(D, G, fs)


@settings(max_examples=30, deadline=None)
@given(multivectors(4, 3), st.lists(polynomials(4), min_size=2, max_size=2))
def test_contract_all_applies_first_function_first(L, fs):
    assert contract_all(L, fs) == contract(contract(L, fs[0]), fs[1])


def test_fraction_coefficients_survive():
    L = d(3, 1, 2) * Fraction(1, 3)
    assert bracket_eval(L, [x(3, 1), x(3, 2)]) == Fraction(1, 3)

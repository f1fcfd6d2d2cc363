from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgkdim.scalars import ScalarExpr, scalar_eval, scalar_mul, scalar_sum

Q = Fraction(1, 2)


@st.composite
def scalars(draw):
    out = ScalarExpr.zero()
    for _ in range(draw(st.integers(0, 3))):
        c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=4))
        term = ScalarExpr.qpow(draw(st.integers(-3, 3)), c)
        for k in draw(st.sets(st.integers(1, 3), max_size=2)):
            term = term * ScalarExpr.atom(k)
        out = out + term
    return out


def close(x: ScalarExpr, value, tol=1e-25):
    return abs(x.eval(Q) - value) < tol


def test_atom_squares_to_one_minus_q_power():
    for k in (1, 2, 5):
        r = ScalarExpr.atom(k)
        assert r * r == ScalarExpr.one() - ScalarExpr.qpow(2 * k)


def test_r0_is_zero():
    assert ScalarExpr({(0, frozenset([0])): 1}).is_zero()


def test_negative_atom_rejected():
    with pytest.raises(ValueError):
        ScalarExpr({(0, frozenset([-1])): 1})


def test_distinct_atom_products_do_not_merge():
    x = ScalarExpr.atom(1) * ScalarExpr.atom(2)
    assert x != ScalarExpr.atom(3)
    assert len(x.terms) == 1


def test_eval_against_mpmath():
    # [DERIVED] sqrt(3)/2 at q = 1/2
    with mpmath.workdps(40):
        assert close(ScalarExpr.atom(1), mpmath.sqrt(3) / 2)


def test_eval_rejects_bad_q():
    with pytest.raises(ValueError):
        ScalarExpr.one().eval(Fraction(3, 2))


def test_repr_readable():
    assert repr(ScalarExpr.qpow(1, -1)) == "-q"
    assert repr(ScalarExpr.zero()) == "0"


def test_helpers():
    a, b = ScalarExpr.atom(1), ScalarExpr.qpow(2)
    assert scalar_mul(a, b) == a * b
    assert scalar_sum([a, b, -a]) == b
    assert scalar_eval(b, Q) == b.eval(Q)


def test_shift_q():
    assert ScalarExpr.atom(2).shift_q(3) == ScalarExpr.qpow(3) * ScalarExpr.atom(2)


@given(scalars(), scalars())
def test_commutative(x, y):
    assert x + y == y + x
    assert x * y == y * x


@given(scalars(), scalars(), scalars())
def test_associative_and_distributive(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(scalars())
def test_additive_inverse_and_unit(x):
    assert (x - x).is_zero()
    assert x * ScalarExpr.one() == x
    assert x ** 2 == x * x


@given(scalars(), scalars())
def test_evaluation_is_a_ring_homomorphism(x, y):
    with mpmath.workdps(40):
        tol = mpmath.mpf(10) ** -20
        assert abs((x * y).eval(Q) - x.eval(Q) * y.eval(Q)) < tol
        assert abs((x + y).eval(Q) - x.eval(Q) - y.eval(Q)) < tol


@given(scalars())
def test_hash_consistent_with_equality(x):
    y = x + ScalarExpr.zero()
    assert x == y and hash(x) == hash(y)

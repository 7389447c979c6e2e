from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chab2.errors import ApparentZero, InputError, PrecisionExhausted
from chab2.fields import QQ, FiniteField, LocalField, to_fraction, v2

rationals = st.builds(Fraction, st.integers(-(1 << 30), 1 << 30).filter(bool),
                      st.integers(1, 1 << 20))


def test_v2_and_to_fraction():
    assert v2(48) == 4
    assert v2(-1) == 0
    assert to_fraction("-3/12") == Fraction(-1, 4)
    with pytest.raises(TypeError):
        to_fraction(1.5)


@given(rationals, rationals)
def test_q2_ring_operations_match_rationals(a, b):
    Q2 = LocalField.qp(64)
    x, y = Q2(a), Q2(b)
    assert (x + y - Q2(a + b)).is_zero()
    assert (x * y - Q2(a * b)).is_zero()
    assert (x / y - Q2(a / b)).is_zero()


@given(rationals)
def test_q2_valuation(a):
    Q2 = LocalField.qp(64)
    assert Q2(a).valuation() == v2(a.numerator) - v2(a.denominator)


@pytest.mark.parametrize("l", [3, 5, 7, 21])
def test_pure_field_generator(l):
    K = LocalField.pure(l, 6 * l)
    lam = K.gen()
    assert lam.valuation() == 1
    assert (lam ** l - K(2)).is_zero()
    assert K(2).valuation() == l


def test_unramified_tower():
    K = LocalField([[2, 0], [0, 0], [1, 0]], [1, 1, 1])     # lambda^2 + 2 over Q4
    assert (K.e, K.f, K.n) == (2, 2, 4)
    z = K.zgen()
    assert (z * z + z + K.one).is_zero()
    assert (K.gen() ** 2 + K(2)).is_zero()


def test_inverse_roundtrip():
    K = LocalField.pure(5, 60)
    x = K.one + K.gen() ** 3 * K(7)
    assert (x * x.inverse() - K.one).is_zero()


def test_bad_eisenstein_rejected():
    with pytest.raises(InputError):
        LocalField([1, 1])
    with pytest.raises(InputError):
        LocalField([4, 0, 1])


def test_decide_zero_refuses_to_guess():
    Q2 = LocalField.qp(40)
    x = Q2(1) + Q2(Fraction(1 << 39))
    d = x - Q2(1)
    with pytest.raises(PrecisionExhausted):
        Q2.decide_zero(d)


def test_finite_field_tables():
    F = FiniteField(9)
    assert F.q == 9 and F.p == 3
    nz = [x for x in F.elements() if x]
    for x in nz:
        assert F.mul(x, F.inv(x)) == F.one
    assert len({F.mul(x, x) for x in nz}) == 4


def test_rationals_field():
    assert QQ.mul(Fraction(2, 3), Fraction(3, 4)) == Fraction(1, 2)

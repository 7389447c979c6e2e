from fractions import Fraction

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, settings, strategies as st

from chab2.errors import InputError
from chab2.fields import QQ, FiniteField, LocalField
from chab2.linalg import F2Space, f2_combine, f2_kernel, f2_preimage, invert, solve
from chab2.poly import Poly, crt_pair, squarefree_decomposition

X = sympy.Symbol("x")
coeff = st.integers(-20, 20)
qpolys = st.lists(coeff, min_size=1, max_size=7).map(lambda c: Poly(QQ, [Fraction(x) for x in c]))


def to_sympy(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.c)] or [0],
                      X, domain="QQ")


@settings(max_examples=200)
@given(qpolys, qpolys)
def test_gcd_and_resultant_against_sympy(a, b):
    if a.is_zero() or b.is_zero():
        return
    g = a.gcd(b)
    sg = sympy.gcd(to_sympy(a), to_sympy(b)).monic()
    assert to_sympy(g) == sg
    if a.degree() > 0 and b.degree() > 0:
        # the Sylvester determinant; sympy.resultant flips the sign when deg a < deg b
        syl = sylvester(to_sympy(a).as_expr(), to_sympy(b).as_expr(), X).det()
        assert a.resultant(b) == syl


@given(qpolys, qpolys)
def test_xgcd_bezout(a, b):
    if a.is_zero() and b.is_zero():
        return
    g, s, t = a.xgcd(b)
    assert (s * a + t * b - g).is_zero()


def test_resultant_known_values():
    x = Poly.x(QQ)
    one = Poly.const(QQ, Fraction(1))
    assert (x * x - one * 2).resultant(x - one) == -1
    assert (x ** 5 * 4 + one).resultant(x) == -1
    assert (x + one).resultant(x ** 3 + one * 2) == 1


def test_crt_pair():
    F = FiniteField(7)
    x = Poly.x(F)
    m1, m2 = x - Poly.const(F, 1), x * x + Poly.const(F, 1)
    r = crt_pair(Poly.const(F, 3), m1, x, m2)
    assert (r % m1).c == (3,)
    assert (r % m2 - x).is_zero()
    with pytest.raises(InputError):
        crt_pair(Poly.const(F, 1), m1, Poly.const(F, 1), m1 * m2)


def test_squarefree_decomposition():
    x = Poly.x(QQ)
    one = Poly.const(QQ, Fraction(1))
    a = (x - one) ** 3 * (x + one) * (x - one * 2) ** 2
    dec = {m: p for p, m in squarefree_decomposition(a)}
    assert set(dec) == {1, 2, 3}
    assert (dec[3] - (x - one)).is_zero()
    assert (dec[1] - (x + one)).is_zero()


def test_local_solve_with_small_pivots():
    Q2 = LocalField.qp(64)
    A = [[Q2(2), Q2(1)], [Q2(4), Q2(3)]]
    b = [Q2(1), Q2(5)]
    sol, nullity = solve(Q2, A, b)
    assert nullity == 0
    assert (Q2(2) * sol[0] + sol[1] - Q2(1)).is_zero()
    assert (Q2(4) * sol[0] + Q2(3) * sol[1] - Q2(5)).is_zero()
    inv = invert(QQ, [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]])
    assert inv == [[-2, 1], [Fraction(3, 2), Fraction(-1, 2)]]


vectors = st.lists(st.integers(0, (1 << 12) - 1), max_size=10)


@given(vectors, st.integers(0, (1 << 12) - 1))
def test_f2_kernel_and_preimage(images, target):
    ker = f2_kernel(images)
    for combo in ker:
        assert f2_combine(images, combo) == 0
    space = F2Space(images)
    assert len(ker) == len(images) - space.dim
    pre = f2_preimage(images, target)
    if space.contains(target):
        assert pre is not None and f2_combine(images, pre) == target
    else:
        assert pre is None


@given(vectors, st.integers(0, (1 << 12) - 1), st.integers(0, (1 << 12) - 1))
def test_normal_form_is_linear_and_canonical(images, u, v):
    space = F2Space(images)
    nf = space.normal_form
    assert nf(u ^ v) == nf(u) ^ nf(v)
    assert space.contains(u ^ nf(u))
    assert F2Space(space.reduced_basis()).reduced_basis() == space.reduced_basis()

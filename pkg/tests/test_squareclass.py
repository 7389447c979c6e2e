import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chab2.errors import NotASquare
from chab2.fields import LocalField
from chab2.squareclass import SquareClass, is_square, sc_basis, sc_decompose, sc_sqrt

# Eisenstein polynomials (coefficients low to high) and unramified moduli
DESCRIPTORS = [
    ([-2, 1], None), ([2, 1], None), ([-6, 1], None), ([10, 1], None),
    ([2, 2, 1], None), ([-2, 0, 1], None), ([6, 4, 1], None), ([-2, 2, 1], None),
    ([2, 0, 0, 1], None), ([-2, 0, 0, 1], None), ([2, 2, 2, 1], None), ([6, 0, 2, 1], None),
    ([2, 0, 0, 0, 1], None), ([-2, 0, 0, 0, 0, 1], None), ([2, 0, 2, 0, 0, 1], None),
    ([-2, 0, 0, 0, 0, 0, 0, 1], None),
    ([-2, 1], [1, 1, 1]), ([[2, 0], [0, 0], [1, 0]], [1, 1, 1]),
    ([[0, 2], [0, 0], [1, 0]], [1, 1, 1]), ([-2, 1], [1, 1, 0, 1]),
    ([[2, 2], [2, 0], [1, 0]], [1, 1, 1]), ([-2, 0, 0, 1], [1, 1, 1]),
]


def field(desc, prec=None):
    eis, unr = desc
    return LocalField(eis, unr, prec=prec)


def digits(x, M):
    """The first M lambda-adic residue digits of x (v(x) >= 0)."""
    F = x.F
    lam_inv = None
    out = []
    for _ in range(M):
        r = 0 if x.is_zero() or x.valuation() > 0 else x.residue()
        out.append(r)
        x = x - F.lift_residue(r, x.N)
        if x.is_zero():
            out.extend([0] * (M - len(out)))
            break
        x = x * F.lambda_power(-1, x.N + 2)
    return tuple(out)


def unit_table(F):
    """Units and squares of O / lambda^(2e+1) as digit tuples."""
    M = 2 * F.e + 1
    q = 1 << F.f
    units, squares = set(), set()
    lam = F.gen()
    for ds in itertools.product(range(q), repeat=M):
        if ds[0] == 0:
            continue
        x = F.from_rational(0)
        for j, d in enumerate(ds):
            x = x + F.lift_residue(d) * lam ** j
        units.add(ds)
        squares.add(digits(x * x, M))
    return units, squares


@pytest.mark.parametrize("desc", DESCRIPTORS, ids=[str(i) for i in range(len(DESCRIPTORS))])
def test_dimension_is_degree_plus_two(desc):
    F = field(desc)
    assert sc_basis(F).dim == F.n + 2


SMALL = [d for d in DESCRIPTORS if field(d).f * (2 * field(d).e + 1) <= 12]


@pytest.mark.parametrize("desc", SMALL, ids=[str(i) for i in range(len(SMALL))])
def test_unit_square_classes_by_enumeration(desc):
    F = field(desc)
    units, squares = unit_table(F)
    # units / squares mod lambda^(2e+1) is O^x / O^x2 of order 2^(n+1)
    assert len(units) // len(squares) == 1 << (F.n + 1)
    basis = sc_basis(F)
    M = 2 * F.e + 1
    # every nontrivial unit class representative is a nonsquare mod lambda^(2e+1)
    for mask in range(2, 1 << basis.dim, 2):
        rep = SquareClass(basis, mask).representative()
        assert digits(rep, M) not in squares


def test_q2_classes():
    Q2 = LocalField.qp()
    cls = {r: sc_decompose(Q2(r)).bitstring() for r in (2, 3, 5, -1, 7, 17, Fraction(1, 8))}
    assert cls == {2: "100", 3: "010", 5: "001", -1: "011", 7: "011", 17: "000",
                   Fraction(1, 8): "100"}


def elements(F):
    coord = st.integers(-(1 << 16), 1 << 16)
    return st.builds(lambda cs, k: F.from_coords(cs) * F.gen() ** k,
                     st.lists(coord, min_size=F.n, max_size=F.n).filter(lambda c: c[0] % 2),
                     st.integers(0, 3))


FIELDS = [field(DESCRIPTORS[i]) for i in (0, 9, 13, 17)]


@pytest.mark.parametrize("F", FIELDS, ids=["q2", "cubic", "quintic", "unram"])
@settings(max_examples=300)
@given(data=st.data())
def test_square_class_is_a_homomorphism(F, data):
    x = data.draw(elements(F))
    y = data.draw(elements(F))
    assert sc_decompose(x * y) == sc_decompose(x) + sc_decompose(y)


@pytest.mark.parametrize("F", FIELDS[:3], ids=["q2", "cubic", "quintic"])
@settings(max_examples=50)
@given(data=st.data())
def test_class_representative_quotient_is_square(F, data):
    x = data.draw(elements(F))
    c = sc_decompose(x)
    q = x / c.representative()
    assert is_square(q)
    r = sc_sqrt(q)
    assert (r * r - q).is_zero()


def test_sqrt_rejects_nonsquare():
    F = field(DESCRIPTORS[9])
    with pytest.raises(NotASquare):
        sc_sqrt(F.one + F.gen())


def test_basis_fingerprint_is_stable():
    F = LocalField.pure(5)
    assert sc_basis(F).fingerprint() == sc_basis(LocalField.pure(5, 200)).fingerprint()
    assert sc_basis(F).describe()[-1].startswith("1+w*lambda^10")

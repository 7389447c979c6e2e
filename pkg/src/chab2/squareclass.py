"""Square classes of 2-adic local fields.

For a local field k of degree n over Q2 the group k^x / (k^x)^2 is an
F2-vector space of dimension n + 2.  The canonical basis used throughout is

    lambda,
    1 + Z^t lambda^i          for odd i < 2e and 0 <= t < f,
    1 + omega* lambda^(2e)    with omega* not of the form b^2 + eps*b,

where eps is the residue of the unit 2 / lambda^e.  Decomposition walks the
unit filtration U_1 > U_2 > ... > U_(2e+1) (everything in U_(2e+1) is a
square): odd levels contribute coordinates, even levels below 2e are removed
by multiplying with squares, level 2e is an Artin-Schreier test.
"""

import hashlib
import json

from .errors import NotASquare, PrecisionExhausted
from .fields import LocalElement


class SquareClassBasis:
    """The canonical F2-basis of k^x/(k^x)^2 for a fixed local field."""

    def __init__(self, F):
        self.F = F
        e, f = F.e, F.f
        self.labels = [("uniformizer",)]
        for i in range(1, 2 * e, 2):
            for t in range(f):
                self.labels.append(("level", i, t))
        self.labels.append(("top", 2 * e, F.omega_star()))
        self.dim = len(self.labels)
        assert self.dim == F.n + 2

    def index(self, level, t=0):
        return 1 + ((level - 1) // 2) * self.F.f + t

    def element(self, idx, prec=None):
        F = self.F
        N = F.prec if prec is None else prec
        lab = self.labels[idx]
        if lab[0] == "uniformizer":
            return F.gen(N)
        if lab[0] == "level":
            _, i, t = lab
            return F.from_rational(1, N) + F.lift_residue(1 << t, N) * F.lambda_power(i, N)
        return F.from_rational(1, N) + F.lift_residue(lab[2], N) * F.lambda_power(2 * F.e, N)

    def describe(self):
        out = []
        for lab in self.labels:
            if lab[0] == "uniformizer":
                out.append("lambda")
            elif lab[0] == "level":
                out.append("1+Z^%d*lambda^%d" % (lab[2], lab[1]))
            else:
                out.append("1+w*lambda^%d (w=%d)" % (lab[1], lab[2]))
        return out

    def fingerprint(self):
        blob = json.dumps({"field": self.F.descriptor(), "basis": self.describe()},
                          sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


_BASES = {}


def sc_basis(F):
    key = (F.U, F.E)
    if key not in _BASES:
        _BASES[key] = SquareClassBasis(F)
    return _BASES[key]


class SquareClass:
    """An element of k^x/(k^x)^2, stored as a bitmask over the canonical basis."""

    __slots__ = ("basis", "bits")

    def __init__(self, basis, bits):
        self.basis, self.bits = basis, bits

    @classmethod
    def from_vector(cls, basis, vec):
        bits = 0
        for i, b in enumerate(vec):
            if b & 1:
                bits |= 1 << i
        return cls(basis, bits)

    def vector(self):
        return [(self.bits >> i) & 1 for i in range(self.basis.dim)]

    def bitstring(self):
        return "".join(str(b) for b in self.vector())

    def is_trivial(self):
        return self.bits == 0

    def __add__(self, other):
        return SquareClass(self.basis, self.bits ^ other.bits)

    def __eq__(self, other):
        return isinstance(other, SquareClass) and self.bits == other.bits and \
            self.basis.F.same_field(other.basis.F)

    def __hash__(self):
        return hash(self.bits)

    def representative(self, prec=None):
        F = self.basis.F
        x = F.from_rational(1, prec)
        for i in range(self.basis.dim):
            if (self.bits >> i) & 1:
                x = x * self.basis.element(i, prec)
        return x

    def __repr__(self):
        return "SquareClass(%s)" % self.bitstring()


def _strip(x, want_root):
    """Walk the unit filtration of x.

    Returns ``(coords, root, rest)`` with ``x = prod(basis^coords) * root^2 *
    rest`` and ``rest`` in U_(2e+1).  When ``want_root`` is set, a nonzero odd
    coordinate raises NotASquare instead of being recorded.
    """
    F = x.F
    e = F.e
    basis = sc_basis(F)
    v = x.valuation()
    if x.N - v < 2 * e + 1:
        raise PrecisionExhausted("need relative precision %d, have %d" % (2 * e + 1, x.N - v))
    coords = [0] * basis.dim
    if v & 1:
        if want_root:
            raise NotASquare("odd valuation")
        coords[0] = 1
    relN = x.N - v
    u = x * F.lambda_power(-v, x.N + 2 * abs(v) + 2)
    u = u.truncate(relN)
    one = F.from_rational(1, relN + 2 * e)
    root = F.lambda_power(v // 2, relN + v + 2) if want_root else None
    w = u.residue()
    if w != 1:
        s = F.lift_residue(F.rf_sqrt(w), relN)
        u = u / (s * s)
        if want_root:
            root = root * s
    for j in range(1, 2 * e + 1):
        d = u - one
        if d.is_zero():
            break
        vd = d.valuation()
        if vd > j:
            continue
        assert vd == j, "filtration walk out of step"
        a = (d * F.lambda_power(-j, d.N + 2 * j + 2)).residue()
        lam_j = F.lambda_power(j, relN + 2)
        if j == 2 * e:
            b = F.artin_schreier_root(a)
            if b is None:
                if want_root:
                    raise NotASquare("level %d obstruction" % j)
                coords[-1] = 1
                ostar = F.omega_star()
                u = u / (one + F.lift_residue(ostar, relN) * lam_j)
                b = F.artin_schreier_root(a ^ ostar)
            s = one + F.lift_residue(b, relN) * F.lambda_power(e, relN + 2)
            u = u / (s * s)
            if want_root:
                root = root * s
        elif j & 1:
            if want_root:
                raise NotASquare("level %d obstruction" % j)
            for t in range(F.f):
                if (a >> t) & 1:
                    coords[basis.index(j, t)] = 1
                    u = u / (one + F.lift_residue(1 << t, relN) * lam_j)
        else:
            b = F.rf_sqrt(a)
            s = one + F.lift_residue(b, relN) * F.lambda_power(j // 2, relN + 2)
            u = u / (s * s)
            if want_root:
                root = root * s
    return coords, root, u


def sc_decompose(x):
    """Square class of a nonzero local element in the canonical basis."""
    coords, _, _ = _strip(x, want_root=False)
    return SquareClass.from_vector(sc_basis(x.F), coords)


def _newton_sqrt_high(u):
    """Square root of u in U_(2e+1), the root congruent to 1."""
    F = u.F
    e = F.e
    N = u.N
    steps = 0
    gap = 2 * e + 1 - e
    while gap < N + e:
        gap = 2 * gap - e
        steps += 1
    work = N + e * (steps + 4)
    ue = LocalElement(F, u.c, u.k, work)
    r = F.from_rational(1, work)
    for _ in range(steps + 2):
        r = (r + ue / r) * F.from_rational(1, work) / F.from_rational(2, work + 2 * e)
        r = LocalElement(F, r.c, r.k, work)
    return r.truncate(N - e)


def sc_sqrt(x):
    """A square root of x (raises NotASquare)."""
    coords, root, rest = _strip(x, want_root=True)
    return root * _newton_sqrt_high(rest)


def is_square(x):
    return sc_decompose(x).is_trivial()

"""Hyperelliptic curves y^2 = f(x) of odd degree and their Jacobians.

Points of the Jacobian are Mumford pairs ``[a, b]``: a monic, deg b < deg a,
``a | f - b^2``.  Cantor's algorithm is written once, generically over the
coefficient field of the polynomials (QQ, GF(q), Q2).

A curve ``twist * y^2 = f0`` is modelled internally as ``Y^2 = twist * f0``
with ``Y = twist * y``; all Jacobian and etale-algebra computations use the
model polynomial ``f = twist * f0``.
"""

from fractions import Fraction

from .errors import InputError, NotASquare
from .fields import QQ, LocalElement, LocalField, to_fraction
from .poly import Poly
from .squareclass import sc_sqrt


class Curve:
    """``twist * y^2 = f0(x)`` with f0 squarefree of odd degree 2g+1 over Q."""

    def __init__(self, f0, twist=1):
        f0 = f0 if isinstance(f0, Poly) else Poly(QQ, [to_fraction(c) for c in f0])
        twist = to_fraction(twist)
        if twist == 0:
            raise InputError("twist must be nonzero")
        if f0.degree() < 3 or f0.degree() % 2 == 0:
            raise InputError("f must have odd degree at least 3")
        if f0.gcd(f0.deriv()).degree() > 0:
            raise InputError("f must be squarefree")
        self.f0 = f0
        self.twist = twist
        self.f = f0 * twist
        self.genus = (f0.degree() - 1) // 2

    def model_over(self, K):
        return self.f.map(K)

    def to_model_y(self, y):
        return y * self.twist

    def from_model_y(self, Y):
        return Y / self.twist

    def is_on_curve(self, P):
        """For a rational point given in curve coordinates (x, y)."""
        if P.is_infinity():
            return True
        return self.twist * P.y ** 2 == self.f0.eval(P.x)

    def describe(self):
        return {"f": [str(c) for c in self.f0.c], "twist": str(self.twist)}


class CurvePoint:
    """A point on the model Y^2 = f: ``x, Y`` or the point at infinity."""

    __slots__ = ("x", "y")

    def __init__(self, x=None, y=None):
        self.x, self.y = x, y

    @classmethod
    def infinity(cls):
        return cls(None, None)

    def is_infinity(self):
        return self.x is None

    def __repr__(self):
        return "inf" if self.is_infinity() else "(%s, %s)" % (self.x, self.y)

    def key(self):
        return ("inf",) if self.is_infinity() else (str(self.x), str(self.y))


class MumfordPoint:
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    @property
    def F(self):
        return self.a.F

    def is_zero(self):
        return self.a.degree() == 0

    def key(self):
        return (self.a.key(), self.b.key())

    def __repr__(self):
        return "[%r, %r]" % (self.a, self.b)


def _div(num, den):
    """Exact quotient; over local fields the remainder is only apparently zero."""
    if isinstance(num.F, LocalField):
        return num.divmod(den)[0]
    return num.exact_div(den)


class Jacobian:
    """Group law on J for the model Y^2 = f over a coefficient field."""

    def __init__(self, f):
        self.f = f
        self.F = f.F
        self.genus = (f.degree() - 1) // 2

    def zero(self):
        return MumfordPoint(Poly(self.F, [self.F.one]), Poly(self.F, []))

    def point(self, a, b):
        P = MumfordPoint(a.monic(), b % a.monic())
        return P

    def is_valid(self, P):
        a, b = P.a, P.b
        if a.degree() > self.genus or b.degree() >= max(a.degree(), 1) and a.degree() > 0:
            return False
        return ((self.f - b * b) % a).is_zero()

    def reduce(self, a, b):
        """Reduce a (relaxed) pair with a | f - b^2 to Mumford form."""
        f, g = self.f, self.genus
        a = a.monic()
        b = b % a
        while a.degree() > g:
            a = _div(f - b * b, a).monic()
            b = (-b) % a
        return MumfordPoint(a, b)

    def neg(self, P):
        return MumfordPoint(P.a, -P.b)

    def add(self, P, Q):
        if P.is_zero():
            return Q
        if Q.is_zero():
            return P
        a1, b1, a2, b2 = P.a, P.b, Q.a, Q.b
        d0, e1, e2 = a1.xgcd(a2)
        if d0.degree() == 0:
            a = a1 * a2
            b = (e1 * a1 * b2 + e2 * a2 * b1) % a
            return self.reduce(a, b)
        d, c1, c2 = d0.xgcd(b1 + b2)
        s1, s2, s3 = c1 * e1, c1 * e2, c2
        a = _div(a1 * a2, d * d)
        b = _div(s1 * a1 * b2 + s2 * a2 * b1 + s3 * (b1 * b2 + self.f), d)
        if a.degree() == 0:
            return self.zero()
        return self.reduce(a, b % a.monic())

    def double(self, P):
        return self.add(P, P)

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))

    def mul(self, n, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = self.zero()
        while n:
            if n & 1:
                R = self.add(R, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return R

    def equal(self, P, Q):
        return (P.a - Q.a).is_zero() and (P.b - Q.b).is_zero()

    def from_point(self, P):
        """[P - infinity]."""
        F = self.F
        if P.is_infinity():
            return self.zero()
        return MumfordPoint(Poly(F, [F.neg(P.x), F.one]), Poly(F, [P.y]))

    def embed_point(self, P, base):
        """The divisor class [P - base]."""
        if base.is_infinity():
            return self.from_point(P)
        F = self.F
        if P.is_infinity():
            return MumfordPoint(Poly(F, [F.neg(base.x), F.one]), Poly(F, [F.neg(base.y)]))
        dx = F.sub(P.x, base.x)
        if F.is_zero(dx):
            if F.is_zero(F.add(P.y, base.y)):
                return self.double(self.from_point(P))
            return self.zero()
        # interpolate b(x_P) = y_P, b(x_B) = -y_B
        slope = F.div(F.add(P.y, base.y), dx)
        b = Poly(F, [F.sub(P.y, F.mul(slope, P.x)), slope])
        a = Poly(F, [F.neg(P.x), F.one]) * Poly(F, [F.neg(base.x), F.one])
        return MumfordPoint(a, b)

    def rerepresent(self, P, h):
        """The relaxed pair [(f - (b + h a)^2)/a, -(b + h a)] for the same class.

        Used to move the support of a divisor away from the Weierstrass
        points before halving.
        """
        F = self.F
        a, b = P.a, P.b
        hb = b + a * h
        c = (self.f - hb * hb).divmod(a)[0]
        return c.monic(), (-hb) % c.monic()


# --------------------------------------------------------------------------
# good reduction witnesses and residue disks


def _poly_int(coeffs):
    out = []
    for c in coeffs:
        fr = to_fraction(c)
        if fr.denominator != 1:
            raise InputError("witness polynomials must have integer coefficients")
        out.append(int(fr))
    return out


def _f2_poly(coeffs):
    bits = 0
    for i, c in enumerate(coeffs):
        bits |= (c & 1) << i
    return bits


def _f2_deg(a):
    return a.bit_length() - 1


def _f2_mul(a, b):
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _f2_mod(a, m):
    dm = _f2_deg(m)
    while a and _f2_deg(a) >= dm:
        a ^= m << (_f2_deg(a) - dm)
    return a


def _f2_gcd(a, b):
    while b:
        a, b = b, _f2_mod(a, b)
    return a


def _f2_deriv(a):
    r = 0
    i = 1
    while (a >> i):
        if i & 1 and (a >> i) & 1:
            r |= 1 << (i - 1)
        i += 1
    return r


def _f2_eval(a, x):
    if x == 0:
        return a & 1
    return bin(a).count("1") & 1


class GoodReduction:
    """Witness f = h^2 + 4k for good reduction of Y^2 = f at 2.

    Substituting Y = h(x) + 2Y' gives the model Y'^2 + h Y' = k whose
    reduction mod 2 must be smooth of genus g.
    """

    def __init__(self, curve, h, k):
        self.curve = curve
        self.h = _poly_int(h)
        self.k = _poly_int(k)
        g = curve.genus
        f = curve.f
        for c in f.c:
            if c.denominator != 1:
                raise InputError("model polynomial must be integral for the witness")
        hp = Poly(QQ, self.h)
        kp = Poly(QQ, self.k)
        if not (hp * hp + kp * 4 - f).is_zero():
            raise InputError("witness does not satisfy f = h^2 + 4k")
        if hp.degree() > g:
            raise InputError("witness h has degree above the genus")
        hb, kb = _f2_poly(self.h), _f2_poly(self.k)
        if _f2_deg(kb) != 2 * g + 1:
            raise InputError("reduction of k must have degree 2g+1")
        crit = _f2_mul(_f2_mul(_f2_deriv(hb), _f2_deriv(hb)), kb) ^ _f2_mul(_f2_deriv(kb), _f2_deriv(kb))
        if hb == 0:
            raise InputError("reduction is inseparable (h = 0 mod 2)")
        if _f2_deg(_f2_gcd(hb, crit)) > 0:
            raise InputError("reduction mod 2 is singular")
        self.hbar, self.kbar = hb, kb

    def reduced_points(self):
        """Affine F2-points (x, Y') of Y'^2 + h Y' = k, plus 'inf'."""
        pts = []
        for x in (0, 1):
            hx, kx = _f2_eval(self.hbar, x), _f2_eval(self.kbar, x)
            for y in (0, 1):
                if (y * y + hx * y + kx) % 2 == 0:
                    pts.append((x, y))
        pts.append("inf")
        return pts

    def disks(self):
        out = []
        for pt in self.reduced_points():
            if pt == "inf":
                out.append(ResidueDisk.infinity(self))
            else:
                out.append(ResidueDisk.affine(self, pt[0], pt[1]))
        return out

    def h_at(self, x):
        acc = 0
        for c in reversed(self.h):
            acc = acc * x + c
        return acc


def _squarefree_part(n):
    """Sign times the squarefree part of a nonzero rational."""
    fr = to_fraction(n)
    num, den = fr.numerator * fr.denominator, 1
    sign = -1 if num < 0 else 1
    num = abs(num)
    out = 1
    p = 2
    while p * p <= num:
        e = 0
        while num % p == 0:
            num //= p
            e += 1
        if e & 1:
            out *= p
        p += 1
    out *= num
    return sign * out


class ResidueDisk:
    """A residue disk (or a sub-disk) of the model Y^2 = f over Q2.

    Affine disks are parametrized by ``x = x0 + t``; the disk at infinity by
    ``x = kappa / t^2`` with ``kappa * c`` a rational square.  The parameter
    t ranges over ``2^depth Z2``; a Y-branch is fixed by the reduction data.
    """

    def __init__(self, witness, kind, x0, ybar, depth, label):
        self.witness = witness
        self.curve = witness.curve
        self.kind = kind
        self.x0 = Fraction(x0) if x0 is not None else None
        self.ybar = ybar
        self.depth = depth
        self.label = label
        if kind == "inf":
            c = self.curve.f.lc()
            self.kappa = Fraction(_squarefree_part(c))
            lead = c * self.kappa ** (2 * self.curve.genus + 1)
            r = _rational_sqrt(lead)
            if r is None:
                raise InputError("c * kappa^(2g+1) is not a rational square")
            self.R0 = r
        else:
            if _f2_eval(witness.hbar, int(self.x0) % 2) == 0:
                raise InputError("x is not a parameter on the disk at x = %s" % self.x0)

    @classmethod
    def affine(cls, witness, x0, ybar):
        return cls(witness, "affine", x0, ybar, 1, "(%d,%d)" % (x0, ybar))

    @classmethod
    def infinity(cls, witness):
        return cls(witness, "inf", None, None, 1, "inf")

    def subdisk(self, shift, depth, label=None):
        """The sub-disk t in shift + 2^depth Z2, re-centred (affine disks only)."""
        if self.kind == "inf":
            if shift != 0:
                raise InputError("the disk at infinity can only be refined around its centre")
            d = ResidueDisk(self.witness, "inf", None, None, depth, label or self.label)
            return d
        d = ResidueDisk(self.witness, "affine", self.x0 + shift, self.ybar, depth,
                        label or "%s+%s" % (self.label, shift))
        return d

    def weierstrass_odd(self):
        """True when the centre is Weierstrass and phi(-t) = iota(phi(t))."""
        return self.kind == "inf"

    def contains_rational(self, P):
        """Whether a rational point of the model lies in this (sub-)disk."""
        if self.kind == "inf":
            if P.is_infinity():
                return True
            if P.x.numerator == 0:
                return False
            t2 = self.kappa / P.x
            r = _rational_sqrt(t2)
            if r is None:
                return False
            return _v2q(r) >= self.depth
        if P.is_infinity():
            return False
        dx = P.x - self.x0
        if dx != 0 and _v2q(dx) < self.depth:
            return False
        hx = self.witness.h_at(P.x)
        yp = (P.y - hx) / 2
        if yp.denominator % 2 == 0:
            return False
        return (yp.numerator * pow(yp.denominator, -1, 2)) % 2 == self.ybar

    def param_of(self, P):
        """Parameter t of a rational point in the disk."""
        if self.kind == "inf":
            if P.is_infinity():
                return Fraction(0)
            r = _rational_sqrt(self.kappa / P.x)
            # choose the sign matching the Y-branch
            Q2 = LocalField.qp(64)
            cand = self.point(r, Q2)
            if (cand.y - Q2(P.y)).is_zero():
                return r
            return -r
        return P.x - self.x0

    def center(self, Q2):
        return self.point(Fraction(0), Q2)

    def point(self, t, Q2):
        """phi(t) as a CurvePoint over Q2 (t rational)."""
        t = to_fraction(t)
        f = self.curve.f
        if self.kind == "inf":
            if t == 0:
                return CurvePoint.infinity()
            g = self.curve.genus
            n = 2 * g + 1
            x = self.kappa / (t * t)
            # R(t)^2 = t^(2n) f(kappa/t^2), R(0) = R0
            R2 = Fraction(0)
            for i, c in enumerate(f.c):
                R2 += c * self.kappa ** i * t ** (2 * n - 2 * i)
            ratio = Q2(R2 / (self.R0 * self.R0))
            if not _is_one_mod(ratio - Q2(1), 3):
                raise InputError("t = %s is outside the disk at infinity" % t)
            r = sc_sqrt(ratio)
            # branch: the root congruent to 1 mod 4
            if not _is_one_mod(r - Q2(1), 2):
                r = -r
            R = r * Q2(self.R0)
            Y = R / Q2(t ** n)
            return CurvePoint(Q2(x), Y)
        x = self.x0 + t
        fx = f.eval(x)
        Y = sc_sqrt(Q2(fx))
        hx = self.witness.h_at(x)
        yp = (Y - Q2(hx)) * Q2(Fraction(1, 2))
        if not yp.is_zero() and yp.valuation() < 0:
            raise InputError("point is not integral on the reduction model")
        bit = 0 if yp.is_zero() or yp.valuation() > 0 else 1
        if bit != self.ybar:
            Y = -Y
        return CurvePoint(Q2(x), Y)

    def describe(self):
        d = {"label": self.label, "kind": self.kind, "depth": self.depth}
        if self.kind == "affine":
            d["x0"] = str(self.x0)
            d["ybar"] = self.ybar
        else:
            d["kappa"] = str(self.kappa)
        return d


def _is_one_mod(d, k):
    return d.is_zero() or d.valuation() >= k


def _v2q(r):
    r = to_fraction(r)
    if r == 0:
        return 10 ** 9
    n, d = r.numerator, r.denominator
    return ((n & -n).bit_length() - 1) - ((d & -d).bit_length() - 1)


def _isqrt_exact(n):
    if n < 0:
        return None
    import math
    r = math.isqrt(n)
    return r if r * r == n else None


def _rational_sqrt(r):
    r = to_fraction(r)
    a, b = _isqrt_exact(r.numerator), _isqrt_exact(r.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def parse_point(item):
    """A rational point from JSON: ``"inf"`` or ``[x, y]`` (curve coordinates)."""
    if item == "inf" or item == ["inf"]:
        return CurvePoint.infinity()
    return CurvePoint(to_fraction(item[0]), to_fraction(item[1]))


def model_point(curve, P):
    """Curve point (x, y) -> model point (x, twist * y)."""
    if P.is_infinity():
        return P
    return CurvePoint(P.x, P.y * curve.twist)


def on_model(curve, P):
    if P.is_infinity():
        return True
    return P.y * P.y == curve.f.eval(P.x)


def point_to_field(P, K):
    if P.is_infinity():
        return P
    return CurvePoint(K(P.x), K(P.y))


def power_series_param(disk, order):
    """Truncated power series (x(t), Y(t)) of an affine disk, rational coefficients.

    Only for disks whose centre has a rational nonzero Y-coordinate; used by
    the parametrisation consistency checks.
    """
    if disk.kind != "affine":
        raise InputError("power series only for affine disks")
    f = disk.curve.f
    x0 = disk.x0
    shifted = f.compose(Poly(QQ, [x0, Fraction(1)]))
    c = [shifted[i] for i in range(order)]
    y0 = _rational_sqrt(c[0])
    if y0 is None:
        raise InputError("centre has irrational Y")
    # fix the sign by the branch
    hx = disk.witness.h_at(x0)
    yp = (y0 - hx) / 2
    if (yp.numerator * pow(yp.denominator, -1, 2)) % 2 != disk.ybar:
        y0 = -y0
    y = [Fraction(0)] * order
    y[0] = y0
    for n in range(1, order):
        acc = c[n]
        for i in range(1, n):
            acc -= y[i] * y[n - i]
        y[n] = acc / (2 * y0)
    return Poly(QQ, [x0, Fraction(1)]), Poly(QQ, y)

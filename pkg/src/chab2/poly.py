"""Dense univariate polynomials over any of the coefficient fields."""

from .errors import DivisionByApparentZero, InputError, NotDivisible


class Poly:
    """Immutable polynomial; ``c`` holds coefficients in ascending order.

    Trailing coefficients that are zero (apparent zero for local fields) are
    stripped, so ``degree`` is that of the first nonzero coefficient from the
    top.  The zero polynomial has degree -1.
    """

    __slots__ = ("F", "c")

    def __init__(self, F, coeffs):
        c = [x if _is_elem(F, x) else F(x) for x in coeffs]
        while c and F.is_zero(c[-1]):
            c.pop()
        self.F = F
        self.c = tuple(c)

    @classmethod
    def _raw(cls, F, c):
        p = cls.__new__(cls)
        c = list(c)
        while c and F.is_zero(c[-1]):
            c.pop()
        p.F, p.c = F, tuple(c)
        return p

    @classmethod
    def x(cls, F):
        return cls(F, [F.zero, F.one])

    @classmethod
    def const(cls, F, a):
        return cls(F, [a])

    @classmethod
    def monomial(cls, F, n, a=None):
        return cls(F, [F.zero] * n + [F.one if a is None else a])

    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lc(self):
        if not self.c:
            raise DivisionByApparentZero("zero polynomial has no leading coefficient")
        return self.c[-1]

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.F.zero

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly(self.F, [other])

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self.coerce(other)
        F = self.F
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return Poly._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.F, [self.F.neg(x) for x in self.c])

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        F = self.F
        if not isinstance(other, Poly):
            s = other if _is_elem(F, other) else F(other)
            return Poly._raw(F, [F.mul(x, s) for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw(F, [])
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly._raw(F, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = Poly(self.F, [self.F.one])
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def scale(self, s):
        return self * s

    def divmod(self, other):
        """Quotient and remainder; the remainder has degree < deg(other).

        The loop runs over positions, never over detected degrees, so the
        remainder length is exact even for local coefficients.
        """
        F = self.F
        if other.is_zero():
            raise DivisionByApparentZero("polynomial division by zero")
        db = other.degree()
        inv_lc = F.inv(other.lc())
        r = list(self.c)
        if len(r) - 1 < db:
            return Poly._raw(F, []), self
        q = [F.zero] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            t = F.mul(r[i + db], inv_lc)
            q[i] = t
            if F.is_zero(t):
                r[i + db] = F.zero
                continue
            for j in range(db):
                r[i + j] = F.sub(r[i + j], F.mul(t, other.c[j]))
            r[i + db] = F.zero
        return Poly._raw(F, q), Poly._raw(F, r[:db])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise NotDivisible("division leaves a nonzero remainder")
        return q

    def monic(self):
        return self * self.F.inv(self.lc())

    def __call__(self, x):
        """Evaluate at x, which may live in a larger ring (e.g. a local field)."""
        from .fields import LocalElement
        r = None
        for a in reversed(self.c):
            r = a if r is None else r * x + a
        if r is None:
            r = self.F.zero
        if isinstance(x, LocalElement) and not isinstance(r, LocalElement):
            r = x.F(r)
        return r

    def eval(self, x):
        F = self.F
        r = F.zero
        for a in reversed(self.c):
            r = F.add(F.mul(r, x), a)
        return r

    def deriv(self):
        F = self.F
        return Poly._raw(F, [F.mul(F(i), self.c[i]) for i in range(1, len(self.c))])

    def compose(self, other):
        r = Poly(self.F, [])
        for a in reversed(self.c):
            r = r * other + Poly._raw(self.F, [a])
        return r

    def map(self, G, fn=None):
        """The same polynomial with coefficients pushed into the field G."""
        return Poly(G, [fn(x) if fn else G(x) for x in self.c])

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self.coerce(other)
        return (self - other).is_zero()

    __hash__ = None

    def key(self):
        """Hashable key (exact fields only)."""
        return tuple(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, a in enumerate(self.c):
            if self.F.is_zero(a):
                continue
            terms.append("%s*x^%d" % (a, i) if i else "%s" % (a,))
        return " + ".join(reversed(terms))

    # -- Euclid ----------------------------------------------------------
    def _strip_decided(self):
        """Drop leading coefficients judged zero by ``decide_zero``."""
        c = list(self.c)
        while c and self.F.decide_zero(c[-1]):
            c.pop()
        return Poly._raw(self.F, c)

    def gcd(self, other):
        """Monic gcd (zero-tests go through ``decide_zero``)."""
        a, b = self._strip_decided(), other._strip_decided()
        while not b.is_zero():
            a, b = b, (a % b)._strip_decided()
        if a.is_zero():
            return a
        return a.monic()

    def xgcd(self, other):
        """(g, s, t) with g = s*self + t*other and g monic."""
        F = self.F
        r0, r1 = self._strip_decided(), other._strip_decided()
        s0, s1 = Poly(F, [F.one]), Poly(F, [])
        t0, t1 = Poly(F, []), Poly(F, [F.one])
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r = r._strip_decided()
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = F.inv(r0.lc())
        return r0 * inv, s0 * inv, t0 * inv

    def resultant(self, other):
        """Res(self, other) by the Euclidean recursion (exact fields only)."""
        F = self.F
        a, b = self, other
        if a.is_zero() or b.is_zero():
            return F.zero
        res = F.one
        while b.degree() > 0:
            da, db = a.degree(), b.degree()
            r = a % b
            if r.is_zero():
                return F.zero
            # Res(a, b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
            if (da * db) & 1:
                res = F.neg(res)
            res = F.mul(res, F.pow(b.lc(), da - r.degree()))
            a, b = b, r
        return F.mul(res, F.pow(b.lc(), a.degree()))

    def powmod(self, n, m):
        r = Poly(self.F, [self.F.one]) % m
        base = self % m
        while n:
            if n & 1:
                r = (r * base) % m
            base = (base * base) % m
            n >>= 1
        return r


def _is_elem(F, x):
    """Whether x can be used as a coefficient of F without coercion.

    Finite-field elements are plain ints, so they are never coerced here;
    callers build integer constants with ``F(n)``.
    """
    from .fields import FiniteField, LocalElement, LocalField
    if isinstance(F, LocalField):
        return isinstance(x, LocalElement) and x.F.same_field(F)
    if isinstance(F, FiniteField):
        return True
    return False


def poly_from_values(F, coeffs):
    """Polynomial from ints / Fractions / strings, coerced through ``F``."""
    return Poly(F, [F(c) for c in coeffs])


def crt_pair(r1, m1, r2, m2):
    """x with x = r1 mod m1, x = r2 mod m2 (m1, m2 coprime)."""
    g, s, t = m1.xgcd(m2)
    if g.degree() != 0:
        raise InputError("CRT moduli are not coprime")
    x = r1 * t * m2 + r2 * s * m1
    return x % (m1 * m2)


def squarefree_decomposition(a):
    """Yun's algorithm: list of (factor, multiplicity) for a monic polynomial.

    Valid over fields of characteristic 0 or larger than deg(a).
    """
    F = a.F
    out = []
    b = a.deriv()
    c = a.gcd(b)
    w = a.exact_div(c) if c.degree() > 0 else a
    y = b.exact_div(c) if c.degree() > 0 else b
    i = 1
    while w.degree() > 0:
        z = y - w.deriv()
        g = w.gcd(z) if not z.is_zero() else w.monic()
        if g.degree() > 0:
            out.append((g, i))
        w = w.exact_div(g)
        y = z.exact_div(g) if not z.is_zero() else z
        i += 1
    return out

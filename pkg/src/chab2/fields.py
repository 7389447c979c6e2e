"""Coefficient fields: the rationals, finite fields and 2-adic local fields.

All three expose the same small duck-typed interface used by the generic
polynomial and Jacobian code:

    F(x)            coerce an int / Fraction / decimal string
    F.zero, F.one
    F.add, F.sub, F.neg, F.mul, F.inv, F.div, F.pow
    F.is_zero(x)    exact test (apparent zero for local fields)
    F.decide_zero(x)  like is_zero but raises IllConditioned when the
                      answer is inside the ambiguity band (local only)

Local fields are towers ``Q2 -> unramified (degree f) -> Eisenstein (degree
e)``.  Elements use an absolute precision model: an element is known modulo
``lambda^N`` where ``lambda`` is the uniformizer.
"""

from fractions import Fraction
import hashlib
import json

from .errors import (ApparentZero, DivisionByApparentZero, IllConditioned,
                     InputError, PrecisionExhausted)


def v2(n):
    """2-adic valuation of a nonzero integer."""
    return (n & -n).bit_length() - 1


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError("cannot read %r as a rational number" % (x,))


class RationalField:
    """The field Q with ``fractions.Fraction`` elements."""

    characteristic = 0
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        return to_fraction(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByApparentZero("division by zero in QQ")
        return 1 / a

    def div(self, a, b):
        return a * self.inv(b)

    def pow(self, a, n):
        return a ** n

    def is_zero(self, a):
        return a == 0

    decide_zero = is_zero

    def eq(self, a, b):
        return a == b


QQ = RationalField()


def _prime_power(q):
    if q < 2:
        raise InputError("field size must be at least 2")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise InputError("%d is not a prime power" % q)
    return p, k


def _fp_poly_irreducible(m, p):
    """Brute-force irreducibility of a monic polynomial over F_p (small degree)."""
    d = len(m) - 1
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for idx in range(p ** deg):
            cand = [(idx // p ** t) % p for t in range(deg)] + [1]
            r = list(m)
            for s in range(d - deg, -1, -1):
                t = r[s + deg] % p
                if t:
                    for u in range(deg + 1):
                        r[s + u] = (r[s + u] - t * cand[u]) % p
            if all(x % p == 0 for x in r[:deg]):
                return False
    return True


class FiniteField:
    """GF(q).  Elements are ints in ``range(q)``.

    For q = p^k with k > 1 an element encodes the polynomial
    ``sum d_t z^t`` through its base-p digits, reduced modulo ``modulus``.
    """

    def __init__(self, q, modulus=None):
        p, k = _prime_power(q)
        self.q, self.p, self.degree = q, p, k
        self.characteristic = p
        self.zero, self.one = 0, 1
        self.name = "GF(%d)" % q
        if k == 1:
            self.modulus = None
            self._mul = self._add = None
        else:
            if modulus is None:
                modulus = self._first_irreducible(p, k)
            if len(modulus) != k + 1 or modulus[-1] != 1 or not _fp_poly_irreducible(modulus, p):
                raise InputError("modulus %r does not define GF(%d)" % (modulus, q))
            self.modulus = tuple(modulus)
            self._build_tables()
        self._squares = {}
        for x in range(1, q):
            self._squares.setdefault(self.mul(x, x), x)

    @staticmethod
    def _first_irreducible(p, k):
        for idx in range(p ** k):
            cand = [(idx // p ** t) % p for t in range(k)] + [1]
            if cand[0] and _fp_poly_irreducible(cand, p):
                return cand
        raise InputError("no irreducible polynomial found")

    def _digits(self, x):
        return [(x // self.p ** t) % self.p for t in range(self.degree)]

    def _undigits(self, d):
        return sum((c % self.p) * self.p ** t for t, c in enumerate(d))

    def _build_tables(self):
        q, p, k = self.q, self.p, self.degree
        digits = [self._digits(x) for x in range(q)]
        self._add = [[self._undigits([a + b for a, b in zip(digits[x], digits[y])])
                      for y in range(q)] for x in range(q)]
        self._neg = [self._undigits([-a for a in digits[x]]) for x in range(q)]
        mul = [[0] * q for _ in range(q)]
        m = self.modulus
        for x in range(q):
            for y in range(x, q):
                prod = [0] * (2 * k - 1)
                for i, a in enumerate(digits[x]):
                    for j, b in enumerate(digits[y]):
                        prod[i + j] += a * b
                for s in range(2 * k - 2, k - 1, -1):
                    t = prod[s]
                    if t:
                        for u in range(k + 1):
                            prod[s - k + u] -= t * m[u]
                val = self._undigits(prod[:k])
                mul[x][y] = mul[y][x] = val
        self._mul = mul
        self._inv = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if mul[x][y] == 1:
                    self._inv[x] = y
                    break

    def __call__(self, x):
        if isinstance(x, int):
            return self.from_int(x)
        fr = to_fraction(x)
        return self.div(self.from_int(fr.numerator), self.from_int(fr.denominator))

    def from_int(self, n):
        return n % self.p

    def element(self, index):
        """The field element with the given integer encoding."""
        if not 0 <= index < self.q:
            raise ValueError("index out of range")
        return index

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and other.q == self.q
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __repr__(self):
        return self.name

    def add(self, a, b):
        if self._add is None:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a):
        if self._add is None:
            return -a % self.p
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul is None:
            return a * b % self.p
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise DivisionByApparentZero("division by zero in %s" % self.name)
        if self._mul is None:
            return pow(a, -1, self.p)
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def is_zero(self, a):
        return a == 0

    decide_zero = is_zero

    def eq(self, a, b):
        return a == b

    def chi(self, a):
        """Quadratic character: 0, 1 or -1."""
        if a == 0:
            return 0
        return 1 if a in self._squares else -1

    def sqrt(self, a):
        if a == 0:
            return 0
        try:
            return self._squares[a]
        except KeyError:
            from .errors import NotASquare
            raise NotASquare("%r is not a square in %s" % (a, self.name))


# --------------------------------------------------------------------------
# 2-adic local fields


def _f2_mulmod(a, b, m):
    """Multiply bitmask polynomials over F2 modulo m (m has its top bit set)."""
    dm = m.bit_length() - 1
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> dm & 1:
            a ^= m
    return r


def _f2_irreducible(m):
    d = m.bit_length() - 1
    for cand in range(2, 1 << (d // 2 + 1)):
        if cand.bit_length() - 1 > d // 2:
            break
        r = m
        dc = cand.bit_length() - 1
        while r and r.bit_length() - 1 >= dc:
            r ^= cand << (r.bit_length() - 1 - dc)
        if r == 0:
            return False
    return True


def _ceil_div(a, b):
    return -((-a) // b)


class LocalField:
    """A finite extension of Q2 given as an Eisenstein-over-unramified tower.

    ``unramified`` is the monic integer polynomial U (ascending coefficients)
    of degree f, irreducible mod 2; ``eisenstein`` is the monic polynomial
    E(Lambda) of degree e whose coefficients are elements of Z2[Z]/U, given
    either as ints or as lists of f ints.  ``prec`` is the default absolute
    precision in units of the uniformizer; it defaults to ``12e + 24``.
    """

    def __init__(self, eisenstein, unramified=None, prec=None, zero_band=None):
        if unramified is None:
            unramified = [0, 1]
        U = [int(c) for c in unramified]
        if U[-1] != 1:
            raise InputError("unramified polynomial must be monic")
        f = len(U) - 1
        if f < 1:
            raise InputError("unramified polynomial must have positive degree")
        ubar = sum((c & 1) << i for i, c in enumerate(U))
        if not _f2_irreducible(ubar):
            raise InputError("unramified polynomial is not irreducible mod 2")
        E = []
        for c in eisenstein:
            if isinstance(c, (list, tuple)):
                vec = [int(x) for x in c] + [0] * (f - len(c))
                if len(vec) != f:
                    raise InputError("Eisenstein coefficient has wrong length")
            else:
                vec = [int(c)] + [0] * (f - 1)
            E.append(vec)
        e = len(E) - 1
        if e < 1 or E[-1] != [1] + [0] * (f - 1):
            raise InputError("Eisenstein polynomial must be monic of positive degree")
        for vec in E[:-1]:
            if any(x & 1 for x in vec):
                raise InputError("Eisenstein polynomial: non-leading coefficients must be even")
        if not any((x >> 1) & 1 for x in E[0]):
            # E_0 / 2 must be a unit: its residue is nonzero mod U
            raise InputError("Eisenstein polynomial: constant term must have valuation 1")
        self.U = tuple(U)
        self.E = tuple(tuple(v) for v in E[:-1])
        self.e, self.f, self.n = e, f, e * f
        self._ubar = ubar
        self.prec = prec if prec is not None else 12 * e + 24
        self.zero_band = zero_band if zero_band is not None else max(2, self.prec // 3)
        self.characteristic = 0
        self.name = "LocalField(e=%d,f=%d)" % (e, f)
        self._lam_inv_cache = None
        self._lam_pow_cache = {}
        self._rf_sqrt = {}
        for x in range(1 << f):
            self._rf_sqrt[_f2_mulmod(x, x, ubar)] = x
        self._eps_bar = None
        self._omega_star = None
        self.zero = self.element_zero(self.prec)
        self.one = self(1)

    # -- descriptor -------------------------------------------------------
    def descriptor(self):
        return {"unramified": [str(c) for c in self.U],
                "eisenstein": [[str(x) for x in v] for v in self.E]
                + [["1"] + ["0"] * (self.f - 1)]}

    def fingerprint(self):
        blob = json.dumps(self.descriptor(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def with_prec(self, prec, zero_band=None):
        eis = [list(v) for v in self.E] + [[1] + [0] * (self.f - 1)]
        return LocalField(eis, list(self.U), prec=prec, zero_band=zero_band)

    def same_field(self, other):
        return (isinstance(other, LocalField) and other.U == self.U and other.E == self.E)

    def __eq__(self, other):
        return self.same_field(other)

    def __hash__(self):
        return hash((self.U, self.E))

    def __repr__(self):
        return self.name

    @classmethod
    def qp(cls, prec=None):
        """Q2 itself (uniformizer 2)."""
        return cls([-2, 1], prec=prec)

    @classmethod
    def pure(cls, l, prec=None):
        """Q2(2^(1/l)) with uniformizer a root of Lambda^l - 2."""
        return cls([-2] + [0] * (l - 1) + [1], prec=prec)

    # -- coefficient ring Z2[Z]/U -----------------------------------------
    def _rmul(self, a, b):
        f = self.f
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        U = self.U
        for d in range(2 * f - 2, f - 1, -1):
            t = prod[d]
            if t:
                prod[d] = 0
                for i in range(f):
                    if U[i]:
                        prod[d - f + i] -= t * U[i]
        return prod[:f]

    def _mulvec(self, a, b):
        e, f = self.e, self.f
        if self.n == 1:
            return [a[0] * b[0]]
        if f == 1:
            prod = [0] * (2 * e - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            prod[i + j] += x * y
            E = self.E
            for d in range(2 * e - 2, e - 1, -1):
                t = prod[d]
                if t:
                    prod[d] = 0
                    for i in range(e):
                        ei = E[i][0]
                        if ei:
                            prod[d - e + i] -= t * ei
            return prod[:e]
        A = [a[j * f:(j + 1) * f] for j in range(e)]
        B = [b[j * f:(j + 1) * f] for j in range(e)]
        P = [[0] * f for _ in range(2 * e - 1)]
        for i, x in enumerate(A):
            if any(x):
                for j, y in enumerate(B):
                    if any(y):
                        r = self._rmul(x, y)
                        Pij = P[i + j]
                        for s in range(f):
                            Pij[s] += r[s]
        for d in range(2 * e - 2, e - 1, -1):
            t = P[d]
            if any(t):
                P[d] = [0] * f
                for i in range(e):
                    r = self._rmul(t, self.E[i])
                    tgt = P[d - e + i]
                    for s in range(f):
                        tgt[s] -= r[s]
        out = []
        for j in range(e):
            out.extend(P[j])
        return out

    # -- element construction ---------------------------------------------
    def _make(self, c, k, N):
        e, f = self.e, self.f
        base = N - e * k
        out = [0] * self.n
        nz = False
        for j in range(e):
            M = _ceil_div(base - j, e)
            if M <= 0:
                continue
            mask = (1 << M) - 1
            for i in range(f):
                x = c[j * f + i] & mask
                if x:
                    out[j * f + i] = x
                    nz = True
        if not nz:
            return LocalElement(self, (0,) * self.n, 0, N)
        t = min(v2(x) for x in out if x)
        if t:
            out = [x >> t for x in out]
            k += t
        return LocalElement(self, tuple(out), k, N)

    def element_zero(self, prec=None):
        return LocalElement(self, (0,) * self.n, 0, self.prec if prec is None else prec)

    def from_rational(self, r, prec=None):
        N = self.prec if prec is None else prec
        r = to_fraction(r)
        if r == 0:
            return self.element_zero(N)
        num, den = r.numerator, r.denominator
        k = v2(num) - v2(den)
        a = num >> v2(num)
        b = den >> v2(den)
        M = _ceil_div(N - self.e * k, self.e)
        if M <= 0:
            return self.element_zero(N)
        mod = 1 << M
        val = a * pow(b, -1, mod) % mod
        c = [0] * self.n
        c[0] = val
        return self._make(c, k, N)

    def from_coords(self, coords, prec=None):
        """Element sum coords[j*f+i] Z^i lambda^j with rational coordinates."""
        N = self.prec if prec is None else prec
        fr = [to_fraction(x) for x in coords]
        if len(fr) != self.n:
            raise InputError("expected %d coordinates" % self.n)
        nz = [x for x in fr if x]
        if not nz:
            return self.element_zero(N)
        k = min(v2(x.numerator) - v2(x.denominator) for x in nz)
        big = max(N - self.e * k, 1) // self.e + 2
        mod = 1 << big
        c = []
        for x in fr:
            if x == 0:
                c.append(0)
                continue
            s = v2(x.numerator) - v2(x.denominator) - k
            a = x.numerator >> v2(x.numerator)
            b = x.denominator >> v2(x.denominator)
            c.append((a * pow(b, -1, mod) % mod) << s)
        return self._make(c, k, N)

    def from_q2(self, x):
        """Embed an element of Q2 (a degree-one LocalField)."""
        if x.F.n != 1:
            raise InputError("can only embed elements of Q2")
        c = [0] * self.n
        c[0] = x.c[0]
        if x.F.E[0][0] != -2:
            raise InputError("Q2 must use the uniformizer 2")
        return self._make(c, x.k, x.N * self.e)

    def __call__(self, x, prec=None):
        if isinstance(x, LocalElement):
            if x.F.same_field(self):
                return x
            return self.from_q2(x)
        return self.from_rational(x, prec)

    def gen(self, prec=None):
        """The uniformizer lambda."""
        N = self.prec if prec is None else prec
        c = [0] * self.n
        if self.e >= 2:
            c[self.f] = 1
            return self._make(c, 0, N)
        for i in range(self.f):
            c[i] = -self.E[0][i]
        return self._make(c, 0, N)

    def zgen(self, prec=None):
        """The unramified generator Z (a unit whose residue generates)."""
        N = self.prec if prec is None else prec
        c = [0] * self.n
        if self.f == 1:
            c[0] = 1
        else:
            c[1] = 1
        return self._make(c, 0, N)

    def lift_residue(self, bits, prec=None):
        N = self.prec if prec is None else prec
        c = [0] * self.n
        for i in range(self.f):
            c[i] = (bits >> i) & 1
        return self._make(c, 0, N)

    # -- residue field F_{2^f} as bitmasks --------------------------------
    @property
    def residue_size(self):
        return 1 << self.f

    def rf_mul(self, a, b):
        return _f2_mulmod(a, b, self._ubar)

    def rf_inv(self, a):
        if a == 0:
            raise DivisionByApparentZero("zero has no inverse in the residue field")
        for x in range(1, 1 << self.f):
            if self.rf_mul(a, x) == 1:
                return x
        raise AssertionError("residue field is not a field")

    def rf_sqrt(self, a):
        return self._rf_sqrt[a]

    # -- interface used by generic code -----------------------------------
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def pow(self, a, n):
        return a ** n

    def is_zero(self, a):
        return a.is_zero()

    def decide_zero(self, a):
        """Zero test that refuses to guess inside the ambiguity band."""
        if a.is_zero():
            return True
        if a.N - a.valuation() < self.zero_band:
            raise IllConditioned("element %r is too close to zero to decide" % (a,))
        return False

    def eq(self, a, b):
        return (a - b).is_zero()

    # -- special constants -------------------------------------------------
    def _unit_inverse(self, u):
        N = u.N
        rbits = u.residue()
        z = self.lift_residue(self.rf_inv(rbits), N)
        two = self.from_rational(2, N)
        err = 1
        while err < N:
            z = z * (two - u * z)
            err *= 2
        return z

    def lambda_inverse(self, prec):
        """lambda^{-1} known to absolute precision at least ``prec``."""
        cache = self._lam_inv_cache
        if cache is not None and cache.N >= prec:
            return cache
        P = prec + 2 * self.e + 4
        e, f = self.e, self.f
        # 2/lambda = -(lambda^{e-1} + E_{e-1} lambda^{e-2} + ... + E_1) * (E_0/2)^{-1}
        c = [0] * self.n
        if e >= 2:
            c[(e - 1) * f] = 1
            for i in range(1, e):
                for s in range(f):
                    c[(i - 1) * f + s] += self.E[i][s]
        else:
            c[0] = 1
        poly = self._make(c, 0, P + 2 * e)
        half_e0 = [0] * self.n
        for s in range(f):
            half_e0[s] = self.E[0][s] >> 1
        w = self._make(half_e0, 0, P + 2 * e)
        rho = -(poly * self._unit_inverse(w))
        lam_inv = LocalElement(self, rho.c, rho.k - 1, rho.N - e)
        self._lam_inv_cache = lam_inv
        return lam_inv

    def lambda_power(self, m, prec):
        """lambda^m to absolute precision at least ``prec`` (m may be negative)."""
        hit = self._lam_pow_cache.get(m)
        if hit is not None and hit.N >= prec:
            return hit
        val = self._lambda_power(m, prec)
        self._lam_pow_cache[m] = val
        return val

    def _lambda_power(self, m, prec):
        if m >= 0:
            x = self.gen(prec + 1)
            return x ** m if m else self.from_rational(1, prec)
        base = self.lambda_inverse(prec + 2 * (-m) + 2)
        return base ** (-m)

    def epsilon_residue(self):
        """Residue of the unit 2 / lambda^e."""
        if self._eps_bar is None:
            two = self.from_rational(2, 4 * self.e + 8)
            eps = two * self.lambda_power(-self.e, 4 * self.e + 8)
            self._eps_bar = eps.residue()
        return self._eps_bar

    def omega_star(self):
        """Least residue not of the form b^2 + eps*b (defines the top basis vector)."""
        if self._omega_star is None:
            eb = self.epsilon_residue()
            image = {self.rf_mul(b, b) ^ self.rf_mul(eb, b) for b in range(1 << self.f)}
            self._omega_star = min(a for a in range(1 << self.f) if a not in image)
        return self._omega_star

    def artin_schreier_root(self, a):
        """Some b with b^2 + eps*b = a in the residue field, or None."""
        eb = self.epsilon_residue()
        for b in range(1 << self.f):
            if self.rf_mul(b, b) ^ self.rf_mul(eb, b) == a:
                return b
        return None


class LocalElement:
    """``2^k * sum c[j*f+i] Z^i lambda^j`` known modulo ``lambda^N``."""

    __slots__ = ("F", "c", "k", "N")

    def __init__(self, F, c, k, N):
        self.F, self.c, self.k, self.N = F, c, k, N

    # -- basic queries -----------------------------------------------------
    def is_zero(self):
        return not any(self.c)

    def valuation(self):
        """Valuation in units of lambda (raises ApparentZero)."""
        e, f, c = self.F.e, self.F.f, self.c
        best = None
        for j in range(e):
            m = None
            for i in range(f):
                x = c[j * f + i]
                if x:
                    t = v2(x)
                    if m is None or t < m:
                        m = t
            if m is not None:
                val = e * (self.k + m) + j
                if best is None or val < best:
                    best = val
        if best is None:
            raise ApparentZero("element is zero to precision %d" % self.N)
        return best

    def _vcap(self):
        return self.N if self.is_zero() else self.valuation()

    def relative_precision(self):
        return self.N - self.valuation()

    def residue(self):
        """Residue of a unit as a bitmask over the F2-basis Z^i."""
        if self.valuation() != 0:
            raise ValueError("residue() needs a unit")
        f, k = self.F.f, self.k
        bits = 0
        for i in range(f):
            x = self.c[i]
            if k < 0:
                x >>= -k
            bits |= (x & 1) << i
        return bits

    def leading_residue(self):
        """Residue of self / lambda^v with v the valuation."""
        v = self.valuation()
        u = self * self.F.lambda_power(-v, self.N + 2 * abs(v) + 2)
        return u.residue()

    def truncate(self, N):
        if N >= self.N:
            return self
        return self.F._make(list(self.c), self.k, N)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LocalElement):
            if other.F is self.F or other.F.same_field(self.F):
                return other
            if other.F.n == 1:
                return self.F.from_q2(other)
            raise TypeError("cannot combine elements of different local fields")
        return self.F.from_rational(other, self.N)

    def _promote(self, other):
        """Pair (self, other) moved into a common field (Q2 embeds upward)."""
        if (isinstance(other, LocalElement) and self.F.n == 1 and other.F.n > 1):
            return other.F.from_q2(self), other
        return self, self._coerce(other)

    def __add__(self, other):
        self, other = self._promote(other)
        k = min(self.k, other.k)
        sa, sb = self.k - k, other.k - k
        c = [(x << sa) + (y << sb) for x, y in zip(self.c, other.c)]
        return self.F._make(c, k, min(self.N, other.N))

    __radd__ = __add__

    def __neg__(self):
        return self.F._make([-x for x in self.c], self.k, self.N)

    def __sub__(self, other):
        self, other = self._promote(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        self, other = self._promote(other)
        N = min(self.N + other._vcap(), other.N + self._vcap())
        if self.is_zero() or other.is_zero():
            return self.F.element_zero(N)
        if self.F.n == 1:
            return self.F._make([self.c[0] * other.c[0]], self.k + other.k, N)
        return self.F._make(self.F._mulvec(self.c, other.c), self.k + other.k, N)

    __rmul__ = __mul__

    def inverse(self):
        F = self.F
        try:
            v = self.valuation()
        except ApparentZero:
            raise DivisionByApparentZero("inverse of an apparent zero")
        Nout = self.N - 2 * v
        if F.n == 1:
            M = Nout + self.k
            if M <= 0:
                raise PrecisionExhausted("no precision left after inversion")
            mod = 1 << M
            return F._make([pow(self.c[0], -1, mod)], -self.k, Nout)
        if v == 0:
            return F._unit_inverse(self)
        shift = F.lambda_power(-v, self.N + 2 * abs(v) + 4)
        u = self * shift
        return F._unit_inverse(u) * shift

    def __truediv__(self, other):
        self, other = self._promote(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.F.from_rational(1, self.N + (n * self._vcap() if n else 0))
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        try:
            return (self - self._coerce(other)).is_zero()
        except TypeError:
            return NotImplemented

    __hash__ = None

    # -- conversions -------------------------------------------------------
    def q2_coordinates(self, Q2):
        """Coordinates on the Q2-basis Z^i lambda^j as elements of ``Q2``."""
        F = self.F
        e, f = F.e, F.f
        out = []
        for j in range(e):
            bits = _ceil_div(self.N - j, e)
            for i in range(f):
                out.append(Q2._make([self.c[j * f + i]], self.k, bits))
        return out

    def to_fraction(self):
        """A rational number in the residue class (symmetric digits, Q2 only)."""
        if self.F.n != 1:
            raise ValueError("to_fraction() is only defined over Q2")
        if self.is_zero():
            return Fraction(0)
        M = self.N - self.k
        a = self.c[0]
        if a >= 1 << (M - 1):
            a -= 1 << M
        return Fraction(a) * Fraction(2) ** self.k

    def __repr__(self):
        if self.F.n == 1:
            if self.is_zero():
                return "O(2^%d)" % self.N
            a = self.to_fraction() / Fraction(2) ** self.k
            return "%s*2^%d+O(2^%d)" % (a, self.k, self.N)
        return "LocalElement(%s, k=%d, N=%d)" % (list(self.c), self.k, self.N)

    def serialize(self):
        return repr(self)


def parse_q2(text, Q2):
    """Inverse of ``repr`` for Q2 elements: ``"a*2^k+O(2^N)"`` or ``"O(2^N)"``."""
    text = text.replace(" ", "")
    if text.startswith("O(2^"):
        return Q2.element_zero(int(text[4:-1]))
    head, tail = text.split("+O(2^")
    N = int(tail[:-1])
    a, k = head.split("*2^")
    return Q2.from_rational(Fraction(int(a)) * Fraction(2) ** int(k), N)

"""The etale algebra Q[x]/(f) and its completions.

A *factorization* object models ``K[x]/(f) = prod_j K[x]/(f_j)`` for one
coefficient field K and exposes the same operations in both flavours:

* ``LocalFactorization``: K = Q2 and every factor is presented by a local
  field L_j together with the image theta_j of x in L_j.  The factorization
  is an input that gets verified, never computed.
* ``FiniteFactorization``: K = GF(q); the factors are found by trial
  division and component arithmetic is polynomial arithmetic mod f_j.

Shared interface: ``embed(a)``, ``component_is_zero(j, val)``,
``class_bits(vals)``, ``sqrt(vals)``, ``to_poly(vals)`` and the layout
``dims`` of the square-class vector.
"""

from fractions import Fraction

from .errors import IllConditioned, InputError, NotASquare
from .fields import LocalField, QQ, to_fraction
from .linalg import invert, matvec
from .poly import Poly
from .squareclass import sc_basis, sc_decompose, sc_sqrt


class ClassLayout:
    """Offsets of the per-factor square-class coordinates inside one bitmask."""

    def __init__(self, dims):
        self.dims = list(dims)
        self.offsets = []
        o = 0
        for d in self.dims:
            self.offsets.append(o)
            o += d
        self.dim = o

    def join(self, parts):
        bits = 0
        for off, p in zip(self.offsets, parts):
            bits |= p << off
        return bits

    def split(self, bits):
        return [(bits >> off) & ((1 << d) - 1) for off, d in zip(self.offsets, self.dims)]

    def bitstring(self, bits):
        return "".join(str((bits >> i) & 1) for i in range(self.dim))


# --------------------------------------------------------------------------
# local factorizations


class LocalFactor:
    """One factor f_j of f over Q2 with its field L_j and the image of x."""

    def __init__(self, field, theta, poly, Q2, certificate="generator"):
        self.field = field
        self.theta = theta
        self.poly = poly
        self.Q2 = Q2
        self.certificate = certificate
        n = field.n
        if poly.degree() != n:
            raise InputError("factor degree %d does not match local degree %d"
                             % (poly.degree(), n))
        powers = [field.from_rational(1)]
        for _ in range(1, n):
            powers.append(powers[-1] * theta)
        cols = [p.q2_coordinates(Q2) for p in powers]
        M = [[cols[k][r] for k in range(n)] for r in range(n)]
        try:
            self._minv = invert(Q2, M)
        except IllConditioned:
            raise InputError("theta does not generate the local field")
        self._powers = powers

    def verify_root(self):
        val = self.poly(self.theta)
        if not val.is_zero():
            v = val.valuation()
            if val.N - v >= self.field.zero_band:
                raise InputError("local factor does not vanish at theta (valuation %d)" % v)

    def to_poly(self, val):
        coords = val.q2_coordinates(self.Q2)
        return Poly(self.Q2, matvec(self.Q2, self._minv, coords))


def _parse_local_field(desc, prec_bits):
    unr = desc.get("unramified")
    eis = desc["eisenstein"]
    e = len(eis) - 1
    f = 1 if unr is None else len(unr) - 1
    U = None if unr is None else [int(x) for x in unr]
    E = [[int(x) for x in c] if isinstance(c, list) else int(c) for c in eis]
    return LocalField(E, U, prec=e * prec_bits)


class LocalFactorization:
    """Verified decomposition of Q2[x]/(f) into local fields."""

    kind = "local"

    def __init__(self, f, factors, Q2):
        self.f_global = f
        self.Q2 = Q2
        self.factors = factors
        self.f = f.map(Q2) if f.F is not Q2 else f
        self.c = self.f.lc()
        self.layout = ClassLayout([F.field.n + 2 for F in factors])
        self._verify()
        self._idempotents = None

    @classmethod
    def from_json(cls, f, doc, prec_bits):
        Q2 = LocalField.qp(prec_bits)
        factors = []
        for item in doc["factors"]:
            K = _parse_local_field(item["field"], prec_bits)
            theta = _theta_from_json(K, item["theta"])
            if item.get("poly") is None:
                if len(doc["factors"]) != 1:
                    raise InputError("factor polynomial may only be omitted for a single factor")
                fq = f.map(Q2)
                poly = fq.monic()
            else:
                poly = Poly(Q2, [Q2(to_fraction(x)) for x in item["poly"]])
            factors.append(LocalFactor(K, theta, poly, Q2, item.get("certificate", "generator")))
        return cls(f, factors, Q2)

    def _verify(self):
        prod = Poly(self.Q2, [self.Q2.one])
        for F in self.factors:
            F.verify_root()
            prod = prod * F.poly
        if prod.degree() != self.f.degree():
            raise InputError("factor degrees do not add up to deg f")
        diff = prod - self.f.monic()
        for x in diff.c:
            if not self.Q2.decide_zero(x):
                raise InputError("product of local factors differs from f")

    @property
    def count(self):
        return len(self.factors)

    @property
    def factor_polys(self):
        return [F.poly for F in self.factors]

    def embed(self, a):
        """Values of a polynomial (over Q or Q2) at every theta_j."""
        out = []
        for F in self.factors:
            if a.F is QQ:
                val = F.field.from_rational(0)
                for coeff in reversed(a.c):
                    val = val * F.theta + coeff
                out.append(val)
            else:
                out.append(a(F.theta))
        return tuple(out)

    def component_is_zero(self, j, val):
        return self.factors[j].field.decide_zero(val)

    def class_bits(self, vals):
        return self.layout.join([sc_decompose(v).bits for v in vals])

    def class_parts(self, vals):
        return [sc_decompose(v) for v in vals]

    def sqrt(self, vals):
        return tuple(sc_sqrt(v) for v in vals)

    def idempotents(self):
        if self._idempotents is None:
            if self.count == 1:
                self._idempotents = [Poly(self.Q2, [self.Q2.one])]
            else:
                ids = []
                for j, F in enumerate(self.factors):
                    others = Poly(self.Q2, [self.Q2.one])
                    for i, G in enumerate(self.factors):
                        if i != j:
                            others = others * G.poly
                    inv = F.to_poly(others(F.theta).inverse())
                    ids.append(others * inv)
                self._idempotents = ids
        return self._idempotents

    def to_poly(self, vals):
        """The polynomial of degree < deg f with the given component values."""
        parts = [F.to_poly(v) for F, v in zip(self.factors, vals)]
        if self.count == 1:
            return parts[0]
        acc = Poly(self.Q2, [])
        for e, p in zip(self.idempotents(), parts):
            acc = acc + e * p
        return acc % self.f.monic()

    def describe(self):
        return [{"degree": F.field.n, "e": F.field.e, "f": F.field.f,
                 "field_fingerprint": F.field.fingerprint(),
                 "basis_fingerprint": sc_basis(F.field).fingerprint(),
                 "certificate": F.certificate} for F in self.factors]


def _theta_from_json(K, doc):
    """theta given as num(lambda)/den(lambda) with rational coefficients.

    Coefficients may themselves be lists of f rationals (coordinates over
    the unramified part).
    """
    lam = K.gen()
    z = K.zgen()

    def ev(coeffs):
        acc = K.from_rational(0)
        for c in reversed(coeffs):
            if isinstance(c, list):
                term = K.from_rational(0)
                for i, x in enumerate(c):
                    term = term + K.from_rational(to_fraction(x)) * (z ** i)
            else:
                term = K.from_rational(to_fraction(c))
            acc = acc * lam + term
        return acc

    num = ev(doc["num"])
    den = ev(doc.get("den", ["1"]))
    return num / den


def single_factor(f, field, theta, Q2):
    """Convenience constructor when f is irreducible over Q2."""
    poly = f.map(Q2).monic()
    return LocalFactorization(f, [LocalFactor(field, theta, poly, Q2)], Q2)


# --------------------------------------------------------------------------
# finite-field factorizations


def _monic_polys(F, d):
    q = F.q
    for idx in range(q ** d):
        coeffs = []
        t = idx
        for _ in range(d):
            coeffs.append(F.element(t % q))
            t //= q
        yield Poly(F, coeffs + [F.one])


def factor_squarefree(f):
    """Monic irreducible factors of a squarefree polynomial over GF(q)."""
    F = f.F
    g = f.monic()
    out = []
    d = 1
    while g.degree() >= 2 * d:
        for cand in _monic_polys(F, d):
            while True:
                q, r = g.divmod(cand)
                if not r.is_zero():
                    break
                out.append(cand)
                g = q
                if g.degree() < 2 * d:
                    break
            if g.degree() < 2 * d:
                break
        d += 1
    if g.degree() > 0:
        out.append(g)
    out.sort(key=lambda p: (p.degree(), p.key()))
    return out


class FiniteFactorization:
    kind = "finite"

    def __init__(self, f):
        self.f = f
        self.F = f.F
        self.c = f.lc()
        self._factors = factor_squarefree(f)
        if sum(p.degree() for p in self._factors) != f.degree():
            raise InputError("f is not squarefree")
        self.layout = ClassLayout([1] * len(self._factors))
        self._idem = None
        self._nonres = {}

    @property
    def count(self):
        return len(self._factors)

    @property
    def factor_polys(self):
        return list(self._factors)

    def embed(self, a):
        return tuple(a % g for g in self._factors)

    def component_is_zero(self, j, val):
        return val.is_zero()

    def _chi(self, j, val):
        g = self._factors[j]
        Qn = self.F.q ** g.degree()
        r = val.powmod((Qn - 1) // 2, g)
        if r.is_zero():
            return 0
        return 1 if r.degree() == 0 and r.c[0] == self.F.one else -1

    def class_bits(self, vals):
        parts = []
        for j, v in enumerate(vals):
            ch = self._chi(j, v)
            if ch == 0:
                raise InputError("square class of a zero component")
            parts.append(0 if ch == 1 else 1)
        return self.layout.join(parts)

    def _nonresidue(self, j):
        if j not in self._nonres:
            g = self._factors[j]
            F = self.F
            for d in range(g.degree()):
                for cand in _monic_polys(F, d):
                    if self._chi(j, cand) == -1:
                        self._nonres[j] = cand
                        break
                if j in self._nonres:
                    break
                # also try non-monic constants
                for a in F.elements():
                    if a and self._chi(j, Poly(F, [a])) == -1:
                        self._nonres[j] = Poly(F, [a])
                        break
                if j in self._nonres:
                    break
        return self._nonres[j]

    def _sqrt_component(self, j, a):
        """Tonelli-Shanks in GF(q)[x]/(g_j)."""
        g = self._factors[j]
        F = self.F
        if a.is_zero():
            return a
        if self._chi(j, a) != 1:
            raise NotASquare("component %d is not a square" % j)
        Qn = F.q ** g.degree()
        s, t = 0, Qn - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = self._nonresidue(j)
        m = s
        c = z.powmod(t, g)
        x = a.powmod((t + 1) // 2, g)
        b = a.powmod(t, g)
        one = Poly(F, [F.one])
        while not (b - one).is_zero():
            i, bb = 0, b
            while not (bb - one).is_zero():
                bb = (bb * bb) % g
                i += 1
            w = c
            for _ in range(m - i - 1):
                w = (w * w) % g
            x = (x * w) % g
            c = (w * w) % g
            b = (b * c) % g
            m = i
        return x

    def sqrt(self, vals):
        return tuple(self._sqrt_component(j, v) for j, v in enumerate(vals))

    def to_poly(self, vals):
        if self._idem is None:
            ids = []
            for j, g in enumerate(self._factors):
                others = Poly(self.F, [self.F.one])
                for i, h in enumerate(self._factors):
                    if i != j:
                        others = others * h
                _, s, _t = (others % g).xgcd(g)
                ids.append(others * s)
            self._idem = ids
        acc = Poly(self.F, [])
        for e, v in zip(self._idem, vals):
            acc = acc + e * v
        return acc % self.f.monic()


# --------------------------------------------------------------------------
# the map mu-tilde


def mu_tilde(a, fac):
    """Component values of (-c)^deg(a) (a - a1 f1) for monic a.

    ``d = gcd(a, f)`` is decided factor by factor (a(theta_j) = 0);
    ``a = a1 d`` and ``f = f1 d``.  On factors dividing a the value is
    ``-(-c)^deg(a) a1 f1``, elsewhere ``(-c)^deg(a) a``.
    """
    K = fac.f.F
    vals = fac.embed(a)
    divides = [fac.component_is_zero(j, v) for j, v in enumerate(vals)]
    c = fac.c
    sign = K.pow(K.neg(c), a.degree())
    if not any(divides):
        return tuple(_scale(v, sign) for v in vals)
    polys = fac.factor_polys
    d = Poly(K, [K.one])
    f1 = Poly(K, [c])
    for j, g in enumerate(polys):
        if divides[j]:
            d = d * g
        else:
            f1 = f1 * g
    a1, rem = a.divmod(d)
    for x in rem.c:
        if not K.decide_zero(x):
            raise IllConditioned("gcd(a, f) is not a divisor of a to the working precision")
    prod = a1 * f1
    pvals = fac.embed(prod)
    out = []
    for j, v in enumerate(vals):
        if divides[j]:
            out.append(_scale(_neg(pvals[j]), sign))
        else:
            out.append(_scale(v, sign))
    return tuple(out)


def _scale(v, s):
    if isinstance(v, Poly):
        return v * s
    return v * s


def _neg(v):
    return -v

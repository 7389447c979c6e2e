"""Halving points on odd-degree hyperelliptic Jacobians.

Given P = [a, b] in 2J(K) and s with

    s^2 = (-c)^deg(a) (a - a1 f1)  mod f,        a = d a1, f = d f1, d = gcd(a, f),

the point Q with 2Q = P attached to s comes from the solution (u, v, w), w
monic of least degree, of the linear congruences

    v d = w s  mod f1,      v d = u b  mod a1,      u f1 = w s  mod d,

with deg u < deg(a)/2, deg v <= g + deg(a)/2 - deg d, deg w <= g.  Every
solution satisfies the identity  u^2 f1 = d v^2 - (-c)^deg(a) a1 w^2,  and
Q = [w, r] where r is fixed by a CRT condition built from gcd(u, w).

Different square roots s (up to sign) give different halves, so running
over all of them yields every half.
"""

from itertools import product

from .errors import IllConditioned, KernelError, NotDivisible
from .etale import mu_tilde
from .fields import LocalField
from .linalg import solve
from .mumford import MumfordPoint
from .poly import Poly, crt_pair, squarefree_decomposition


class HalvingWitness:
    """Data certifying one halving step (all polynomials over the base field)."""

    def __init__(self, P, Q, s, u, v, w, d, a1, f1, sign, degree):
        self.P, self.Q = P, Q
        self.s, self.u, self.v, self.w = s, u, v, w
        self.d, self.a1, self.f1 = d, a1, f1
        self.sign = sign
        self.degree = degree

    def relation_residual(self):
        """u^2 f1 - d v^2 + (-c)^deg(a) a1 w^2, which must vanish."""
        u, v, w = self.u, self.v, self.w
        return u * u * self.f1 - self.d * v * v + self.a1 * w * w * self.sign


def _coeff_vector(p, n, K):
    return [p[i] for i in range(n)] if n else []


def _is_zero_poly(p):
    K = p.F
    return all(K.decide_zero(x) for x in p.c)


def solve_congruences(blocks, nu, nv, g, K, start_degree=0):
    """Least-degree monic w solving sum(coef * unknown) = 0 mod m over all blocks.

    ``blocks`` is a list of (m, cu, cv, cw): the congruence cu*u + cv*v +
    cw*w = 0 mod m.  Returns (u, v, w) as polynomials.
    """
    one = Poly(K, [K.one])
    for D in range(start_degree, g + 1):
        cols = []  # one column per unknown, as a concatenated residue vector
        for i in range(nu):
            cols.append(_stack(blocks, K, lambda cu, cv, cw, i=i: cu * Poly.monomial(K, i)))
        for i in range(nv):
            cols.append(_stack(blocks, K, lambda cu, cv, cw, i=i: cv * Poly.monomial(K, i)))
        for i in range(D):
            cols.append(_stack(blocks, K, lambda cu, cv, cw, i=i: cw * Poly.monomial(K, i)))
        rhs = _stack(blocks, K, lambda cu, cv, cw: -(cw * Poly.monomial(K, D)))
        nrows = len(rhs)
        A = [[cols[j][r] for j in range(len(cols))] for r in range(nrows)]
        if not cols:
            ok = all(K.decide_zero(x) for x in rhs)
            if ok:
                return Poly(K, []), Poly(K, []), Poly.monomial(K, D)
            continue
        res = solve(K, A, rhs)
        if res is None:
            continue
        x, nullity = res
        if nullity:
            raise IllConditioned("halving system has a non-unique least-degree solution")
        u = Poly(K, x[:nu])
        v = Poly(K, x[nu:nu + nv])
        w = Poly(K, list(x[nu + nv:]) + [K.one])
        return u, v, w
    raise KernelError("halving system has no solution with deg w <= g")


def _stack(blocks, K, make):
    out = []
    for m, cu, cv, cw in blocks:
        p = make(cu, cv, cw) % m
        out.extend(p[i] for i in range(m.degree()))
    return out


def _ceil_half(n):
    return (n + 1) // 2


def _monic_gcd(a, b):
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    return a.gcd(b)


def _div(a, b):
    q, r = a.divmod(b)
    if not _is_zero_poly(r):
        raise KernelError("expected exact polynomial division")
    return q


def _inverse_mod(x, m):
    g, s, _ = (x % m).xgcd(m)
    if g.degree() != 0:
        raise KernelError("element not invertible modulo the CRT modulus")
    return s


def halve_with_root(J, fac, a, b, s):
    """The half of the squarefree relaxed pair (a, b) attached to the root s."""
    K = J.F
    g = J.genus
    f = J.f
    c = f.lc()
    one = Poly(K, [K.one])
    vals = fac.embed(a)
    polys = fac.factor_polys
    d = one
    f1 = Poly(K, [c])
    for j, val in enumerate(vals):
        if fac.component_is_zero(j, val):
            d = d * polys[j]
        else:
            f1 = f1 * polys[j]
    a1 = _div(a, d)
    sign = K.pow(K.neg(c), a.degree())
    nu = _ceil_half(a.degree())
    nv = g + a.degree() // 2 - d.degree() + 1
    blocks = []
    if f1.degree() > 0:
        blocks.append((f1.monic(), Poly(K, []), d, -s))
    if a1.degree() > 0:
        blocks.append((a1, -b, d, Poly(K, [])))
    if d.degree() > 0:
        blocks.append((d, f1, Poly(K, []), -s))
    u, v, w = solve_congruences(blocks, nu, max(nv, 0), g, K)
    witness = HalvingWitness(None, None, s, u, v, w, d, a1, f1, sign, w.degree())
    d1 = _monic_gcd(u, w)
    u1, v1, w1 = _div(u, d1), _div(v, d1), _div(w, d1)
    df = _monic_gcd(d1, f.monic())
    da = _monic_gcd(d1, a1) if a1.degree() > 0 else one
    m = w1 * da
    if m.degree() > 0:
        r0 = (-(v1 * d) * _inverse_mod(u1, m)) % m
    else:
        r0 = Poly(K, [])
    if df.degree() > 0 and m.degree() > 0:
        r = crt_pair(r0, m, Poly(K, []), df)
    elif df.degree() > 0:
        r = Poly(K, [])
    else:
        r = r0
    Q = J.reduce(w, r) if w.degree() > 0 else J.zero()
    return Q, witness


def _sign_choices(roots):
    """All sign patterns of the component roots, first component fixed."""
    k = len(roots)
    for signs in product((1, -1), repeat=k - 1):
        yield tuple([roots[0]] + [r if sg == 1 else _negate(r) for r, sg in zip(roots[1:], signs)])


def _negate(x):
    return -x


def torsion_points(J, fac):
    """All K-rational 2-torsion points [h, 0], h a product of factors of f."""
    polys = fac.factor_polys
    K = J.F
    g = J.genus
    out = []
    for mask in range(1 << len(polys)):
        h = Poly(K, [K.one])
        for j, p in enumerate(polys):
            if mask >> j & 1:
                h = h * p
        if h.degree() > g:
            continue
        out.append(MumfordPoint(h, Poly(K, [])))
    return out


def is_divisible(J, fac, P):
    if P.is_zero():
        return True
    return fac.class_bits(mu_tilde(P.a, fac)) == 0


def halve_all(J, fac, P, witnesses=None, verify=True):
    """Every Q in J(K) with 2Q = P (empty list when P is not in 2J(K))."""
    K = J.F
    if P.is_zero():
        return torsion_points(J, fac)
    a, b = P.a, P.b
    sqf = a.gcd(a.deriv()).degree() == 0
    if not sqf:
        a_sq = Poly(K, [K.one])
        a_odd = Poly(K, [K.one])
        for p, mult in squarefree_decomposition(a):
            a_sq = a_sq * p ** (mult // 2)
            if mult & 1:
                a_odd = a_odd * p
        Q1 = MumfordPoint(a_sq, b % a_sq) if a_sq.degree() > 0 else J.zero()
        P2 = MumfordPoint(a_odd, b % a_odd) if a_odd.degree() > 0 else J.zero()
        halves = halve_all(J, fac, P2, witnesses, verify=False)
        out = [J.add(Q1, H) for H in halves]
        if verify:
            for Q in out:
                _check_double(J, Q, P)
        return out
    vals = mu_tilde(a, fac)
    if fac.class_bits(vals) != 0:
        return []
    roots = fac.sqrt(vals)
    out = []
    for choice in _sign_choices(list(roots)):
        s = fac.to_poly(choice)
        Q, wit = halve_with_root(J, fac, a, b, s)
        wit.P, wit.Q = P, Q
        if verify:
            _check_double(J, Q, P)
        if witnesses is not None:
            witnesses.append(wit)
        out.append(Q)
    return out


def halve(J, fac, P):
    """One half of P (raises NotDivisible)."""
    hs = halve_all(J, fac, P)
    if not hs:
        raise NotDivisible("point is not divisible by 2")
    return hs[0]


def _check_double(J, Q, P):
    D = J.double(Q)
    if not J.equal(D, P):
        raise KernelError("halving self-check failed: 2Q != P")


def halve_plus_torsion(J, fac, P, h):
    """All halves of P + [h, 0] without reducing the sum first.

    Requires gcd(a, f) = 1; the relaxed pair is (a h, b') with b' = b mod a
    and b' = 0 mod h.
    """
    K = J.F
    a, b = P.a, P.b
    if any(fac.component_is_zero(j, v) for j, v in enumerate(fac.embed(a))):
        raise KernelError("halve_plus_torsion needs gcd(a, f) = 1")
    at = a * h
    bt = crt_pair(b % a, a, Poly(K, []), h) if h.degree() > 0 else b
    return _halve_relaxed(J, fac, at, bt)


def halve_plus_point(J, fac, P, P2):
    """All halves of P + P2 for a, a2, f pairwise coprime."""
    K = J.F
    at = P.a * P2.a
    bt = crt_pair(P.b % P.a, P.a, P2.b % P2.a, P2.a)
    return _halve_relaxed(J, fac, at, bt)


def _halve_relaxed(J, fac, a, b):
    vals = mu_tilde(a, fac)
    if fac.class_bits(vals) != 0:
        return []
    roots = fac.sqrt(vals)
    out = []
    for choice in _sign_choices(list(roots)):
        s = fac.to_poly(choice)
        Q, _ = halve_with_root(J, fac, a, b, s)
        out.append(Q)
    return out

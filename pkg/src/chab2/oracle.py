"""Brute-force oracles over finite fields.

Everything here is exhaustive and deliberately naive: J(F_q) is listed by
running over all Mumford pairs, the group law is tabulated with Cantor's
algorithm, halves are found by scanning the doubling map, and the group
order is cross-checked against point counts through the L-polynomial.
These results are the reference values for the halving, mu and q-map code.
"""

import itertools
import random

from .errors import InputError
from .etale import FiniteFactorization, mu_tilde
from .fields import FiniteField
from .mumford import Jacobian, MumfordPoint
from .poly import Poly


def enumerate_jacobian(J):
    """All points of J(F_q) as Mumford pairs, identity first."""
    F = J.F
    g = J.genus
    out = [J.zero()]
    q = F.q
    for d in range(1, g + 1):
        for ac in itertools.product(range(q), repeat=d):
            a = Poly(F, [F.element(x) for x in ac] + [F.one])
            fa = J.f % a
            for bc in itertools.product(range(q), repeat=d):
                b = Poly(F, [F.element(x) for x in bc])
                if ((b * b) % a - fa).is_zero():
                    out.append(MumfordPoint(a, b))
    return out


def count_points(F, f):
    """#C(F_q) for y^2 = f(x) of odd degree (one point at infinity)."""
    n = 1
    for x in F.elements():
        n += 1 + F.chi(f.eval(x))
    return n


def lpoly_group_order(q, f_ints, g):
    """#J(F_q) from point counts over F_q and F_{q^2} (q prime only)."""
    F1 = FiniteField(q)
    f1 = Poly(F1, [F1(c) for c in f_ints])
    N1 = count_points(F1, f1)
    if g == 1:
        return N1
    if g != 2:
        raise InputError("L-polynomial check implemented for g <= 2")
    F2 = FiniteField(q * q)
    f2 = Poly(F2, [F2.from_int(c) for c in f_ints])
    N2 = count_points(F2, f2)
    c1 = N1 - q - 1
    c2 = (c1 * c1 + N2 - q * q - 1) // 2
    return 1 + c1 + c2 + q * c1 + q * q


class JacobianOracle:
    """Exhaustive model of J(F_q) for a small curve."""

    def __init__(self, f):
        self.f = f
        self.F = f.F
        self.J = Jacobian(f)
        self.fac = FiniteFactorization(f)
        self.points = enumerate_jacobian(self.J)
        self.index = {P.key(): i for i, P in enumerate(self.points)}
        self._double = None
        self._table = {}

    def __len__(self):
        return len(self.points)

    def idx(self, P):
        return self.index[P.key()]

    def add(self, i, j):
        key = (i, j) if i <= j else (j, i)
        hit = self._table.get(key)
        if hit is None:
            R = self.J.add(self.points[i], self.points[j])
            hit = self.index[R.key()]
            self._table[key] = hit
        return hit

    def doubling(self):
        if self._double is None:
            self._double = [self.add(i, i) for i in range(len(self.points))]
        return self._double

    def halves(self, i):
        dbl = self.doubling()
        return [j for j, d in enumerate(dbl) if d == i]

    def two_torsion(self):
        return self.halves(0)

    def mu(self, i):
        P = self.points[i]
        if P.is_zero():
            return 0
        return self.fac.class_bits(mu_tilde(P.a, self.fac))

    def q_set(self, i):
        """{mu(Q) : 2^n Q = P for some n >= 0} by breadth-first search."""
        seen = {i}
        frontier = [i]
        classes = set()
        while frontier:
            nxt = []
            for k in frontier:
                classes.add(self.mu(k))
                if self.mu(k) == 0:
                    for h in self.halves(k):
                        if h not in seen:
                            seen.add(h)
                            nxt.append(h)
            frontier = nxt
        return classes

    def nu(self, i, cap=64):
        """Largest n with P in 2^n J, or None when P is infinitely divisible."""
        level = {i}
        n = 0
        while True:
            nxt = set()
            for k in level:
                nxt.update(self.halves(k))
            if not nxt:
                return n
            n += 1
            if n > cap:
                return None
            level = nxt

    def check_group_axioms(self, exhaustive=True, rng=None, samples=2000):
        """Closure, identity, inverses, commutativity and associativity."""
        n = len(self.points)
        J = self.J
        for i in range(n):
            if self.add(0, i) != i:
                return False
            neg = self.index[J.neg(self.points[i]).key() if not self.points[i].is_zero()
                             else self.points[0].key()]
            if self.add(i, neg) != 0:
                return False
        if exhaustive:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = rng or random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(samples))
        for i, j, k in triples:
            if self.add(self.add(i, j), k) != self.add(i, self.add(j, k)):
                return False
        return True


def random_curve(F, g, rng):
    """A random squarefree f of degree 2g+1 over F with random leading coefficient."""
    while True:
        coeffs = [F.element(rng.randrange(F.q)) for _ in range(2 * g + 1)]
        lead = F.element(rng.randrange(1, F.q))
        f = Poly(F, coeffs + [lead])
        if f.gcd(f.deriv()).degree() == 0:
            return f


def halving_equivalence(q, genus, trials, seed=0, curves=None):
    """Compare halve_all against the doubling table on random (curve, point) pairs.

    Points are drawn uniformly from J(F_q) and from 2J(F_q) alternately so
    that both empty and nonempty half sets are exercised.  Returns a summary
    dict; ``mismatches`` lists every disagreement.
    """
    from .halving import halve_all

    if genus < 1 or genus > 2:
        raise InputError("genus must be 1 or 2")
    F = FiniteField(q)
    if F.p == 2:
        raise InputError("q must be odd")
    rng = random.Random(seed)
    curves = curves or max(1, trials // 25)
    per = [trials // curves + (1 if c < trials % curves else 0) for c in range(curves)]
    out = {"q": q, "genus": genus, "trials": 0, "divisible": 0, "halves": 0,
           "mismatches": []}
    for n in per:
        f = random_curve(F, genus, rng)
        orc = JacobianOracle(f)
        tors = len(orc.two_torsion())
        dbl = orc.doubling()
        for t in range(n):
            i = rng.randrange(len(orc))
            if t % 2:
                i = dbl[i]
            mine = halve_all(orc.J, orc.fac, orc.points[i])
            got = sorted(orc.idx(Q) for Q in mine)
            want = sorted(orc.halves(i))
            out["trials"] += 1
            out["halves"] += len(got)
            if want:
                out["divisible"] += 1
            if got != want or (want and len(got) != tors):
                out["mismatches"].append({"f": [str(c) for c in f.c], "point": i,
                                          "got": got, "want": want})
    return out

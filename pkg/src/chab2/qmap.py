"""The q-map, the divisibility index nu, and their evaluation on residue disks.

For P in J(Q2), q(P) is the set of classes pi(Q) over all Q with 2^n Q = P,
and nu(P) is the largest n with P in 2^n J(Q2).  Both are computed by
recording mu(P) and recursing into every half whenever mu(P) is trivial.

On a disk the recursion is only run at finitely many parameters.  A sample
t0 represents the whole class t0 + 2^k Z2 once nu(t0) <= k - 3.  Near a
parameter whose image is 0 the disk is cut into annuli v(t) = m, and the
walk stops at the first m >= m0 where the maximum n_m of nu over the
annulus satisfies 2m - 3 >= n_m (3m - 2 >= n_m for an odd parametrization
at a Weierstrass point); everything closer to the centre then contributes
only the trivial class.
"""

from fractions import Fraction

from .errors import DivergenceSuspected, KernelError, StoppingRuleUnmet
from .etale import mu_tilde
from .halving import halve_all, torsion_points
from .mumford import CurvePoint


def mu_bits(J, fac, P):
    """Square-class bitmask of mu(P) (0 for the origin)."""
    if P.is_zero():
        return 0
    return fac.class_bits(mu_tilde(P.a, fac))


def default_depth_cap(genus):
    return 4 * genus + 16


class QResult:
    """q(P) as a set of class bitmasks together with nu(P)."""

    def __init__(self, classes, nu, nodes, trail=None):
        self.classes = frozenset(classes)
        self.nu = nu
        self.nodes = nodes
        self.trail = trail

    def __repr__(self):
        return "QResult(classes=%s, nu=%d)" % (sorted(self.classes), self.nu)


def _serialize_point(P):
    return {"a": [repr(x) for x in P.a.c], "b": [repr(x) for x in P.b.c]}


def q_point(J, fac, P, cap=None, record=False):
    """q(P) and nu(P) by exhaustive halving.

    Raises DivergenceSuspected when a chain of trivial classes is longer
    than ``cap`` (P is then suspiciously close to a point of odd order).
    """
    cap = default_depth_cap(J.genus) if cap is None else cap
    classes = set()
    nu = 0
    nodes = 0
    trail = [] if record else None
    stack = [(P, 0, None)]
    while stack:
        R, level, parent = stack.pop()
        bits = mu_bits(J, fac, R)
        classes.add(bits)
        nu = max(nu, level)
        idx = nodes
        nodes += 1
        if record:
            entry = {"level": level, "parent": parent, "class": bits}
            entry.update(_serialize_point(R))
            trail.append(entry)
        if bits:
            continue
        if level >= cap:
            raise DivergenceSuspected(
                "point still divisible after %d halvings" % cap)
        for H in halve_all(J, fac, R):
            stack.append((H, level + 1, idx))
    return QResult(classes, nu, nodes, trail)


def q_coset(J, fac, P, gamma, cap=None):
    """q(P + Gamma) for Gamma generated by ``gamma`` (points over the same field).

    Uses representatives of Gamma/2Gamma given by 0/1 combinations of the
    generators.  Halves are identified only when they coincide exactly, so
    the result may list more intermediate points than necessary; the class
    set is unaffected.
    """
    cap = default_depth_cap(J.genus) if cap is None else cap
    reps = [J.zero()]
    for g in gamma:
        reps = reps + [J.add(R, g) for R in reps]
    gamma_classes = {mu_bits(J, fac, R) for R in reps}
    classes = set()
    nu = 0
    nodes = 0
    frontier = [P]
    level = 0
    while frontier:
        nxt = []
        seen = set()
        for R in frontier:
            nodes += 1
            base = mu_bits(J, fac, R)
            for c in gamma_classes:
                classes.add(base ^ c)
            for T in reps:
                S = J.add(R, T)
                if mu_bits(J, fac, S):
                    continue
                for H in halve_all(J, fac, S):
                    key = H.key()
                    if key not in seen:
                        seen.add(key)
                        nxt.append(H)
        if nxt:
            level += 1
            nu = level
            if level > cap:
                raise DivergenceSuspected("coset still divisible after %d halvings" % cap)
        frontier = nxt
    return QResult(classes, nu, nodes)


def local_torsion_level(J, fac, cap=8):
    """Smallest n with J(Q2)[2^oo] inside J[2^n], found by halving 2-torsion."""
    level = 0
    frontier = [T for T in torsion_points(J, fac) if not T.is_zero()]
    while frontier:
        level += 1
        if level > cap:
            raise DivergenceSuspected("2-power torsion deeper than %d levels" % cap)
        nxt = []
        for T in frontier:
            if mu_bits(J, fac, T) == 0:
                nxt.extend(halve_all(J, fac, T))
        frontier = nxt
    return level


# --------------------------------------------------------------------------
# disks


class DiskSample:
    """The parameter class t0 + 2^k Z2 with q and nu evaluated at t0."""

    def __init__(self, t0, k, result, offset_index=0):
        self.t0 = Fraction(t0)
        self.k = k
        self.result = result
        self.offset_index = offset_index

    @property
    def nu(self):
        return self.result.nu

    def describe(self, layout):
        d = {"t": str(self.t0), "modulus_exponent": self.k, "nu": self.nu,
             "classes": sorted(layout.bitstring(c) for c in self.result.classes)}
        if self.offset_index:
            d["torsion_offset"] = self.offset_index
        if self.result.trail is not None:
            d["trail"] = [dict(e, **{"class": layout.bitstring(e["class"])})
                          for e in self.result.trail]
        return d


class DiskQResult:
    def __init__(self, classes, mode, samples, levels, stop_level, rule):
        self.classes = frozenset(classes)
        self.mode = mode
        self.samples = samples
        self.levels = levels
        self.stop_level = stop_level
        self.rule = rule

    def describe(self, layout):
        return {
            "mode": self.mode,
            "classes": sorted(layout.bitstring(c) for c in self.classes),
            "stop_level": self.stop_level,
            "rule": self.rule,
            "levels": [{"m": m, "n_m": n} for m, n in self.levels],
            "samples": [s.describe(layout) for s in self.samples],
        }


def _sym_rep(t, k):
    """Representative of t mod 2^k in (-2^(k-1), 2^(k-1)]."""
    mod = 1 << k
    r = t % mod
    if r > mod // 2:
        r -= mod
    return r


class DiskEvaluator:
    """i_base(phi(t)) + offset on a residue disk, followed by q."""

    def __init__(self, J, fac, disk, base, Q2, cap=None, record=False):
        self.J, self.fac, self.disk, self.Q2 = J, fac, disk, Q2
        self.base = base
        self.cap = cap
        self.record = record

    def point(self, t):
        return self.J.embed_point(self.disk.point(t, self.Q2), self.base)

    def q(self, t, offset=None):
        P = self.point(t)
        if offset is not None and not offset.is_zero():
            P = self.J.add(P, offset)
        return q_point(self.J, self.fac, P, self.cap, self.record)


def _constant_cover(ev, t0, k, kmax, offset=None, offset_index=0):
    """Split t0 + 2^k Z2 until every piece has nu(t0) <= k - 3."""
    out = []
    todo = [(t0, k)]
    while todo:
        t, kk = todo.pop(0)
        try:
            res = ev.q(Fraction(t), offset)
        except DivergenceSuspected:
            res = None
        if res is not None and res.nu <= kk - 3:
            out.append(DiskSample(t, kk, res, offset_index))
            continue
        if kk >= kmax:
            if res is None:
                raise DivergenceSuspected("no finite nu near t = %s" % t)
            raise StoppingRuleUnmet("class of t = %s not resolved by 2^%d" % (t, kmax))
        todo.append((_sym_rep(t, kk + 1), kk + 1))
        todo.append((_sym_rep(t + (1 << kk), kk + 1), kk + 1))
    out.sort(key=lambda s: (s.k, abs(s.t0), s.t0))
    return out


def q_disk_free(ev, depth, refine_cap=24, offset=None, offset_index=0):
    """q over the whole disk t in 2^depth Z2 when nu is bounded there."""
    samples = _constant_cover(ev, 0, depth, depth + refine_cap, offset, offset_index)
    classes = set()
    for s in samples:
        classes |= s.result.classes
    return DiskQResult(classes, "free", samples, [], None, "nu(t0) <= k-3")


def q_disk_centered(ev, depth, n_tors=0, weierstrass_odd=False, level_cap=16,
                    refine_cap=24):
    """q over t in 2^depth Z2 when the image of t = 0 is the origin."""
    m0 = 1 if n_tors == 0 else n_tors + 3
    samples = []
    levels = []
    classes = {0}
    m = depth
    while True:
        ann = _constant_cover(ev, 1 << m, m + 1, m + 1 + refine_cap)
        n_m = max(s.nu for s in ann)
        samples.extend(ann)
        levels.append((m, n_m))
        for s in ann:
            classes |= s.result.classes
        if m >= m0:
            if weierstrass_odd and 3 * m - 2 >= n_m:
                return DiskQResult(classes, "centered", samples, levels, m, "3m-2 >= n_m")
            if 2 * m - 3 >= n_m:
                return DiskQResult(classes, "centered", samples, levels, m, "2m-3 >= n_m")
        m += 1
        if m > depth + level_cap:
            raise StoppingRuleUnmet("no stopping level up to m = %d" % (m - 1))


def q_disk(J, fac, disk, base, Q2, n_tors=0, offsets=(), cap=None, record=False,
           level_cap=16, refine_cap=24):
    """q(i_base(D) + T) over T in {0} + offsets, as one DiskQResult.

    When ``base`` is the centre of the disk the annulus walk is used for
    T = 0 and the free cover for the nonzero offsets; otherwise all pieces
    use the free cover.
    """
    ev = DiskEvaluator(J, fac, disk, base, Q2, cap, record)
    centered = _is_center(disk, base, Q2)
    if centered:
        main = q_disk_centered(ev, disk.depth, n_tors, disk.weierstrass_odd(),
                               level_cap, refine_cap)
    else:
        main = q_disk_free(ev, disk.depth, refine_cap)
    classes = set(main.classes)
    samples = list(main.samples)
    for idx, T in enumerate(offsets, start=1):
        extra = q_disk_free(ev, disk.depth, refine_cap, T, idx)
        classes |= extra.classes
        samples.extend(extra.samples)
    return DiskQResult(classes, main.mode, samples, main.levels, main.stop_level, main.rule)


def _is_center(disk, base, Q2):
    if disk.kind == "inf":
        return base.is_infinity()
    if base.is_infinity():
        return False
    c = disk.center(Q2)
    try:
        return (c.x - base.x).is_zero() and (c.y - base.y).is_zero()
    except KernelError:
        return False


def pi_image_disk(J, fac, disk, base, Q2):
    """The set of classes pi(i_base(P)) for P in the disk (no halving).

    pi is constant on t0 + 8 Z2, so the classes t mod 8 cover the disk.
    """
    k = max(disk.depth, 3)
    out = {}
    for r in range(0, 1 << k, 1 << disk.depth):
        t = _sym_rep(r, k)
        P = J.embed_point(disk.point(Fraction(t), Q2), base)
        out[t] = mu_bits(J, fac, P)
    return out


def base_point(P, Q2):
    if P.is_infinity():
        return CurvePoint.infinity()
    return CurvePoint(Q2(P.x), Q2(P.y))

"""Independent re-verification of certificates.

Nothing from the prover's disk walk, sample splitting, congruence solving
or F2 elimination is reused.  The checks here are:

* S is recomputed by brute force over all generator combinations, using
  exact rational square roots for the norm condition, and r is injective
  on S by listing all images;
* pieces tile every residue disk, and every known point sits alone in a
  piece centred at it;
* excluded pieces: the recorded samples cover the piece modulo 8 and
  their classes (recomputed) avoid r(S);
* determined pieces: samples tile the annuli, nu <= k - 3 on each sample,
  the stopping inequality holds, every halving-trail edge satisfies
  2 * child = parent under Cantor addition, every node's class is
  recomputed, and the classes met in r(S) come from torsion.
"""

import math
from fractions import Fraction

from .certify import CERTIFICATE_SCHEMA
from .etale import mu_tilde
from .fields import parse_q2
from .mumford import CurvePoint, MumfordPoint, ResidueDisk, model_point, parse_point
from .poly import Poly
from .problem import Problem, point_json, sha256_of


class Report:
    def __init__(self):
        self.failures = []
        self.checks = 0

    def check(self, cond, msg):
        self.checks += 1
        if not cond:
            self.failures.append(msg)
        return cond

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {"ok": self.ok, "checks": self.checks, "failures": self.failures}


def _bits_of(s):
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def _v2(r):
    r = Fraction(r)
    if r == 0:
        return 10 ** 9
    n, d = r.numerator, r.denominator
    return ((n & -n).bit_length() - 1) - ((d & -d).bit_length() - 1)


def _is_rational_square(r):
    r = Fraction(r)
    if r < 0:
        return False
    a, b = math.isqrt(r.numerator), math.isqrt(r.denominator)
    return a * a == r.numerator and b * b == r.denominator


def _span(vectors):
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def _class_of(problem, vals):
    return problem.fac.class_bits(vals)


def _embed_direct(problem, g):
    """xi(theta_j) by summing c_i theta^i (not Horner)."""
    out = []
    for F in problem.fac.factors:
        acc = F.field.from_rational(0)
        for i, c in enumerate(g.c):
            if c:
                acc = acc + F.field.from_rational(c) * F.theta ** i
        out.append(acc)
    return tuple(out)


def _mu_class(problem, a):
    if a.degree() == 0:
        return 0
    return _class_of(problem, mu_tilde(a, problem.fac))


def _parse_pair(problem, node):
    Q2 = problem.Q2
    a = Poly(Q2, [parse_q2(s, Q2) for s in node["a"]])
    b = Poly(Q2, [parse_q2(s, Q2) for s in node["b"]])
    return MumfordPoint(a, b)


def _same_point(P, Q):
    if P.a.degree() != Q.a.degree():
        return False
    return (P.a - Q.a).is_zero() and (P.b - Q.b).is_zero()


# --------------------------------------------------------------------------


def verify_certificate(doc, cert, directory=None):
    rep = Report()
    rep.check(cert.get("schema") == CERTIFICATE_SCHEMA, "certificate schema")
    rep.check(cert["problem"]["sha256"] == sha256_of(doc), "problem hash differs")
    problem = Problem(doc, directory, cert["environment"]["precision_bits"])
    sel = cert["selmer"]
    n = len(problem.selmer.generators)

    # S by brute force
    norms = problem.selmer.norms
    lf = problem.selmer.local_filter
    local_span = None
    if lf is not None:
        local_span = _span([sum((int(b) & 1) << i for i, b in enumerate(v))
                            for v in lf["local_image_basis"]])
        coords = [sum((int(b) & 1) << i for i, b in enumerate(v))
                  for v in lf["generator_coordinates"]]
    admissible = set()
    for combo in range(1 << n):
        ok = True
        if problem.selmer.norm_square_filter:
            N = Fraction(1)
            for i in range(n):
                if (combo >> i) & 1:
                    N *= norms[i]
            ok = _is_rational_square(N)
        if ok and local_span is not None:
            v = 0
            for i in range(n):
                if (combo >> i) & 1:
                    v ^= coords[i]
            ok = v in local_span
        if ok:
            admissible.add(combo)
    basis = [_bits_of(s) for s in sel["subgroup_basis"]]
    rep.check(_span(basis) == admissible, "recorded basis of S does not span the admissible set")
    gen_imgs = [_class_of(problem, _embed_direct(problem, g)) for g in problem.selmer.generators]
    imgs = []
    for combo in basis:
        v = 0
        for i in range(n):
            if (combo >> i) & 1:
                v ^= gen_imgs[i]
        imgs.append(v)
    rep.check([_bits_of(s) for s in sel["subgroup_images"]] == imgs, "images of S differ")
    S_set = _span(imgs)
    injective = len(S_set) == 1 << len(imgs)
    rep.check(injective == (sel["kernel_dimension"] == 0), "kernel dimension claim")

    # torsion
    group = problem.torsion_group()
    R = {_mu_class(problem, problem.to_local(T).a) if not T.is_zero() else 0 for T in group}
    rep.check(sorted(R) == sorted(_bits_of(s) for s in cert["torsion"]["classes"]),
              "torsion classes differ")
    n_tors = cert["torsion"]["local_torsion_level"]
    if len(problem.fac.factors) == 1:
        # odd degree and f irreducible over Q2: J(Q2)[2] is trivial
        rep.check(n_tors == 0, "local torsion level must be 0")
    m0 = 1 if n_tors == 0 else n_tors + 3

    verdict = cert["verdict"]
    if verdict["kind"] != "POINTS_DETERMINED":
        return rep
    rep.check(injective, "POINTS_DETERMINED with non-injective S")

    # known points in r(S)
    inf = CurvePoint.infinity()
    for P in problem.model_known():
        Pl = problem.J.embed_point(_to_q2(P, problem.Q2), inf)
        rep.check(_mu_class(problem, Pl.a) in S_set, "known point outside r(S)")

    # pieces tile the disks
    records = cert["disks"]
    exclude = set(problem.options.get("exclude_disks", []))
    known = problem.model_known()
    claimed = []
    for disk in problem.witness.disks():
        mine = [r for r in records if r["piece"]["disk"] == disk.label]
        inside = [P for P in known if disk.contains_rational(P)]
        if disk.label in exclude:
            rep.check(len(mine) == 1 and mine[0]["status"] == "EXCLUDED-BY-SCOPE",
                      "scope record for %s" % disk.label)
            continue
        pieces = [(int(r["piece"]["t0"]), r["piece"]["modulus_exponent"]) for r in mine]
        rep.check(_tiles(pieces, 0, disk.depth), "pieces do not tile disk %s" % disk.label)
        for r in mine:
            t0, k = int(r["piece"]["t0"]), r["piece"]["modulus_exponent"]
            members = [P for P in inside if _in_piece(disk, P, t0, k)]
            if r["status"] == "EXCLUDED":
                rep.check(not members, "excluded piece holds a known point")
                _check_excluded(problem, disk, t0, k, r, S_set, rep)
            elif r["status"] == "DETERMINED":
                P0 = model_point(problem.curve, parse_point(r["known_point"]))
                rep.check(len(members) == 1 and _same_rational(members[0], P0),
                          "determined piece must hold exactly its centre")
                if problem.torsion:
                    rep.check(k >= 2, "pieces must have depth >= 2 with rational 2-torsion")
                _check_determined(problem, disk, t0, k, P0, r, S_set, R, m0, group, rep)
                claimed.append(r["known_point"])
            else:
                rep.check(False, "piece with status %s in a determined certificate" % r["status"])
    scoped = [d for d in problem.witness.disks() if d.label in exclude]
    expected = [point_json(problem.curve, P) for P in problem.known
                if not any(d.contains_rational(model_point(problem.curve, P)) for d in scoped)]
    rep.check(sorted(claimed, key=repr) == sorted(expected, key=repr)
              and sorted(verdict["points"], key=repr) == sorted(expected, key=repr),
              "claimed point set")
    return rep


def _same_rational(P, Q):
    if P.is_infinity() or Q.is_infinity():
        return P.is_infinity() and Q.is_infinity()
    return P.x == Q.x and P.y == Q.y


def _to_q2(P, Q2):
    if P.is_infinity():
        return P
    return CurvePoint(Q2(P.x), Q2(P.y))


def _in_piece(disk, P, t0, k):
    if not disk.contains_rational(P):
        return False
    return k == disk.depth or _v2(disk.param_of(P) - t0) >= k


def _tiles(pieces, t0, k):
    """Whether the classes t + 2^kk Z2 partition t0 + 2^k Z2."""
    total = Fraction(0)
    for t, kk in pieces:
        if kk < k or (t - t0) % (1 << k):
            return False
        total += Fraction(1, 1 << kk)
    if total != Fraction(1, 1 << k):
        return False
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            (a, ka), (b, kb) = pieces[i], pieces[j]
            if (a - b) % (1 << min(ka, kb)) == 0:
                return False
    return True


def _check_excluded(problem, disk, t0, k, r, S_set, rep):
    K = max(k, 3)
    samples = r["pi_image"]
    want = {(t0 + i * (1 << k)) % (1 << K) for i in range(1 << (K - k))}
    got = {int(s["t"]) % (1 << K) for s in samples if s["modulus_exponent"] == K}
    rep.check(want == got and len(samples) == len(want), "pi samples do not cover the piece")
    inf = CurvePoint.infinity()
    for s in samples:
        P = problem.J.embed_point(disk.point(Fraction(int(s["t"])), problem.Q2), inf)
        c = _mu_class(problem, P.a)
        rep.check(c == _bits_of(s["class"]), "pi class differs at t=%s" % s["t"])
        rep.check(c not in S_set, "excluded piece meets r(S)")


def _check_determined(problem, disk, t0, k, P0, r, S_set, R, m0, group, rep):
    cen = r["centre"]
    rep.check(cen["depth"] == k, "centre depth")
    if disk.kind == "inf":
        rep.check(P0.is_infinity() and t0 % (1 << k) == 0, "disk at infinity centred at infinity")
        sub = ResidueDisk(disk.witness, "inf", None, None, k, disk.label)
    else:
        rep.check(Fraction(cen["x0"]) == P0.x and cen["ybar"] == disk.ybar, "centre data")
        sub = ResidueDisk(disk.witness, "affine", P0.x, disk.ybar, k, cen["label"])
    q = r["q"]
    samples = q["samples"]
    base = _to_q2(P0, problem.Q2)
    classes = {0}
    offsets = {}
    for s in samples:
        offsets.setdefault(s.get("torsion_offset", 0), []).append(s)
    main = offsets.get(0, [])
    rep.check(q["mode"] == "centered", "determined pieces use the centred walk")
    levels = q["levels"]
    ms = [lv["m"] for lv in levels]
    rep.check(ms == list(range(k, k + len(ms))), "annulus levels must be consecutive from the depth")
    covered = []
    for lv in levels:
        m = lv["m"]
        ann = [s for s in main if _v2(int(s["t"])) == m]
        pieces = [(int(s["t"]), s["modulus_exponent"]) for s in ann]
        rep.check(_tiles_annulus(pieces, m), "annulus m=%d not tiled" % m)
        rep.check(lv["n_m"] == max(s["nu"] for s in ann), "n_m at m=%d" % m)
        covered += ann
    rep.check(len(covered) == len(main), "samples outside the recorded annuli")
    stop = q["stop_level"]
    rep.check(stop == ms[-1] and stop >= m0, "stop level")
    n_stop = levels[-1]["n_m"]
    ok_rule = 2 * stop - 3 >= n_stop or (disk.kind == "inf" and 3 * stop - 2 >= n_stop)
    rep.check(ok_rule, "stopping inequality fails at m=%d" % stop)
    for idx, ss in offsets.items():
        if idx:
            pieces = [(int(s["t"]), s["modulus_exponent"]) for s in ss]
            rep.check(_tiles(pieces, 0, k), "offset %d samples do not tile the piece" % idx)
    rep.check(set(offsets) == set(range(len(group))), "every torsion offset must be sampled")
    nhalves = 1 << (len(problem.fac.factors) - 1)
    for s in samples:
        rep.check(s["nu"] <= s["modulus_exponent"] - 3, "nu bound at t=%s" % s["t"])
        t = Fraction(int(s["t"]))
        P = problem.J.embed_point(sub.point(t, problem.Q2), base)
        idx = s.get("torsion_offset", 0)
        if idx:
            P = problem.J.add(P, problem.to_local(group[idx]))
        got = _check_trail(problem, P, s, nhalves, rep)
        rep.check(got == {_bits_of(c) for c in s["classes"]}, "sample classes at t=%s" % s["t"])
        classes |= got
    rep.check(classes == {_bits_of(c) for c in q["classes"]}, "q-set differs")
    hits = {c for c in classes if c in S_set}
    rep.check(hits == {_bits_of(c) for c in r["selmer_hits"]}, "selmer hits differ")
    rep.check(hits <= R, "q-set meets r(S) outside the torsion image")


def _tiles_annulus(pieces, m):
    """Whether the classes partition {t : v(t) = m}."""
    return _tiles(pieces, 1 << m, m + 1)


def _check_trail(problem, P, sample, nhalves, rep):
    trail = sample.get("trail")
    if not rep.check(trail, "missing halving trail"):
        return set()
    J = problem.J
    nodes = [_parse_pair(problem, e) for e in trail]
    rep.check(trail[0]["level"] == 0 and trail[0]["parent"] is None, "trail root")
    rep.check(_same_point(nodes[0], P), "trail root is not the sampled point")
    children = {}
    for i, e in enumerate(trail[1:], start=1):
        p = e["parent"]
        children.setdefault(p, []).append(i)
        rep.check(e["level"] == trail[p]["level"] + 1, "trail level")
        rep.check(_same_point(J.double(nodes[i]), nodes[p]), "2 * half != parent in trail")
    classes = set()
    for i, e in enumerate(trail):
        c = 0 if nodes[i].is_zero() else _mu_class(problem, nodes[i].a)
        rep.check(c == _bits_of(e["class"]), "trail class")
        classes.add(c)
        kids = children.get(i, [])
        if c:
            rep.check(not kids, "a node with nontrivial class was halved")
        else:
            rep.check(len(kids) == nhalves, "a divisible node must have |J(Q2)[2]| halves")
            for a in range(len(kids)):
                for b in range(a + 1, len(kids)):
                    rep.check(not _same_point(nodes[kids[a]], nodes[kids[b]]), "repeated half")
    rep.check(max(e["level"] for e in trail) == sample["nu"], "nu differs from trail depth")
    return classes

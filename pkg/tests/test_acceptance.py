"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from chab2.certify import certify_curve, dump_certificate
from chab2.criteria import PureFamily, ex_substeps, flt_criterion, z_set, zprime_set
from chab2.fields import FiniteField, LocalField
from chab2.halving import halve_all
from chab2.oracle import JacobianOracle, halving_equivalence, random_curve
from chab2.problem import Problem, load_problem
from chab2.qmap import DiskEvaluator, base_point, q_disk
from chab2.squareclass import sc_basis, sc_decompose
from chab2.verify import verify_certificate

PROBLEMS = ["flt5", "flt7", "gfe7", "gfe11", "gfe13", "ex21"]


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print("\n%s %s: %s" % (tag, "PASS" if ok else "FAIL", detail))
    return emit


def test_ac1_z_set_matches_closed_form(report):
    times = {}
    ok = True
    for l in (5, 7, 9, 11, 13):
        start = time.perf_counter()
        res = z_set(l)
        times[l] = time.perf_counter() - start
        fam = PureFamily(l)
        closed = {fam.product_class([l + 2]), fam.product_class([2 * l - 1]),
                  fam.product_class([l + (1 << k) for k in range(1, 8)])}
        ok &= res["agree"] and set(res["_bits"]) == closed and times[l] < 60
    report("AC1", ok, "z_set l=5..13, seconds %s" % {l: round(t, 1) for l, t in times.items()})
    assert ok


def test_ac2_image_sets_for_twisted_family(report):
    ok = True
    flags = {}
    for l in (7, 9, 11):
        res = zprime_set(l)
        sets, named = res["image_sets"], res["named"]
        zero = "0" * len(named["sigma"])
        ok &= sets["infinity_from_infinity"] == sorted([zero, named["1+lambda^(2l-1)"]])
        ok &= sets["d11_from_infinity"] == sets["d11_from_infinity_closed_form"]
        centred = set(sets["d11_centred"])
        ok &= {zero, named["1+lambda^(l+2)/(1+lambda^2)"]} <= centred
        ok &= centred == {zero, named["1+lambda^(l+2)/(1+lambda^2)"], named["sigma"],
                          named["sigma_prime"]}
        flags[l] = (res["sigma_equals_sigma_prime"], res["product_formula_agrees"])
    report("AC2", ok, "l -> (sigma == sigma', product formula agrees): %s" % flags)
    assert ok


def test_ac3_gfe_end_to_end(report):
    want = ["inf", ["1", "1"], ["1", "-1"]]
    results = {}
    for p in (7, 11, 13):
        doc = load_problem("gfe%d" % p)
        cert = certify_curve(doc)
        results[p] = (cert["verdict"].get("points") == want
                      and "53" in cert["metadata"]["scope_note"]
                      and verify_certificate(doc, cert).ok)
    ok = all(results.values())
    report("AC3", ok, "5y^2 = 4x^p + 1 determined and re-verified: %s" % results)
    assert ok


def test_ac4_flt_criterion(report):
    verdicts = {p: flt_criterion(p)["verdict"] for p in (5, 7)}
    w = flt_criterion(1093)
    ok = verdicts == {5: "HOLDS", 7: "HOLDS"} and w["verdict"] == "FAILS" \
        and w["failed_condition"] == 1
    report("AC4", ok, "%s; p=1093 %s(%d)" % (verdicts, w["verdict"], w["failed_condition"]))
    assert ok


def test_ac5_degree_21_substeps(report):
    res = ex_substeps()
    ok = (res["x_2_mod_4"]["excluded"]
          and all(s["nu_is_1"] for n in res["nu_checks"] for s in n["samples"])
          and res["p4_relation"]["confirmed"])
    report("AC5", ok, "x=2 mod 4 excluded, nu=1 at phi(+-4), P4+6gamma in 8J with "
           "sc(Q) outside <gamma>: %s" % res["all_confirmed"])
    assert ok and res["all_confirmed"]


def test_ac5_optional_full_degree_21_certificate(report):
    doc = load_problem("ex21")
    cert = certify_curve(doc)
    ok = cert["verdict"]["kind"] == "POINTS_DETERMINED" and verify_certificate(doc, cert).ok
    report("AC5-optional", ok, "full certificate outside the disk at infinity, %d points"
           % len(cert["verdict"].get("points", [])))
    assert ok


def test_ac6_halving_oracle_equivalence(report):
    total, bad, divisible = 0, 0, 0
    for q in (3, 5, 7, 9, 11, 13):
        for g in (1, 2):
            res = halving_equivalence(q, g, 45, seed=100 * q + g)
            total += res["trials"]
            divisible += res["divisible"]
            bad += len(res["mismatches"])
    ok = total >= 500 and bad == 0
    report("AC6", ok, "%d instances (%d divisible), %d mismatches" % (total, divisible, bad))
    assert ok


DESCRIPTORS = [
    ([-2, 1], None), ([2, 1], None), ([-6, 1], None), ([2, 2, 1], None), ([-2, 0, 1], None),
    ([6, 4, 1], None), ([2, 0, 0, 1], None), ([-2, 0, 0, 1], None), ([2, 2, 2, 1], None),
    ([2, 0, 0, 0, 1], None), ([-2, 0, 0, 0, 0, 1], None), ([2, 0, 2, 0, 0, 1], None),
    ([-2] + [0] * 6 + [1], None), ([-2] + [0] * 8 + [1], None), ([-2] + [0] * 10 + [1], None),
    ([-2, 1], [1, 1, 1]), ([[2, 0], [0, 0], [1, 0]], [1, 1, 1]),
    ([[0, 2], [0, 0], [1, 0]], [1, 1, 1]), ([-2, 1], [1, 1, 0, 1]),
    ([-2, 0, 0, 1], [1, 1, 1]), ([-2] + [0] * 20 + [1], None),
]


def _random_unit(F, rng):
    coords = [rng.randrange(-(1 << 12), 1 << 12) for _ in range(F.n)]
    coords[0] |= 1
    return F.from_coords(coords) * F.gen() ** rng.randrange(3)


def test_ac7_property_suites(report):
    rng = random.Random(7)
    parts = {}

    dims = [sc_basis(LocalField(e, u)).dim == LocalField(e, u).n + 2 for e, u in DESCRIPTORS]
    parts["dimension"] = (all(dims), len(dims))

    pairs, good = 0, True
    fields = [LocalField(*DESCRIPTORS[i]) for i in (0, 7, 10, 15)]
    for F in fields:
        for _ in range(250):
            x, y = _random_unit(F, rng), _random_unit(F, rng)
            good &= sc_decompose(x * y) == sc_decompose(x) + sc_decompose(y)
            pairs += 1
    parts["sc homomorphism"] = (good, pairs)

    good, curves, witnesses = True, 0, 0
    for q in (3, 5, 7, 9, 11, 13):
        for g in (1, 2):
            orc = JacobianOracle(random_curve(FiniteField(q), g, random.Random(q * 31 + g)))
            n = len(orc)
            mu = [orc.mu(i) for i in range(n)]
            for i in range(n):
                for j in range(i, n):
                    good &= mu[orc.add(i, j)] == mu[i] ^ mu[j]
            good &= {i for i in range(n) if mu[i] == 0} == set(orc.doubling())
            for i in set(orc.doubling()):
                wits = []
                halve_all(orc.J, orc.fac, orc.points[i], witnesses=wits)
                for w in wits:
                    good &= w.relation_residual().is_zero()
                    witnesses += 1
            curves += 1
    parts["mu homomorphism, ker mu = 2J, E:rel"] = (good, "%d curves, %d witnesses"
                                                    % (curves, witnesses))

    good, samples = True, 0
    for name in PROBLEMS:
        problem = Problem(load_problem(name))
        J, fac, Q2 = problem.J, problem.fac, problem.Q2
        exclude = set(problem.options.get("exclude_disks", []))
        for d in problem.witness.disks():
            if d.label in exclude:
                continue
            inside = [P for P in problem.model_known() if d.contains_rational(P)]
            if len(inside) == 1:
                around = [(d, inside[0])]
            else:
                # several known points: the depth-2 disks around each of them
                around = [(d.subdisk(P.x - d.x0, 2), P) for P in inside]
            for disk, P in around:
                base = base_point(P, Q2)
                res = q_disk(J, fac, disk, base, Q2)
                ev = DiskEvaluator(J, fac, disk, base, Q2)
                for s in res.samples:
                    deeper = ev.q(s.t0 + Fraction(1 << s.k))
                    good &= deeper.classes == s.result.classes and s.nu <= s.k - 3
                    samples += 1
    parts["q_disk stability"] = (good, "%d samples" % samples)

    ok = all(v[0] for v in parts.values())
    report("AC7", ok, "; ".join("%s %s (%s)" % (k, "ok" if v[0] else "BROKEN", v[1])
                                for k, v in parts.items()))
    assert ok


def test_ac8_determinism_across_threads(report):
    same = {}
    for name in PROBLEMS:
        doc = load_problem(name)
        one = dump_certificate(certify_curve(doc, threads=1))
        four = dump_certificate(certify_curve(doc, threads=4))
        same[name] = one == four
    ok = all(same.values())
    report("AC8", ok, "byte-identical certificates for --threads 1 and 4: %s" % same)
    assert ok

import random
from fractions import Fraction

import pytest

from chab2.errors import DivergenceSuspected
from chab2.fields import FiniteField
from chab2.halving import halve_all, is_divisible
from chab2.oracle import JacobianOracle, halving_equivalence, random_curve
from chab2.problem import Problem, load_problem
from chab2.qmap import DiskEvaluator, base_point, mu_bits, q_disk, q_point


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
@pytest.mark.parametrize("g", [1, 2])
def test_halving_matches_doubling_table(q, g):
    res = halving_equivalence(q, g, 30, seed=q * 7 + g)
    assert res["trials"] == 30
    assert res["mismatches"] == []


@pytest.mark.parametrize("q,g", [(5, 2), (7, 2), (9, 1), (11, 2)])
def test_relation_identity_on_every_witness(q, g):
    F = FiniteField(q)
    orc = JacobianOracle(random_curve(F, g, random.Random(q + g)))
    seen = 0
    for i in set(orc.doubling()):
        wits = []
        halve_all(orc.J, orc.fac, orc.points[i], witnesses=wits)
        for w in wits:
            assert w.relation_residual().is_zero()
            assert orc.J.equal(orc.J.double(w.Q), w.P)
            seen += 1
    assert seen > 0


@pytest.mark.parametrize("q,g", [(3, 2), (5, 1), (7, 2), (13, 1)])
def test_q_point_against_oracle(q, g):
    F = FiniteField(q)
    orc = JacobianOracle(random_curve(F, g, random.Random(3 * q + g)))
    for i in range(len(orc)):
        nu = orc.nu(i)
        P = orc.points[i]
        if nu is None:
            with pytest.raises(DivergenceSuspected):
                q_point(orc.J, orc.fac, P, cap=12)
            continue
        res = q_point(orc.J, orc.fac, P, cap=12)
        assert res.nu == nu
        assert res.classes == orc.q_set(i)
        assert is_divisible(orc.J, orc.fac, P) == (mu_bits(orc.J, orc.fac, P) == 0)


SHIPPED = ["flt5", "flt7", "gfe7", "gfe11", "gfe13"]


@pytest.mark.parametrize("name", SHIPPED)
def test_q_disk_stable_under_deeper_sampling(name):
    problem = Problem(load_problem(name))
    J, fac, Q2 = problem.J, problem.fac, problem.Q2
    for d in problem.witness.disks():
        inside = [P for P in problem.model_known() if d.contains_rational(P)]
        base = base_point(inside[0], Q2) if inside else base_point(problem.model_known()[0], Q2)
        res = q_disk(J, fac, d, base, Q2)
        ev = DiskEvaluator(J, fac, d, base, Q2)
        for s in res.samples:
            assert s.nu <= s.k - 3
            for j in (1, 2, 3):
                t = s.t0 + j * Fraction(1 << s.k)
                deeper = ev.q(t)
                assert deeper.classes == s.result.classes
                assert deeper.nu == s.nu

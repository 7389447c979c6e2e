import copy
import json

import jsonschema
import pytest

from chab2.certify import certify_curve, dump_certificate
from chab2.cli import load_schema
from chab2.errors import FixtureMissing, InputError
from chab2.problem import Problem, load_problem
from chab2.verify import verify_certificate

FAST = ["flt5", "flt7", "gfe7"]


@pytest.fixture(scope="module")
def certs():
    return {name: certify_curve(load_problem(name)) for name in FAST}


@pytest.mark.parametrize("name", FAST)
def test_certificate_is_schema_valid_and_verifies(certs, name):
    cert = certs[name]
    jsonschema.validate(cert, load_schema("certificate"))
    assert cert["verdict"]["kind"] == "POINTS_DETERMINED"
    again = json.loads(dump_certificate(cert))
    report = verify_certificate(load_problem(name), again)
    assert report.ok, report.failures


def test_flt5_points_and_disks(certs):
    cert = certs["flt5"]
    assert cert["verdict"]["points"] == ["inf", ["0", "1"], ["0", "-1"]]
    assert {r["status"] for r in cert["disks"]} == {"DETERMINED"}
    assert cert["selmer"]["kernel_dimension"] == 0


def test_dump_is_deterministic(certs):
    fresh = certify_curve(load_problem("flt5"))
    assert dump_certificate(fresh) == dump_certificate(certs["flt5"])


def _tamper(cert, fn):
    c = copy.deepcopy(cert)
    fn(c)
    return c


def _flip(bits):
    return ("1" if bits[0] == "0" else "0") + bits[1:]


TAMPERS = {
    "verdict point dropped": lambda c: c["verdict"]["points"].pop(),
    "subgroup image flipped": lambda c: c["selmer"]["subgroup_images"].__setitem__(
        0, _flip(c["selmer"]["subgroup_images"][0])),
    "disk record removed": lambda c: c["disks"].pop(),
    "q class altered": lambda c: c["disks"][0]["q"]["classes"].append(
        "1" * len(c["disks"][0]["q"]["classes"][0])),
    "sample nu raised": lambda c: c["disks"][0]["q"]["samples"][0].__setitem__(
        "nu", c["disks"][0]["q"]["samples"][0]["modulus_exponent"]),
    "problem hash changed": lambda c: c["problem"].__setitem__("sha256", "0" * 64),
}


@pytest.mark.parametrize("what", sorted(TAMPERS))
def test_verifier_rejects_tampering(certs, what):
    bad = _tamper(certs["flt5"], TAMPERS[what])
    assert not verify_certificate(load_problem("flt5"), bad).ok


def test_missing_known_point_fails():
    doc = load_problem("flt5")
    doc["known_points"] = ["inf", ["0", "1"]]
    cert = certify_curve(doc)
    assert cert["verdict"]["kind"] == "FAIL"
    # the disk around (0,-1) now has no known point and its pi-image meets r(S)
    assert cert["verdict"]["step"] == "selmer-set"


def test_enlarging_s_never_creates_success():
    # a redundant generator makes r non-injective; the run must FAIL, not widen the claim
    doc = load_problem("flt5")
    doc["selmer"]["extra_generators"].append(doc["selmer"]["extra_generators"][0])
    cert = certify_curve(doc)
    assert cert["verdict"] == {"kind": "FAIL", "step": "injectivity",
                               "reason": "S -> L2 square classes has a kernel of dimension 1"}


def test_strict_mode_turns_scope_exclusion_into_fail():
    doc = load_problem("flt5")
    doc["options"] = {"exclude_disks": ["inf"]}
    loose = certify_curve(doc)
    assert loose["verdict"]["kind"] == "POINTS_DETERMINED"
    assert loose["verdict"]["excluded_by_scope"] == ["inf"]
    assert "inf" not in loose["verdict"]["points"]
    assert verify_certificate(doc, loose).ok
    strict = certify_curve(doc, strict=True)
    assert strict["verdict"]["step"] == "scope"


def test_refinement_cap():
    doc = load_problem("ex21")
    doc["options"]["refinement_cap"] = 0     # (1,1) and (-1,1) share a disk
    cert = certify_curve(doc)
    assert cert["verdict"] == {"kind": "FAIL", "step": "refinement",
                               "reason": "refinement-exhausted on disk (1,0)"}


def test_threads_do_not_change_output(certs):
    par = certify_curve(load_problem("gfe7"), threads=3)
    assert dump_certificate(par) == dump_certificate(certs["gfe7"])


def test_problem_validation():
    doc = load_problem("flt5")
    doc["known_points"].append(["0", "1"])
    with pytest.raises(InputError):
        Problem(doc)
    doc = load_problem("flt5")
    doc["known_points"].append(["1", "1"])
    with pytest.raises(InputError):
        Problem(doc)
    doc = load_problem("flt5")
    doc["selmer"]["fixture"] = "gfe_p7_selmer.json"
    with pytest.raises(InputError):
        Problem(doc)
    doc = load_problem("flt5")
    doc["selmer"]["fixture"] = "flt_p999_units.json"
    with pytest.raises(FixtureMissing):
        Problem(doc)
    doc = load_problem("flt5")
    doc["torsion_2primary"] = [{"a": ["0", "1"], "b": ["1"], "order": 2}]
    with pytest.raises(InputError):
        Problem(doc)

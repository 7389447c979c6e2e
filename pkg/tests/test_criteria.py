import copy

import pytest

from chab2.criteria import PureFamily, flt_criterion, gfe_criterion, z_set, zprime_set
from chab2.errors import FixtureMissing, InputError
from chab2.problem import load_fixture


def test_z_set_l5_classes():
    res = z_set(5)
    assert res["agree"]
    # bit i is the i-th basis vector: lambda, 1+lambda, 1+lambda^3, ..., top
    assert res["closed_form"] == {"1+lambda^(l+2)": "0000100",
                                  "1+lambda^(2l-1)": "0000010",
                                  "prod_k 1+lambda^(l+2^k)": "0000110"}
    assert res["classes"] == sorted(res["closed_form"].values())


def test_z_set_rejects_even_exponent():
    with pytest.raises(InputError):
        z_set(6)


def test_zprime_set_l7():
    res = zprime_set(7)
    assert res["sigma_equals_sigma_prime"]
    assert res["product_formula_agrees"]
    assert res["ratio_identity"]
    sets = res["image_sets"]
    assert sets["infinity_from_infinity"] == sorted(["000000000", res["named"]["1+lambda^(2l-1)"]])
    assert sets["d11_from_infinity"] == sets["d11_from_infinity_closed_form"]
    assert len(res["classes"]) == 3


def test_lambda_powers_in_theta():
    fam = PureFamily(7)
    # 8 theta^4 = lambda^13 because theta = -lambda^-2 and 8 = lambda^21
    th = fam.fac.factors[0].theta
    assert (fam.K(8) * th ** 4 - fam.lam(13)).is_zero()


def test_flt_wieferich_guard_runs_before_fixture_lookup(tmp_path):
    res = flt_criterion(1093, directory=str(tmp_path))
    assert res["verdict"] == "FAILS"
    assert res["failed_condition"] == 1
    assert len(res["conditions"]) == 1


def test_flt_missing_fixture(tmp_path):
    with pytest.raises(FixtureMissing):
        flt_criterion(11, directory=str(tmp_path))


def test_flt_even_class_number_fails():
    fx, _ = load_fixture("flt_p5_units.json")
    fx = dict(fx, class_number="2")
    res = flt_criterion(5, fixture=fx)
    assert (res["verdict"], res["failed_condition"]) == ("FAILS", 2)


def test_flt_holds_for_5():
    res = flt_criterion(5)
    assert res["verdict"] == "HOLDS"
    assert res["conditions"][2]["meets"] == []


def test_gfe_mutated_fixture_fails_condition_2():
    fx, _ = load_fixture("gfe_p7_selmer.json")
    bad = copy.deepcopy(fx)
    # 1 + 8 theta^4 maps to 1 + lambda^13, one of the classes in Z'
    bad["generators"].append(["1", "0", "0", "0", "8"])
    bad["filter"]["generator_coordinates"].append([0] * len(fx["filter"]["generator_coordinates"][0]))
    res = gfe_criterion(7, fixture=bad)
    assert res["verdict"] == "FAILS"
    assert res["failed_condition"] == 2
    assert res["conditions"][-1]["meets"] == ["000000010"]


def test_gfe_rejects_small_primes():
    with pytest.raises(InputError):
        gfe_criterion(5)

"""Write the shipped problem documents into src/chab2/data/problems."""

import json
import os
import sys

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "chab2", "data", "problems")


def pure_field(l):
    return {"factors": [{"field": {"eisenstein": ["-2"] + ["0"] * (l - 1) + ["1"]},
                         "theta": {"num": ["-1"], "den": ["0", "0", "1"]},
                         "certificate": "generator"}]}


def mono(l, lead, const="1"):
    c = ["0"] * (l + 1)
    c[0], c[l] = const, lead
    return c


def flt(l):
    g = (l - 1) // 2
    lam = ["0"] * (g + 1)
    lam[g] = "2" if g % 2 == 0 else "-2"   # 2^(1/l) = 2 (-theta)^g
    return {
        "schema": "chab2.problem/1",
        "name": "flt%d" % l,
        "curve": {"f": mono(l, "4"), "twist": "1"},
        "reduction": {"h": ["1"], "k": mono(l, "1", "0")},
        "local_factorization": pure_field(l),
        "selmer": {"fixture": "flt_p%d_units.json" % l, "extra_generators": [lam],
                   "norm_square_filter": True},
        "torsion_2primary": [],
        "known_points": ["inf", ["0", "1"], ["0", "-1"]],
        "precision": 64,
        "metadata": {"family": "y^2 = 4x^p + 1",
                     "selmer_note": "S is generated by the global units and 2^(1/p); "
                                    "this contains the Selmer image when the class number is odd "
                                    "and p^2 does not divide 2^(p-1) - 1"},
    }


def gfe(l):
    return {
        "schema": "chab2.problem/1",
        "name": "gfe%d" % l,
        "curve": {"f": mono(l, "4"), "twist": "5"},
        "reduction": {"h": ["1"], "k": mono(l, "5")},
        "local_factorization": pure_field(l),
        "selmer": {"fixture": "gfe_p%d_selmer.json" % l, "norm_square_filter": True},
        "torsion_2primary": [],
        "known_points": ["inf", ["1", "1"], ["1", "-1"]],
        "precision": 64,
        "metadata": {"family": "5y^2 = 4x^p + 1",
                     "scope_note": "desk-scale run; exponents up to 53 need fixtures "
                                   "not shipped with the package"},
    }


def ex21():
    f = ["1", "-4"] + ["0"] * 19 + ["4"]
    k = ["0", "-1"] + ["0"] * 19 + ["1"]
    y = "1/%d" % (2 ** 20)
    return {
        "schema": "chab2.problem/1",
        "name": "ex21",
        "curve": {"f": f, "twist": "1"},
        "reduction": {"h": ["1"], "k": k},
        "local_factorization": {"fixture": "ex21_local.json"},
        "selmer": {"fixture": "ex21_units.json", "norm_square_filter": True},
        "torsion_2primary": [],
        "known_points": ["inf", ["0", "1"], ["0", "-1"], ["1", "1"], ["1", "-1"],
                         ["-1", "1"], ["-1", "-1"], ["1/4", y], ["1/4", "-" + y]],
        "precision": 64,
        "options": {"exclude_disks": ["inf"]},
        "metadata": {"family": "y^2 = 4x^21 - 4x + 1 (y' = (y+1)/2 solves y'^2 - y' = x^21 - x)",
                     "scope_note": "the disk at infinity is excluded; the claim covers points "
                                   "with odd denominator in x",
                     "conditional": "unit group computed assuming GRH"},
    }


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else OUT
    os.makedirs(out, exist_ok=True)
    docs = [flt(5), flt(7), gfe(7), gfe(11), gfe(13), ex21()]
    for d in docs:
        with open(os.path.join(out, d["name"] + ".json"), "w") as fh:
            json.dump(d, fh, indent=1, sort_keys=True)
            fh.write("\n")


if __name__ == "__main__":
    main()

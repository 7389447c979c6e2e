"""Generate the global number-field fixtures shipped with the package.

This script needs PARI/GP through ``cypari2`` and is not part of the
runtime.  The kernel re-verifies every structural property it can (norms,
square classes, F2 linear algebra); class numbers, unit groups and the
5-adic data are trusted and carry the provenance block written here.

Usage::

    python tools/gen_fixtures.py OUTDIR [--flt 5 7] [--gfe 7 11 13] [--ex]
"""

import argparse
import json
import os
import time

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)


def _theta_poly(elt_in_alpha, p):
    """Rewrite a polynomial in alpha = 2^(1/p) as a polynomial in theta.

    theta is a root of 4 x^p + 1 and alpha = 2 (-theta)^g with g = (p-1)/2.
    """
    g = (p - 1) // 2
    pari("t_elt = %s" % elt_in_alpha)
    pol = pari("lift(Mod(subst(lift(t_elt), x, 2*(-t)^%d), 4*t^%d+1))" % (g, p))
    return _coeffs(pol, "t")


def _coeffs(pol, var):
    pari("t_pol = %s" % pol)
    deg = int(pari("poldegree(t_pol, %s)" % var))
    out = []
    for i in range(deg + 1):
        c = pari("polcoef(t_pol, %d, %s)" % (i, var))
        out.append(str(c))
    return out


def _provenance(extra):
    prov = {
        "tool": "PARI/GP via cypari2",
        "pari_version": ".".join(str(v) for v in pari.version()),
        "generator": "tools/gen_fixtures.py",
    }
    prov.update(extra)
    return prov


def _certify(bnf_name, budget):
    t0 = time.time()
    try:
        pari.setalarm(budget) if hasattr(pari, "setalarm") else None
        ok = int(pari("bnfcertify(%s)" % bnf_name))
    except Exception as exc:  # alarm or resource failure
        return False, "bnfcertify not completed: %s" % type(exc).__name__
    return bool(ok), "bnfcertify returned %d in %.1fs" % (ok, time.time() - t0)


def flt_fixture(p, certify_budget):
    pari("B = bnfinit(x^%d - 2, 1)" % p)
    h = int(pari("B.no"))
    units = [str(u) for u in pari("[lift(u) | u <- B.fu]")]
    gens = [["-1"]] + [_theta_poly(u, p) for u in units]
    certified, note = _certify("B", certify_budget)
    return {
        "schema": "chab2.fixture.units/1",
        "field": {"defining_poly": _int_coeffs(4, p), "variable": "theta"},
        "class_number": str(h),
        "class_group_cyclic_factors": [str(c) for c in pari("B.cyc")],
        "unit_generators": gens,
        "unit_rank": len(units),
        "provenance": _provenance({
            "command": "bnfinit(x^%d-2,1); units mapped via alpha = 2(-theta)^%d"
                       % (p, (p - 1) // 2),
            "grh_free": certified,
            "certification": note,
        }),
    }


def _int_coeffs(lead, p):
    c = ["0"] * (p + 1)
    c[0] = "1"
    c[p] = str(lead)
    return c


def gfe_fixture(p, certify_budget):
    """Generators of L({5},2) for L = Q(2^(1/p)) plus the 5-adic filter data.

    The curve is 5 y^2 = 4 x^p + 1, modelled as Y^2 = 20 x^p + 5 with
    leading coefficient c = 20.
    """
    g = (p - 1) // 2
    pari("B = bnfinit(x^%d - 2, 1)" % p)
    pari("P5 = idealprimedec(B, 5)")
    pari("SU = bnfsunit(B, P5)")
    h = int(pari("B.no"))
    hS = [str(c) for c in pari("SU[5][2]")]
    units = [str(u) for u in pari("[lift(u) | u <- B.fu]")]
    sunits = [str(u) for u in pari("[lift(nfbasistoalg(B, u)) | u <- SU[1]]")]
    elts = ["-1"] + units + sunits
    # theta as an element of the alpha field: theta = -alpha^(-2)
    pari("TH = lift(-Mod(x,x^%d-2)^(-2))" % p)
    nprimes = int(pari("#P5"))
    layout = [int(pari("P5[%d].f" % (i + 1))) for i in range(nprimes)]

    def coords(elt_str):
        vec = []
        for i in range(nprimes):
            pr = "P5[%d]" % (i + 1)
            v = int(pari("nfeltval(B, %s, %s)" % (elt_str, pr)))
            u = "(%s)/5^%d" % (elt_str, v)
            pari("MP = nfmodprinit(B, %s)" % pr)
            q = 5 ** layout[i]
            chi = int(pari("my(r = nfmodpr(B, %s, MP)); r^%d == 1" % (u, (q - 1) // 2)))
            vec.append(v % 2)
            vec.append(0 if chi else 1)
        return vec

    gen_coords = [coords("Mod(%s, x^%d-2)" % (e, p)) for e in elts]

    # factors of x^p + 1/4 mod 5, matched with the primes above 5
    fac = pari("lift(factormod(x^%d + 4, 5)[,1])" % p)
    factors = [str(fac[i]) for i in range(len(fac))]
    match = []
    for fs in factors:
        val = "subst(%s, x, TH)" % fs
        hits = [i for i in range(nprimes)
                if int(pari("nfeltval(B, Mod(%s, x^%d-2), P5[%d])" % (val, p, i + 1))) >= 1]
        assert len(hits) == 1
        match.append(hits[0])
    assert sorted(match) == list(range(nprimes))

    def mu_torsion(subset):
        # T = [h, 0] with h the product of the chosen monic factors
        vec = [0] * (2 * nprimes)
        degh = sum(int(pari("poldegree(%s)" % factors[j])) for j in subset)
        for i_fac, fs in enumerate(factors):
            i = match[i_fac]
            if i_fac in subset:
                rest = "*".join("subst(%s,x,TH)" % factors[j]
                                for j in range(len(factors)) if j not in subset) or "1"
                elt = "Mod((-20)^%d * (-20) * %s, x^%d-2)" % (degh, rest, p)
            else:
                hv = "*".join("subst(%s,x,TH)" % factors[j] for j in subset) or "1"
                elt = "Mod((-20)^%d * %s, x^%d-2)" % (degh, hv, p)
            c = coords(elt)
            vec[2 * i] = c[2 * i]
            vec[2 * i + 1] = c[2 * i + 1]
        return vec

    image = [mu_torsion([j]) for j in range(len(factors) - 1)]
    rank = int(pari("matrank(Mod(Mat(%s),2))" % _matstr(image))) if image else 0
    assert rank == len(image), "order-4 elements in J(Q_5) not excluded"
    certified, note = _certify("B", certify_budget)
    return {
        "schema": "chab2.fixture.selmer/1",
        "curve": {"f": _gfe_f(p), "twist": "5"},
        "field": {"defining_poly": _int_coeffs(4, p), "variable": "theta"},
        "class_number": str(h),
        "s_class_group_cyclic_factors": hS,
        "generators": [_theta_poly(e, p) for e in elts],
        "filter": {
            "prime": "5",
            "layout": [{"residue_degree": d} for d in layout],
            "coordinates": "per prime above 5: valuation parity, quadratic residue character of the unit part",
            "generator_coordinates": gen_coords,
            "local_image_basis": image,
        },
        "provenance": _provenance({
            "command": "bnfinit(x^%d-2,1); bnfsunit over primes above 5; "
                       "5-adic image of J(Q_5)[2] from factormod(x^%d+4,5)" % (p, p),
            "grh_free": certified,
            "certification": note,
            "alpha_to_theta": "alpha = 2(-theta)^%d" % g,
        }),
    }


def _gfe_f(p):
    c = ["0"] * (p + 1)
    c[0] = "1"
    c[p] = "4"
    return c


def _matstr(rows):
    return "[" + ";".join(",".join(str(x) for x in r) for r in rows) + "]"


def ex_fixture():
    """Units of Q[x]/(4x^21 - 4x + 1), under GRH."""
    pari("T = y^21 - 2^20*y + 2^19")  # root beta = 2 theta
    pari("R = polredbest(T, 1)")
    pari("B = bnfinit(R[1], 1)")
    h = int(pari("B.no"))
    pari("BACK = modreverse(R[2])")  # new variable as a polmod in beta
    units = pari("[lift(u) | u <- B.fu]")
    gens = [["-1"]]
    for i in range(len(units)):
        pari("U = %s" % units[i])
        pari("UB = lift(subst(U, y, BACK))")  # polynomial in y = beta mod T
        pari("UT = lift(Mod(subst(UB, y, 2*t), 4*t^21-4*t+1))")
        gens.append(_coeffs(pari("UT"), "t"))
    return {
        "schema": "chab2.fixture.units/1",
        "field": {"defining_poly": ["1", "-4"] + ["0"] * 19 + ["4"], "variable": "theta"},
        "class_number": str(h),
        "class_group_cyclic_factors": [str(c) for c in pari("B.cyc")],
        "unit_generators": gens,
        "unit_rank": len(units),
        "provenance": _provenance({
            "command": "bnfinit(polredbest(y^21-2^20*y+2^19)); beta = 2 theta",
            "grh_free": False,
            "certification": "not certified; assumes GRH",
        }),
    }


def ex_local_fixture():
    """Q2[x]/(4x^21 - 4x + 1) as Q2(lambda) with lambda = 2 theta^10.

    v(theta) = -2/21, so lambda is a uniformizer; its characteristic
    polynomial is Eisenstein and theta is recovered by modreverse.
    """
    pari("LM = Mod(2*x^10, 4*x^21 - 4*x + 1)")
    eis = pari("charpoly(LM)")
    back = pari("lift(modreverse(LM))")
    return {
        "schema": "chab2.fixture.local/1",
        "factors": [{
            "field": {"eisenstein": _coeffs(eis, "x")},
            "theta": {"num": _coeffs(back, "x")},
            "certificate": "generator",
        }],
        "provenance": _provenance({
            "command": "charpoly(Mod(2*x^10, 4*x^21-4*x+1)); modreverse",
            "grh_free": True,
            "certification": "verified by the kernel on load",
        }),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    ap.add_argument("--flt", type=int, nargs="*", default=[])
    ap.add_argument("--gfe", type=int, nargs="*", default=[])
    ap.add_argument("--ex", action="store_true")
    ap.add_argument("--certify-budget", type=int, default=1800)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    jobs = [("flt_p%d_units.json" % p, lambda p=p: flt_fixture(p, args.certify_budget))
            for p in args.flt]
    jobs += [("gfe_p%d_selmer.json" % p, lambda p=p: gfe_fixture(p, args.certify_budget))
             for p in args.gfe]
    if args.ex:
        jobs.append(("ex21_units.json", ex_fixture))
        jobs.append(("ex21_local.json", ex_local_fixture))
    for name, job in jobs:
        t0 = time.time()
        data = job()
        with open(os.path.join(args.outdir, name), "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print("%s written in %.1fs" % (name, time.time() - t0), flush=True)


if __name__ == "__main__":
    main()

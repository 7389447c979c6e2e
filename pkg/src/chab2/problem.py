"""Problem documents: loading, fixture resolution and load-time verification.

A problem document names a curve ``twist * y^2 = f0(x)``, a good-reduction
witness ``f = h^2 + 4k``, a local factorization of f over Q2, a subgroup S
of L^x/(L^x)^2 assumed to contain the Selmer image, generators of the
rational 2-power torsion, and the known rational points.  Everything that
can be checked from these data is checked when the ``Problem`` is built.
"""

import hashlib
import json
import math
import os
from fractions import Fraction

from .errors import FixtureMissing, InputError
from .etale import LocalFactorization
from .fields import QQ, to_fraction
from .linalg import F2Space, f2_kernel
from .mumford import (Curve, CurvePoint, GoodReduction, Jacobian, MumfordPoint,
                      model_point, parse_point)
from .poly import Poly

PROBLEM_SCHEMA = "chab2.problem/1"
DEFAULT_PRECISION = 64

_PACKAGE_DATA = os.path.join(os.path.dirname(__file__), "data")


def fixture_dir(override=None):
    if override:
        return override
    return os.environ.get("CHAB_FIXTURES") or os.path.join(_PACKAGE_DATA, "fixtures")


def problem_dir():
    return os.path.join(_PACKAGE_DATA, "problems")


def canonical_json(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256_of(doc):
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def load_fixture(name, directory=None):
    """(document, sha256 of the file bytes) for a fixture file name."""
    path = os.path.join(fixture_dir(directory), name)
    if not os.path.exists(path):
        raise FixtureMissing("fixture %s not found in %s" % (name, fixture_dir(directory)))
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode())
    except ValueError as exc:
        raise InputError("fixture %s is not valid JSON: %s" % (name, exc))
    return doc, hashlib.sha256(raw).hexdigest()


def load_problem(name_or_path):
    """A shipped problem by name (``gfe7``) or a problem document path."""
    path = name_or_path
    if not os.path.exists(path):
        cand = os.path.join(problem_dir(), name_or_path + ".json")
        if os.path.exists(cand):
            path = cand
    with open(path) as fh:
        return json.load(fh)


def rational_poly(coeffs):
    return Poly(QQ, [to_fraction(c) for c in coeffs])


def poly_strings(p):
    return [str(c) for c in p.c]


# --------------------------------------------------------------------------
# rational square classes


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _odd_primes_support(n, bound=10 ** 5):
    """Primes dividing n to an odd power (trial division, then a primality test)."""
    out = set()
    p = 2
    while p <= bound and p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e & 1:
            out.add(p)
        p += 1 if p == 2 else 2
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            return out
        if not _is_probable_prime(n):
            raise InputError("cannot factor the norm cofactor %d" % n)
        out.add(n)
    return out


def rational_square_class(r):
    """Sign and odd-exponent primes of a nonzero rational, as a frozenset."""
    r = to_fraction(r)
    if r == 0:
        raise InputError("zero has no square class")
    keys = set()
    if r < 0:
        keys.add(-1)
    keys |= _odd_primes_support(abs(r.numerator))
    keys ^= _odd_primes_support(r.denominator)
    return frozenset(keys)


def etale_norm(f0, xi):
    """N_{L/Q}(xi(theta)) for L = Q[x]/(f0)."""
    return f0.resultant(xi) / f0.lc() ** xi.degree()


# --------------------------------------------------------------------------
# the subgroup S


class SelmerInput:
    """Generators of a subgroup of L^x/(L^x)^2 and the linear filters cutting S out.

    The filters are an optional local-image condition supplied with the
    fixture (coordinates of each generator at an odd prime, together with
    a basis of the image of the local Jacobian) and the norm condition
    N(xi) = square, which holds on the whole Selmer image.
    """

    def __init__(self, f0, generators, provenance, local_filter=None,
                 norm_square_filter=True, sources=None):
        self.f0 = f0
        self.generators = generators
        self.provenance = provenance
        self.local_filter = local_filter
        self.norm_square_filter = norm_square_filter
        self.sources = sources or {}
        for g in generators:
            if g.is_zero() or f0.gcd(g).degree() > 0:
                raise InputError("Selmer generator is not a unit of the etale algebra")
        self.norms = [etale_norm(f0, g) for g in generators]

    @classmethod
    def from_doc(cls, doc, f0, directory=None):
        sources = {}
        gens = []
        provenance = dict(doc.get("provenance", {}))
        local_filter = None
        if "fixture" in doc:
            fx, digest = load_fixture(doc["fixture"], directory)
            sources[doc["fixture"]] = digest
            fpoly = rational_poly(fx["field"]["defining_poly"])
            if fpoly.monic() != f0.monic():
                raise InputError("fixture %s describes a different algebra" % doc["fixture"])
            if fx.get("schema") == "chab2.fixture.units/1":
                gens += [rational_poly(g) for g in fx["unit_generators"]]
            elif fx.get("schema") == "chab2.fixture.selmer/1":
                gens += [rational_poly(g) for g in fx["generators"]]
                local_filter = fx.get("filter")
            else:
                raise InputError("unknown fixture schema %r" % fx.get("schema"))
            provenance.update(fx.get("provenance", {}))
            provenance["class_number"] = fx.get("class_number")
        gens += [rational_poly(g) for g in doc.get("generators", [])]
        gens += [rational_poly(g) for g in doc.get("extra_generators", [])]
        if not gens:
            raise InputError("no Selmer generators given")
        if "local_filter" in doc:
            local_filter = doc["local_filter"]
        if local_filter is not None and len(local_filter["generator_coordinates"]) != len(gens):
            raise InputError("local filter does not match the number of generators")
        return cls(f0, gens, provenance, local_filter,
                   doc.get("norm_square_filter", True), sources)

    # -- the filter map --------------------------------------------------
    def _norm_keys(self):
        keys = set()
        classes = [rational_square_class(n) for n in self.norms]
        for c in classes:
            keys |= c
        order = sorted(keys)
        return classes, {k: i for i, k in enumerate(order)}

    def filter_images(self):
        """Per generator, a bitmask whose vanishing on a combination defines S."""
        imgs = [0] * len(self.generators)
        shift = 0
        if self.local_filter is not None:
            coords = self.local_filter["generator_coordinates"]
            width = len(coords[0]) if coords else 0
            space = F2Space(_bits(v) for v in self.local_filter["local_image_basis"])
            for i, v in enumerate(coords):
                imgs[i] |= space.normal_form(_bits(v))
            shift = width
        if self.norm_square_filter:
            classes, index = self._norm_keys()
            for i, c in enumerate(classes):
                for k in c:
                    imgs[i] |= 1 << (shift + index[k])
        return imgs

    def subgroup_basis(self):
        """Basis of S as bitmasks over the generators (sorted)."""
        return F2Space(f2_kernel(self.filter_images())).reduced_basis()

    def element(self, combo):
        acc = Poly(QQ, [Fraction(1)])
        i = 0
        while combo:
            if combo & 1:
                acc = (acc * self.generators[i]) % self.f0
            combo >>= 1
            i += 1
        return acc

    def describe(self):
        return {
            "generators": [poly_strings(g) for g in self.generators],
            "norms": [str(n) for n in self.norms],
            "local_filter": self.local_filter is not None,
            "norm_square_filter": self.norm_square_filter,
            "provenance": self.provenance,
        }


def _bits(vec):
    out = 0
    for i, b in enumerate(vec):
        if int(b) & 1:
            out |= 1 << i
    return out


def combo_string(combo, n):
    return "".join(str((combo >> i) & 1) for i in range(n))


# --------------------------------------------------------------------------
# the problem


class TorsionGenerator:
    def __init__(self, point, order):
        self.point = point
        self.order = order


class Problem:
    """A parsed and verified problem document."""

    def __init__(self, doc, directory=None, precision=None):
        if doc.get("schema") != PROBLEM_SCHEMA:
            raise InputError("problem schema must be %s" % PROBLEM_SCHEMA)
        self.doc = doc
        self.name = doc.get("name", "")
        self.fixture_directory = directory
        self.precision = int(precision or doc.get("precision", DEFAULT_PRECISION))
        cdoc = doc["curve"]
        self.curve = Curve(rational_poly(cdoc["f"]), cdoc.get("twist", "1"))
        red = doc["reduction"]
        self.witness = GoodReduction(self.curve, [to_fraction(c) for c in red["h"]],
                                     [to_fraction(c) for c in red["k"]])
        self.fixture_hashes = {}
        lf = doc["local_factorization"]
        if "fixture" in lf:
            fx, digest = load_fixture(lf["fixture"], directory)
            self.fixture_hashes[lf["fixture"]] = digest
            lf = fx
        self.fac = LocalFactorization.from_json(self.curve.f, lf, self.precision)
        self.Q2 = self.fac.Q2
        self.J = Jacobian(self.curve.f.map(self.Q2))
        self.JQ = Jacobian(self.curve.f)
        self.selmer = SelmerInput.from_doc(doc["selmer"], self.curve.f0, directory)
        self.fixture_hashes.update(self.selmer.sources)
        self.known = []
        for item in doc.get("known_points", []):
            P = parse_point(item)
            if not self.curve.is_on_curve(P):
                raise InputError("known point %r is not on the curve" % (item,))
            if any(P.key() == Q.key() for Q in self.known):
                raise InputError("known point %r is listed twice" % (item,))
            self.known.append(P)
        if not any(P.is_infinity() for P in self.known):
            raise InputError("the point at infinity must be listed among the known points")
        self.torsion = [self._torsion_generator(t) for t in doc.get("torsion_2primary", [])]
        self.options = dict(doc.get("options", {}))

    def _torsion_generator(self, item):
        a = rational_poly(item["a"])
        b = rational_poly(item["b"])
        if a.is_zero() or a.lc() != 1:
            raise InputError("torsion generator: a must be monic")
        P = MumfordPoint(a, b)
        if not self.JQ.is_valid(P):
            raise InputError("torsion generator is not a Mumford pair on the model")
        order = int(item["order"])
        if order < 2 or order & (order - 1):
            raise InputError("torsion generator order must be a power of 2")
        if not self.JQ.mul(order, P).is_zero() or self.JQ.mul(order // 2, P).is_zero():
            raise InputError("torsion generator does not have the stated order %d" % order)
        return TorsionGenerator(P, order)

    # -- derived data ------------------------------------------------------
    def model_known(self):
        return [model_point(self.curve, P) for P in self.known]

    def torsion_group(self):
        """All elements of the 2-power torsion group generated, over Q, deduplicated."""
        elems = {self.JQ.zero().key(): self.JQ.zero()}
        for T in self.torsion:
            cur = list(elems.values())
            mult = self.JQ.zero()
            for _ in range(1, T.order):
                mult = self.JQ.add(mult, T.point)
                for E in cur:
                    S = self.JQ.add(E, mult)
                    elems.setdefault(S.key(), S)
        zero_key = self.JQ.zero().key()
        rest = sorted((k for k in elems if k != zero_key), key=repr)
        return [elems[zero_key]] + [elems[k] for k in rest]

    def to_local(self, P):
        """A Mumford pair over Q mapped into J(Q2)."""
        return MumfordPoint(P.a.map(self.Q2), P.b.map(self.Q2))

    def option(self, key, default):
        return self.options.get(key, default)


def point_json(curve, P):
    """Curve coordinates (not model coordinates) of a rational point."""
    if P.is_infinity():
        return "inf"
    return [str(P.x), str(P.y)]


def model_to_curve(curve, P):
    if P.is_infinity():
        return P
    return CurvePoint(P.x, P.y / curve.twist)

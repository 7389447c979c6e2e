"""Determining C(Q) from a subgroup S of the Selmer image.

The procedure, for a curve with good reduction at 2:

* check that S -> (L tensor Q2)^x / squares is injective (otherwise FAIL);
* cover C(Q2) by residue disks, split disks holding two known points;
* a piece without known points is excluded when no class of its image
  under x - theta lies in r(S);
* a piece around a known point P0 is evaluated with q on i_P0(piece) plus
  the rational 2-power torsion, and every class of that set lying in r(S)
  must come from the torsion.

If nothing fails, every piece holds at most its known point, so the known
points are all of C(Q).  FAIL is returned as a value with the step name.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .errors import DivergenceSuspected, InputError
from .linalg import F2Space
from .mumford import CurvePoint, ResidueDisk, model_point, parse_point
from .problem import (Problem, canonical_json, combo_string, model_to_curve, point_json,
                      sha256_of)
from .qmap import (_sym_rep, base_point, local_torsion_level, mu_bits, q_disk)

CERTIFICATE_SCHEMA = "chab2.certificate/1"
DEFAULT_REFINEMENT_CAP = 8


def _v2(r):
    r = Fraction(r)
    if r == 0:
        return 10 ** 9
    n, d = r.numerator, r.denominator
    return ((n & -n).bit_length() - 1) - ((d & -d).bit_length() - 1)


class Piece:
    """The part phi(t0 + 2^k Z2) of a maximal residue disk."""

    def __init__(self, disk, t0, k):
        self.disk = disk
        self.t0 = t0
        self.k = k

    def contains(self, P):
        if not self.disk.contains_rational(P):
            return False
        if self.k == self.disk.depth:
            return True
        return _v2(self.disk.param_of(P) - self.t0) >= self.k

    def split(self):
        k = self.k + 1
        return [Piece(self.disk, _sym_rep(self.t0, k), k),
                Piece(self.disk, _sym_rep(self.t0 + (1 << self.k), k), k)]

    def ident(self):
        return {"disk": self.disk.label, "t0": str(self.t0), "modulus_exponent": self.k}

    def sort_key(self):
        return (self.k, abs(self.t0), self.t0)


def fail(step, reason):
    return {"kind": "FAIL", "step": step, "reason": reason}


# --------------------------------------------------------------------------
# the subgroup S in the local square classes


def generator_images(problem):
    fac = problem.fac
    return [fac.class_bits(fac.embed(g)) for g in problem.selmer.generators]


def subgroup_data(problem):
    """(basis combos of S, their images in the local square classes, kernel dimension)."""
    imgs = generator_images(problem)
    basis = problem.selmer.subgroup_basis()
    images = []
    for combo in basis:
        v = 0
        for i, g in enumerate(imgs):
            if (combo >> i) & 1:
                v ^= g
        images.append(v)
    rank = F2Space(images).dim
    return basis, images, len(basis) - rank


def torsion_classes(problem, group):
    return sorted({mu_bits(problem.J, problem.fac, problem.to_local(T)) for T in group})


# --------------------------------------------------------------------------
# piece evaluation (runs in worker processes)

_CONTEXTS = {}


def _context(doc_json, directory, precision):
    key = (doc_json, directory, precision)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        problem = Problem(json.loads(doc_json), directory, precision)
        group = problem.torsion_group()
        offsets = [problem.to_local(T) for T in group[1:]]
        ctx = (problem, offsets)
        _CONTEXTS.clear()
        _CONTEXTS[key] = ctx
    return ctx


def _find_disk(problem, label):
    for d in problem.witness.disks():
        if d.label == label:
            return d
    raise InputError("unknown disk %s" % label)


def evaluate_piece(job):
    """Worker entry point; ``job`` is a JSON-able tuple."""
    (doc_json, directory, precision, ident, known, span_basis, R, n_tors, record) = job
    problem, offsets = _context(doc_json, directory, precision)
    disk = _find_disk(problem, ident["disk"])
    piece = Piece(disk, int(ident["t0"]), ident["modulus_exponent"])
    span = F2Space(span_basis)
    layout = problem.fac.layout
    rec = {"piece": ident}
    try:
        if known is None:
            rec.update(_exclude_piece(problem, piece, span, layout))
        else:
            rec.update(_determine_piece(problem, piece, known, span, set(R), n_tors,
                                        offsets, layout, record))
    except DivergenceSuspected as exc:
        rec.update({"status": "FAIL", "step": "q-evaluation", "reason": str(exc)})
    return rec


def piece_pi_samples(problem, piece):
    """Parameters covering the piece modulo 2^max(k, 3)."""
    K = max(piece.k, 3)
    return [(_sym_rep(piece.t0 + r * (1 << piece.k), K), K)
            for r in range(1 << (K - piece.k))]


def _exclude_piece(problem, piece, span, layout):
    J, fac, Q2 = problem.J, problem.fac, problem.Q2
    inf = CurvePoint.infinity()
    samples = []
    hits = []
    for t, K in piece_pi_samples(problem, piece):
        P = J.embed_point(piece.disk.point(Fraction(t), Q2), inf)
        bits = mu_bits(J, fac, P)
        samples.append({"t": str(t), "modulus_exponent": K, "class": layout.bitstring(bits)})
        if span.contains(bits):
            hits.append(layout.bitstring(bits))
    out = {"status": "EXCLUDED", "base": "inf", "pi_image": samples}
    if hits:
        out.update({"status": "FAIL", "step": "selmer-set",
                    "reason": "a piece without known points has image in r(S)",
                    "selmer_hits": sorted(set(hits))})
    return out


def recentred_disk(problem, piece, P0):
    disk = piece.disk
    if disk.kind == "inf":
        if not P0.is_infinity() or piece.t0 % (1 << piece.k):
            return None
        return ResidueDisk(disk.witness, "inf", None, None, piece.k, disk.label)
    return ResidueDisk(disk.witness, "affine", P0.x, disk.ybar, piece.k,
                       "%s@x=%s" % (disk.label, P0.x))


def _determine_piece(problem, piece, known, span, R, n_tors, offsets, layout, record):
    P0 = model_point(problem.curve, parse_point(known))
    disk = recentred_disk(problem, piece, P0)
    if disk is None:
        return {"status": "FAIL", "step": "refinement", "known_point": known,
                "reason": "cannot centre a piece of the disk at infinity at a finite point"}
    base = base_point(P0, problem.Q2)
    opts = problem.options
    res = q_disk(problem.J, problem.fac, disk, base, problem.Q2, n_tors, offsets,
                 cap=opts.get("halving_depth_cap"), record=record,
                 level_cap=opts.get("level_cap", 16), refine_cap=opts.get("sample_refine_cap", 24))
    hits = sorted(c for c in res.classes if span.contains(c))
    bad = [c for c in hits if c not in R]
    out = {"status": "DETERMINED", "known_point": known, "centre": disk.describe(),
           "q": res.describe(layout), "selmer_hits": [layout.bitstring(c) for c in hits]}
    if bad:
        out.update({"status": "FAIL", "step": "image",
                    "reason": "q-image meets r(S) outside the torsion image",
                    "offending": [layout.bitstring(c) for c in bad]})
    return out


# --------------------------------------------------------------------------
# the driver


def partition(problem, strict=False):
    """Pieces with at most one known point each; returns (pieces, scope, failure)."""
    known = problem.model_known()
    exclude = set(problem.options.get("exclude_disks", []))
    cap = problem.options.get("refinement_cap", DEFAULT_REFINEMENT_CAP)
    min_k = 2 if problem.torsion else 1
    pieces, scope = [], []
    for disk in problem.witness.disks():
        inside = [P for P in known if disk.contains_rational(P)]
        if disk.label in exclude:
            scope.append({"piece": {"disk": disk.label, "t0": "0", "modulus_exponent": disk.depth},
                          "status": "EXCLUDED-BY-SCOPE",
                          "known_points": [point_json(problem.curve, _to_curve(problem, P))
                                           for P in inside]})
            continue
        queue = [Piece(disk, 0, disk.depth)]
        mine = []
        while queue:
            pc = queue.pop(0)
            kn = [P for P in inside if pc.contains(P)]
            if len(kn) >= 2 or (kn and pc.k < min_k):
                if pc.k - disk.depth >= cap:
                    return None, None, fail("refinement",
                                            "refinement-exhausted on disk %s" % disk.label)
                queue.extend(pc.split())
                continue
            mine.append((pc, kn[0] if kn else None))
        mine.sort(key=lambda item: item[0].sort_key())
        pieces.extend(mine)
    return pieces, scope, None


def _to_curve(problem, P):
    return model_to_curve(problem.curve, P)


def certify_curve(doc, threads=1, strict=False, directory=None, precision=None, record=True):
    """Run the certification on a problem document; returns the certificate dict."""
    problem = Problem(doc, directory, precision)
    layout = problem.fac.layout
    cert = {
        "schema": CERTIFICATE_SCHEMA,
        "problem": {"name": problem.name, "sha256": sha256_of(doc)},
        "environment": {
            "package": "chab2", "version": __version__,
            "precision_bits": problem.precision,
            "local_fields": problem.fac.describe(),
            "fixtures": dict(sorted(problem.fixture_hashes.items())),
        },
        "curve": problem.curve.describe(),
        "known_points": [point_json(problem.curve, P) for P in problem.known],
        "options": {"strict": bool(strict), **problem.options},
        "metadata": doc.get("metadata", {}),
    }
    verdict = None

    # S and its local image
    basis, images, kdim = subgroup_data(problem)
    n = len(problem.selmer.generators)
    cert["selmer"] = dict(problem.selmer.describe(), **{
        "subgroup_basis": [combo_string(c, n) for c in basis],
        "subgroup_images": [layout.bitstring(v) for v in images],
        "kernel_dimension": kdim,
    })
    if kdim:
        reason = "S -> L2 square classes has a kernel of dimension %d" % kdim
        if problem.torsion:
            reason += " (kernel membership in the torsion image is not decided)"
        verdict = fail("injectivity", reason)
    span = F2Space(images)

    # torsion
    group = problem.torsion_group()
    R = torsion_classes(problem, group)
    n_tors = local_torsion_level(problem.J, problem.fac)
    cert["torsion"] = {
        "generators": [{"a": [str(c) for c in T.point.a.c], "b": [str(c) for c in T.point.b.c],
                        "order": T.order} for T in problem.torsion],
        "group_order": len(group),
        "classes": [layout.bitstring(c) for c in R],
        "local_torsion_level": n_tors,
    }

    # known points must land in r(S)
    inf = CurvePoint.infinity()
    kp = []
    for P in problem.model_known():
        bits = mu_bits(problem.J, problem.fac,
                       problem.J.embed_point(base_point(P, problem.Q2), inf))
        kp.append(layout.bitstring(bits))
        if verdict is None and not span.contains(bits):
            verdict = fail("selmer-input", "a known point maps outside r(S)")
    cert["known_point_classes"] = kp

    records = []
    if verdict is None:
        pieces, scope, pfail = partition(problem, strict)
        if pfail:
            verdict = pfail
        else:
            if strict and scope:
                verdict = fail("scope", "strict mode: disks excluded by scope")
            if problem.torsion and strict:
                verdict = fail("refinement", "strict mode: half-disk boundary replaced by depth 2")
        if verdict is None:
            doc_json = canonical_json(doc)
            jobs = [(doc_json, directory, problem.precision, pc.ident(),
                     point_json(problem.curve, _to_curve(problem, P)) if P is not None else None,
                     span.basis(), R, n_tors, record) for pc, P in pieces]
            if threads > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(evaluate_piece, jobs))
            else:
                results = [evaluate_piece(j) for j in jobs]
            records = results + scope
            for r in results:
                if r["status"] == "FAIL":
                    verdict = fail(r["step"], "%s (piece %s)" % (r["reason"], canonical_json(r["piece"])))
                    break
    cert["disks"] = records
    if verdict is None:
        claimed = [point_json(problem.curve, P) for P in problem.known]
        verdict = {"kind": "POINTS_DETERMINED", "points": claimed}
        if any(r["status"] == "EXCLUDED-BY-SCOPE" for r in records):
            verdict["excluded_by_scope"] = sorted(r["piece"]["disk"] for r in records
                                                  if r["status"] == "EXCLUDED-BY-SCOPE")
            verdict["claim"] = "rational points outside the excluded disks"
            verdict["points"] = sorted(
                (p for r in records if r["status"] == "DETERMINED" for p in [r["known_point"]]),
                key=canonical_json)
        else:
            verdict["claim"] = "all rational points"
    cert["verdict"] = verdict
    return cert


def dump_certificate(cert):
    return json.dumps(cert, sort_keys=True, indent=1, ensure_ascii=True) + "\n"

"""Command-line entry point.

Every subcommand prints (or writes with --out) one JSON document with sorted
keys.  Exit status: 0 when the result is positive, 10 for a FAIL/FAILS
verdict, 2 for unusable input.  Schema violations are reported as
``file:line:col: message``.
"""

import argparse
import json
import os
import re
import sys
from importlib import resources
from json.decoder import scanstring

import jsonschema

from .errors import FixtureMissing, InputError, KernelError
from .problem import Problem, problem_dir

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 2, 10

_WS = re.compile(r"[ \t\n\r]*")


class CliInputError(Exception):
    pass


def load_schema(name):
    text = resources.files("chab2").joinpath("schemas", name + ".schema.json").read_text()
    return json.loads(text)


def _value_positions(text):
    """Offsets of every value in a valid JSON text, keyed by path tuple."""
    positions = {}
    decoder = json.JSONDecoder()

    def skip(i):
        return _WS.match(text, i).end()

    def value(i, path):
        i = skip(i)
        positions[path] = i
        ch = text[i]
        if ch == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                i = skip(i)
                key, i = scanstring(text, i + 1)
                i = skip(i) + 1           # ':'
                i = skip(value(i, path + (key,)))
                if text[i] == ",":
                    i += 1
                    continue
                return i + 1
        if ch == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = skip(value(i, path + (k,)))
                k += 1
                if text[i] == ",":
                    i += 1
                    continue
                return i + 1
        _, end = decoder.raw_decode(text, i)
        return end

    value(0, ())
    return positions


def _line_col(text, pos):
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def read_document(path, schema):
    """Parse and validate; raises CliInputError with line-precise messages."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliInputError("%s: %s" % (path, exc.strerror))
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliInputError("%s:%d:%d: %s" % (path, exc.lineno, exc.colno, exc.msg))
    validator = jsonschema.Draft202012Validator(load_schema(schema))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        positions = _value_positions(text)
        lines = []
        for err in errors:
            path_t = tuple(err.absolute_path)
            while path_t not in positions:
                path_t = path_t[:-1]
            line, col = _line_col(text, positions[path_t])
            where = "/" + "/".join(str(p) for p in err.absolute_path)
            lines.append("%s:%d:%d: %s (at %s)" % (path, line, col, err.message, where))
        raise CliInputError("\n".join(lines))
    return doc


def resolve_problem(arg):
    if os.path.exists(arg):
        return arg
    cand = os.path.join(problem_dir(), arg + ".json")
    if os.path.exists(cand):
        return cand
    raise CliInputError("%s: no such problem document" % arg)


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _public(obj):
    if isinstance(obj, dict):
        return {k: _public(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, list):
        return [_public(v) for v in obj]
    return obj


def emit(args, obj):
    text = dumps(_public(obj))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point_arg(s):
    if s == "inf":
        return "inf"
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("point must be 'inf' or 'x,y'")
    return [p.strip() for p in parts]


def _problem(args):
    path = resolve_problem(args.problem)
    doc = read_document(path, "problem")
    return doc, Problem(doc, None, args.precision)


def _local_point(problem, item):
    from .mumford import model_point, parse_point
    from .qmap import base_point
    P = model_point(problem.curve, parse_point(item))
    if not P.is_infinity() and not problem.curve.f.eval(P.x) == P.y * P.y:
        raise CliInputError("point %s is not on the curve" % (item,))
    return base_point(P, problem.Q2)


# --------------------------------------------------------------------------
# subcommands


def cmd_certify(args):
    from .certify import dump_certificate, certify_curve
    path = resolve_problem(args.problem)
    doc = read_document(path, "problem")
    cert = certify_curve(doc, threads=args.threads, strict=args.strict,
                         precision=args.precision)
    jsonschema.validate(cert, load_schema("certificate"))
    text = dump_certificate(cert)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if cert["verdict"]["kind"] == "POINTS_DETERMINED" else EXIT_FAIL


def cmd_verify(args):
    from .verify import verify_certificate
    doc = read_document(resolve_problem(args.problem), "problem")
    cert = read_document(args.certificate, "certificate")
    report = verify_certificate(doc, cert)
    emit(args, report.as_dict())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_zset(args):
    from .criteria import z_set
    emit(args, z_set(args.l, args.precision or 64))
    return EXIT_OK


def cmd_zprimeset(args):
    from .criteria import zprime_set
    emit(args, zprime_set(args.l, args.precision or 64))
    return EXIT_OK


def _fixture_arg(args):
    if args.fixture is None:
        return None
    try:
        with open(args.fixture) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliInputError("%s: %s" % (args.fixture, exc))


def cmd_flt(args):
    from .criteria import flt_criterion
    res = flt_criterion(args.p, bits=args.precision or 64, fixture=_fixture_arg(args))
    emit(args, res)
    return EXIT_OK if res["verdict"] == "HOLDS" else EXIT_FAIL


def cmd_gfe(args):
    from .criteria import gfe_criterion
    res = gfe_criterion(args.p, bits=args.precision or 64, fixture=_fixture_arg(args))
    emit(args, res)
    return EXIT_OK if res["verdict"] == "HOLDS" else EXIT_FAIL


def cmd_mu(args):
    from .qmap import mu_bits
    _, problem = _problem(args)
    P = _local_point(problem, args.point)
    base = _local_point(problem, args.base)
    D = problem.J.embed_point(P, base)
    emit(args, {"point": args.point, "base": args.base,
                "class": problem.fac.layout.bitstring(mu_bits(problem.J, problem.fac, D))})
    return EXIT_OK


def cmd_halve(args):
    from .halving import halve_all
    from .qmap import mu_bits
    _, problem = _problem(args)
    J, fac = problem.J, problem.fac
    D = J.embed_point(_local_point(problem, args.point), _local_point(problem, args.base))
    halves = halve_all(J, fac, D)
    emit(args, {"point": args.point, "base": args.base, "count": len(halves),
                "halves": [{"a": [repr(c) for c in H.a.c], "b": [repr(c) for c in H.b.c],
                            "class": fac.layout.bitstring(mu_bits(J, fac, H))}
                           for H in halves]})
    return EXIT_OK


def cmd_qdisk(args):
    from .qmap import q_disk
    _, problem = _problem(args)
    disks = {d.label: d for d in problem.witness.disks()}
    if args.disk not in disks:
        raise CliInputError("unknown disk %r (have %s)" % (args.disk, ", ".join(sorted(disks))))
    d = disks[args.disk]
    base = d.center(problem.Q2) if args.base is None else _local_point(problem, args.base)
    res = q_disk(problem.J, problem.fac, d, base, problem.Q2, record=False)
    out = res.describe(problem.fac.layout)
    out["disk"] = d.describe()
    emit(args, out)
    return EXIT_OK


def cmd_oracle_check(args):
    from .oracle import halving_equivalence
    res = halving_equivalence(args.q, args.genus, args.trials, args.seed)
    emit(args, res)
    return EXIT_OK if not res["mismatches"] else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="chab2", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits per unit of ramification")
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="certify a problem document")
    p.add_argument("problem", help="path, or the name of a shipped problem")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--strict", action="store_true",
                   help="FAIL instead of excluding disks by scope or refining by depth")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p.add_argument("problem")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (("zset", cmd_zset, "image set for y^2 = 4x^l + 1"),
                                 ("zprimeset", cmd_zprimeset, "image set for 5y^2 = 4x^l + 1")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--l", type=int, required=True)
        p.set_defaults(func=func)

    for name, func in (("flt", cmd_flt), ("gfe", cmd_gfe)):
        p = sub.add_parser(name, parents=[common], help="%s criterion for a prime" % name)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--fixture", help="use this fixture file instead of the shipped one")
        p.set_defaults(func=func)

    for name, func in (("mu", cmd_mu), ("halve", cmd_halve)):
        p = sub.add_parser(name, parents=[common], help="%s of [P - base] over Q2" % name)
        p.add_argument("problem")
        p.add_argument("--point", type=_point_arg, required=True, help="'x,y' or 'inf'")
        p.add_argument("--base", type=_point_arg, default="inf")
        p.set_defaults(func=func)

    p = sub.add_parser("qdisk", parents=[common], help="q over one residue disk")
    p.add_argument("problem")
    p.add_argument("--disk", required=True, help="disk label such as 'inf' or '(0,1)'")
    p.add_argument("--base", type=_point_arg, default=None,
                   help="base point (default: the disk centre)")
    p.set_defaults(func=cmd_qdisk)

    p = sub.add_parser("oracle-check", parents=[common],
                       help="compare halving with brute force over F_q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("chab2: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.precision is not None and not 16 <= args.precision <= 4096:
        print("chab2: --precision must be between 16 and 4096", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CliInputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except FixtureMissing as exc:
        print("chab2: missing fixture: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print("chab2: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except KernelError as exc:
        print("chab2: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

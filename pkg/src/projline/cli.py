"""Command line interface.

Exit status: 0 on success or a clean report, 1 on a failed validation (the
report goes to stdout), 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import coordinate, coordinatizer, fields, groupoid, rapport, search
from .errors import MalformedGroupoid, ProjLineError

log = logging.getLogger("projline")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_field(spec: str) -> fields.FieldTable:
    kind, _, arg = spec.partition(":")
    if kind == "prime":
        try:
            return fields.make_prime_field(int(arg))
        except ValueError as e:
            raise UsageError(f"bad --field {spec!r}: {e}") from None
    if kind == "file":
        return fields.read_field(arg)
    raise UsageError(f"--field must be prime:<p> or file:<path>, got {spec!r}")


def _axioms(text: str) -> tuple:
    if not text:
        return ()
    try:
        out = tuple(sorted({int(t) for t in text.split(",")}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad axiom list {text!r}") from None
    if not set(out) <= {1, 2, 3, 4}:
        raise argparse.ArgumentTypeError("axioms are numbered 1-4")
    return out


def _print_report(rep) -> int:
    print(rep.format())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_gen(args) -> int:
    g = coordinate.generate_groupoid(_load_field(args.field))
    if args.output:
        groupoid.write_groupoid(g, args.output)
    else:
        sys.stdout.write(groupoid.dumps_groupoid(g))
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        g = groupoid.read_groupoid(args.file)
    except MalformedGroupoid as e:
        print(f"CHECK well_formed FAIL {e}")
        return EXIT_FAIL
    rep = groupoid.validate_structure(g)
    if rep.ok and args.axioms:
        rep.extend(groupoid.check_axioms(g, args.axioms, structure=rep))
    return _print_report(rep)


def cmd_coordinatize(args) -> int:
    g = groupoid.read_groupoid(args.file)
    try:
        k, pr = coordinatizer.coordinatize(g)
    except ProjLineError as e:
        report = getattr(e, "report", None)
        if report is not None:
            print(report.format())
        print(f"FAIL {type(e).__name__}: {e}".splitlines()[0])
        return EXIT_FAIL
    if args.output:
        fields.write_field(k, args.output)
    else:
        sys.stdout.write(fields.dumps_field(k))
    if args.proj:
        coordinatizer.write_projectivity(pr, args.proj)
    return EXIT_OK


def cmd_search(args) -> int:
    distinct = True if args.require_minus_one_distinct else (
        False if args.require_minus_one_equal else None)
    result = search.enumerate_models(args.points, args.axioms, distinct, max_points=args.max_points)
    if args.output:
        search.export_result(result, args.output)
    print(json.dumps(result.summary(), indent=2))
    return EXIT_OK


def _points(args, k):
    pts = list(args.points)
    if args.triple:
        pts = list(args.triple) + pts
    if len(pts) != k:
        raise UsageError(f"{args.query} needs {k} points, got {len(pts)}")
    return pts


def cmd_rapport(args) -> int:
    g = groupoid.read_groupoid(args.file)
    q = args.query
    if q == "cross":
        print(rapport.cross_ratio(g, *_points(args, 4)))
    elif q == "tri":
        print(rapport.tri_rapport(g, *_points(args, 6)))
    elif q == "twelve":
        for expr, value in rapport.twelve_scalars(g, *_points(args, 4)):
            print(f"{expr} {value}")
    elif q == "harmonic":
        print(rapport.harmonic_conjugate(g, *_points(args, 3)))
    elif q == "solve":
        if args.mu is None:
            raise UsageError("solve needs --mu")
        print(rapport.solve_fourth_point(g, args.mu, *_points(args, 3)))
    elif q == "minus-one":
        print(rapport.minus_one(g))
    elif q == "phi":
        for k, v in rapport.derive_phi(g).items():
            print(f"{k} {v}")
    return EXIT_OK


def _load_any(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        keys = set(json.loads(text))
    except (json.JSONDecodeError, TypeError):
        keys = set()
    if keys == set(fields.FIELD_KEYS):
        return fields.loads_field(text)
    return groupoid.loads_groupoid(text)


def cmd_iso(args) -> int:
    a, b = _load_any(args.first), _load_any(args.second)
    if type(a) is not type(b):
        raise UsageError("cannot compare a field with a groupoid")
    if isinstance(a, fields.FieldTable):
        iso = fields.field_iso_check(a, b)
        if iso is None:
            print("NOT ISOMORPHIC")
            return EXIT_FAIL
        print(json.dumps(iso))
        return EXIT_OK
    iso = search.iso_check(a, b)
    if iso is None:
        print("NOT ISOMORPHIC")
        return EXIT_FAIL
    sys.stdout.write(coordinatizer.dumps_projectivity(iso))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projline",
                                description="Projective lines as groupoids with projection structure.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="generate the coordinate groupoid over a field")
    s.add_argument("--field", required=True, help="prime:<p> or file:<path>")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check", help="structural and axiom checks on a groupoid file")
    s.add_argument("file")
    s.add_argument("--axioms", type=_axioms, default=(1, 2, 3, 4))
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("coordinatize", help="reconstruct the scalar field and the isomorphism")
    s.add_argument("file")
    s.add_argument("-o", "--output", help="field file")
    s.add_argument("--proj", help="projectivity file")
    s.set_defaults(func=cmd_coordinatize)

    s = sub.add_parser("search", help="enumerate small models up to isomorphism")
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--axioms", type=_axioms, default=(1, 2, 3, 4))
    g = s.add_mutually_exclusive_group()
    g.add_argument("--require-minus-one-distinct", action="store_true")
    g.add_argument("--require-minus-one-equal", action="store_true")
    s.add_argument("--max-points", type=int, default=search.MAX_POINTS,
                   help="raise the size ceiling (expensive)")
    s.add_argument("-o", "--output", help="directory for class representatives and summary.json")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("rapport", help="cross ratio, tri-rapport and related queries")
    s.add_argument("file")
    s.add_argument("query", choices=["cross", "tri", "twelve", "harmonic", "solve", "minus-one", "phi"])
    s.add_argument("points", nargs="*")
    s.add_argument("--triple", nargs=3, metavar=("A", "B", "C"))
    s.add_argument("--mu")
    s.set_defaults(func=cmd_rapport)

    s = sub.add_parser("iso", help="isomorphism check between two field or groupoid files")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_iso)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"projline: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ProjLineError) as e:
        print(f"projline: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())

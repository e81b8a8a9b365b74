# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

import argparse
import re
import sys
import traceback
from fractions import Fraction

from config import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_PARSE, FILE_MAGIC
from exactla import FieldDescriptor, FieldError, FieldMismatchError
from core import ConstraintError, SuperAlgebra, validate
from spaces import InvalidAlgebraError, compute_space, require_valid
from structure import PolicyError
from catalog import CatalogError, catalog_entries, lookup
from superbider import SuperBider, THIS_VERSION
from utils import format_vector

CATALOG_PREFIX = "catalog:"
COEFFICIENT = re.compile(r"[+-]?[0-9]+(/[0-9]+)?")

# Short names accepted by spaces --which
WHICH = {"centroid": "centroid", "sderiv": "superderivation", "bider": "biderivation", "commuting": "commuting"}


class ParseError(ValueError):
    """
    Syntax error in an algebra file, line is 1-based
    """

    def __init__(self, line, message):
        self.line = line
        super().__init__("line {}: {}".format(line, message))


def _int_token(token, line, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(line, "{} must be an integer, got '{}'".format(what, token))


def parse_algebra(text, check=True):
    """
    Read the superalgebra v1 text format

    With check=False grading and even square entries are kept so that
    validate can report them.
    """
    header = {}
    constants = {}
    seen_magic = False
    last = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        last = number
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not seen_magic:
            if " ".join(tokens) != FILE_MAGIC:
                raise ParseError(number, "expected '{}' as the first line".format(FILE_MAGIC))
            seen_magic = True
            continue
        keyword = tokens[0]
        if keyword == "c":
            missing = [key for key in ("name", "field", "dim", "parity") if key not in header]
            if missing:
                raise ParseError(number, "structure constants before {}".format(", ".join(missing)))
            if len(tokens) != 5:
                raise ParseError(number, "expected 'c <i> <j> <k> <value>'")
            i, j, k = (_int_token(t, number, "index") for t in tokens[1:4])
            n = header["dim"]
            if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n):
                raise ConstraintError("range", "line {}: index outside 1..{}".format(number, n), (i - 1, j - 1, k - 1))
            if i > j:
                raise ConstraintError("order", "line {}: c {} {} {} has j < i, only i <= j is stored".format(number, i, j, k), (i - 1, j - 1, k - 1))
            key = (i - 1, j - 1, k - 1)
            if key in constants:
                raise ConstraintError("duplicate", "line {}: c {} {} {} given twice".format(number, i, j, k), key)
            if not COEFFICIENT.fullmatch(tokens[4]):
                raise ParseError(number, "bad coefficient '{}', expected an integer or a/b".format(tokens[4]))
            try:
                value = Fraction(tokens[4])
            except (ValueError, ZeroDivisionError):
                raise ParseError(number, "bad coefficient '{}'".format(tokens[4]))
            try:
                constants[key] = header["field"].element(value)
            except FieldError as e:
                raise ConstraintError("field", "line {}: {}".format(number, e), key)
            continue
        if keyword in header:
            raise ParseError(number, "{} given twice".format(keyword))
        if keyword == "name":
            if len(tokens) != 2:
                raise ParseError(number, "expected 'name <token>'")
            header["name"] = tokens[1]
        elif keyword == "field":
            token = " ".join(tokens[1:])
            if not re.fullmatch(r"Q|F\s*[0-9]+", token):
                raise ParseError(number, "expected 'field Q' or 'field F <p>', got '{}'".format(token))
            try:
                header["field"] = FieldDescriptor.parse(token)
            except FieldError as e:
                raise ConstraintError("field", "line {}: {}".format(number, e))
        elif keyword == "dim":
            if len(tokens) != 2:
                raise ParseError(number, "expected 'dim <n>'")
            header["dim"] = _int_token(tokens[1], number, "dim")
            if header["dim"] < 1:
                raise ParseError(number, "dim must be at least 1")
        elif keyword == "parity":
            if "dim" not in header:
                raise ParseError(number, "parity before dim")
            bits = tokens[1:]
            if len(bits) != header["dim"] or any(b not in ("0", "1") for b in bits):
                raise ParseError(number, "expected {} parity bits of 0 or 1".format(header["dim"]))
            header["parity"] = [int(b) for b in bits]
        else:
            raise ParseError(number, "unknown keyword '{}'".format(keyword))
    if not seen_magic:
        raise ParseError(max(last, 1), "empty file")
    missing = [key for key in ("name", "field", "dim", "parity") if key not in header]
    if missing:
        raise ParseError(last, "missing {}".format(", ".join(missing)))
    return SuperAlgebra(header["name"], header["field"], header["parity"], constants, check=check)


def serialize_algebra(algebra):
    """
    Text form read back by parse_algebra
    """
    lines = [FILE_MAGIC]
    lines.append("name {}".format(algebra.name))
    lines.append("field {}".format(algebra.field.name()))
    lines.append("dim {}".format(algebra.dim))
    lines.append("parity {}".format(" ".join(str(b) for b in algebra.parity)))
    for (i, j, k) in sorted(algebra.constants):
        lines.append("c {} {} {} {}".format(i + 1, j + 1, k + 1, algebra.field.format(algebra.constants[(i, j, k)])))
    return "\n".join(lines) + "\n"


def load_source(source, field_token=None, check=True):
    """
    An algebra from a file or a catalog:KEY reference, optionally moved to another field
    """
    if source.startswith(CATALOG_PREFIX):
        algebra = lookup(source[len(CATALOG_PREFIX) :])
    else:
        with open(source, "r", encoding="utf-8") as han:
            algebra = parse_algebra(han.read(), check=check)
    if field_token:
        algebra = algebra.over_field(FieldDescriptor.parse(field_token))
    return algebra


def command_validate(app, args, out):
    algebra = load_source(args.file, check=False)
    report = validate(algebra, app.pool)
    if report.is_valid:
        out.write("valid true\n")
        return EXIT_OK
    out.write("valid false\n")
    for line in report.lines():
        out.write("{}\n".format(line))
    return EXIT_INVALID


def command_analyze(app, args, out):
    algebra = load_source(args.source, args.field)
    analysis = app.analyze(algebra)
    for line in analysis.lines():
        out.write("{}\n".format(line))
    if not analysis.validation.is_valid:
        for line in analysis.validation.lines():
            out.write("violation {}\n".format(line))
        return EXIT_INVALID
    if analysis.verify_failures:
        return EXIT_INVALID
    if analysis.budget_exceeded:
        app.log("Warn: simplicity undecided, {}".format(analysis.verdict.reason))
        return EXIT_BUDGET
    return EXIT_OK


def command_spaces(app, args, out):
    algebra = load_source(args.source, args.field)
    require_valid(algebra, app.pool)
    kind = WHICH[args.which]
    space = compute_space(algebra, kind, args.degree)
    out.write("space {}\n".format(kind))
    out.write("degree {}\n".format(args.degree))
    out.write("dim {}\n".format(space.dim))
    if args.basis:
        coordinates = " ".join(",".join(str(i + 1) for i in c) for c in space.coordinates)
        out.write("coordinates {}\n".format(coordinates))
        for vector in space.space.basis:
            out.write("basis {}\n".format(format_vector(algebra.field, vector)))
    return EXIT_OK


def command_catalog(app, args, out):
    if args.action == "list":
        for entry in catalog_entries():
            out.write("{} {} {}\n".format(entry.key, entry.known_simple, entry.description))
        return EXIT_OK
    if not args.key:
        raise CatalogError("catalog emit needs a key")
    out.write(serialize_algebra(lookup(args.key)))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="superbider", description="Exact centroids, superderivations, super-biderivations and super-commuting maps of Lie superalgebras")
    parser.add_argument("--version", action="version", version=THIS_VERSION)
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--threads", help="worker processes, a number or auto")
    parser.add_argument("--debug", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the Lie superalgebra axioms")
    p.add_argument("file")
    p.set_defaults(handler=command_validate, pool=True)

    p = sub.add_parser("analyze", help="full analysis report")
    p.add_argument("source", help="algebra file or catalog:KEY")
    p.add_argument("--field", help="compute over this field, Q or F<p>")
    p.add_argument("--prime", type=int, help="reduction prime for the simplicity check")
    p.add_argument("--budget", type=int, help="line enumeration budget")
    p.set_defaults(handler=command_analyze, pool=True)

    p = sub.add_parser("spaces", help="one space with its dimension and optional basis")
    p.add_argument("source", help="algebra file or catalog:KEY")
    p.add_argument("--which", required=True, choices=sorted(WHICH))
    p.add_argument("--degree", type=int, default=0, choices=[0, 1])
    p.add_argument("--basis", action="store_true")
    p.add_argument("--field", help="compute over this field, Q or F<p>")
    p.set_defaults(handler=command_spaces, pool=False)

    p = sub.add_parser("catalog", help="list or emit test bed algebras")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("key", nargs="?")
    p.set_defaults(handler=command_catalog, pool=False)
    return parser


def main(argv=None, out=None, stream=None):
    """
    Command line entry point, returns the exit code
    """
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)

    overrides = {}
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.debug:
        overrides["debug_enable"] = True
    if getattr(args, "prime", None) is not None:
        overrides["prime"] = args.prime
    if getattr(args, "budget", None) is not None:
        overrides["enumeration_budget"] = args.budget

    app = SuperBider(overrides=overrides, config_path=args.config, stream=stream)
    if args.command == "spaces" and args.which == "commuting" and args.degree != 0:
        app.log("Error: linear super-commuting maps are even, use --degree 0")
        return EXIT_PARSE
    try:
        if args.pool:
            app.create_pool()
        return args.handler(app, args, out)
    except (ParseError, FieldError, FieldMismatchError, CatalogError, PolicyError, OSError) as e:
        app.log("Error: {}".format(e))
        app.record_status("Error: {}".format(e), had_errors=True)
        return EXIT_PARSE
    except (ConstraintError, InvalidAlgebraError) as e:
        app.log("Error: {}".format(e))
        app.record_status("Error: {}".format(e), had_errors=True)
        return EXIT_INVALID
    except Exception as e:
        app.log("Error: Exception raised {}".format(e))
        app.log("Error: " + traceback.format_exc())
        app.record_status("Error: Exception raised {}".format(e), had_errors=True)
        raise e
    finally:
        app.close_pool()


if __name__ == "__main__":
    sys.exit(main())

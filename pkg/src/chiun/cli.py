"""Command-line front end.

Exit codes: 0 success (and identity confirmed for ``verify``), 1 input or
limit errors, 2 identity violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

import jsonschema

from .eqcomplex import EquivariantCellComplex, chi_un_complex
from .errors import (
    GroupTooLarge,
    InvalidAction,
    InvalidPermutation,
    IsoUndecided,
    SchemaError,
    SubgroupEnumTooLarge,
)
from .groupring import (
    HomSpec,
    RElement,
    class_from_expr,
    evaluate_hom,
    format_relement,
    parse_relement,
    r_to_polynomial,
)
from .gset import GSet, class_in_R, disjoint_union
from .isoclass import default_registry, find_isomorphism
from .lambdaseries import (
    DEFAULT_DEGREE,
    LambdaStructure,
    SeriesR,
    monomial_lambda_series,
    power,
)
from .permgroup import (
    LIMITS,
    PermGroup,
    group_from_spec,
    parse_group_expr,
    perm_from_cycles,
    perm_to_cycles,
    subgroup_conjugacy_classes,
)
from .vstrata import VStrata, chi_un_vmfd, verify_macdonald, verify_macdonald_gset

# ---------------------------------------------------------------------------
# schemas
# ---------------------------------------------------------------------------

_CYCLES = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 1}}}

_DEFS = {
    "spec": {
        "oneOf": [
            {"type": "string", "minLength": 1},
            {
                "type": "object",
                "required": ["named"],
                "additionalProperties": False,
                "properties": {
                    "named": {"enum": ["trivial", "cyclic", "symmetric", "dihedral", "klein4", "quaternion8"]},
                    "n": {"type": "integer", "minimum": 1},
                },
            },
            {
                "type": "object",
                "required": ["perm"],
                "additionalProperties": False,
                "properties": {
                    "perm": {
                        "type": "object",
                        "required": ["degree", "generators"],
                        "additionalProperties": False,
                        "properties": {
                            "degree": {"type": "integer", "minimum": 1},
                            "generators": {"type": "array", "items": _CYCLES},
                        },
                    }
                },
            },
            {
                "type": "object",
                "required": ["product"],
                "additionalProperties": False,
                "properties": {"product": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/spec"}}},
            },
            {
                "type": "object",
                "required": ["wreath"],
                "additionalProperties": False,
                "properties": {
                    "wreath": {
                        "type": "object",
                        "required": ["base", "n"],
                        "additionalProperties": False,
                        "properties": {"base": {"$ref": "#/$defs/spec"}, "n": {"type": "integer", "minimum": 1}},
                    }
                },
            },
        ]
    },
    "action": {"type": "array", "items": _CYCLES},
}

SCHEMAS: dict[str, dict] = {
    "group": {
        "type": "object",
        "required": ["kind", "spec"],
        "additionalProperties": False,
        "properties": {"kind": {"const": "group"}, "spec": {"$ref": "#/$defs/spec"}},
    },
    "gset": {
        "type": "object",
        "required": ["kind", "group", "points", "action"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "gset"},
            "group": {"$ref": "#/$defs/spec"},
            "points": {"type": "integer", "minimum": 0},
            "action": {"$ref": "#/$defs/action"},
        },
    },
    "complex": {
        "type": "object",
        "required": ["kind", "group", "layers"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "complex"},
            "group": {"$ref": "#/$defs/spec"},
            "layers": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["dim", "points", "action"],
                    "additionalProperties": False,
                    "properties": {
                        "dim": {"type": "integer", "minimum": 0},
                        "points": {"type": "integer", "minimum": 0},
                        "action": {"$ref": "#/$defs/action"},
                    },
                },
            },
        },
    },
    "vmanifold": {
        "type": "object",
        "required": ["kind", "strata"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "vmanifold"},
            "strata": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["chi", "group"],
                    "additionalProperties": False,
                    "properties": {"chi": {"type": "integer"}, "group": {"$ref": "#/$defs/spec"}},
                },
            },
        },
    },
    "series": {
        "type": "object",
        "required": ["kind", "coefficients"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "series"},
            "coefficients": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        },
    },
}
for _schema in SCHEMAS.values():
    _schema["$defs"] = _DEFS


def validate_document(doc: Any) -> str:
    """Validate against the schema for ``doc["kind"]``; returns the kind."""
    if not isinstance(doc, dict) or doc.get("kind") not in SCHEMAS:
        raise SchemaError(f"document kind must be one of {sorted(SCHEMAS)}")
    try:
        jsonschema.validate(doc, SCHEMAS[doc["kind"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None
    return doc["kind"]


def load_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    validate_document(doc)
    return doc


# ---------------------------------------------------------------------------
# building objects from documents
# ---------------------------------------------------------------------------


def _resolver(order: int, ident: int) -> PermGroup:
    try:
        return default_registry().lookup(order, ident).representative
    except KeyError as exc:
        raise SchemaError(str(exc)) from None


def build_group(spec) -> PermGroup:
    return group_from_spec(spec, _resolver)


def _action(G: PermGroup, points: int, cycles: list) -> list:
    if len(cycles) != len(G.generators):
        raise InvalidAction(
            f"action lists {len(cycles)} permutations but the group has {len(G.generators)} generators"
        )
    if points == 0:
        return [()] * len(cycles)
    return [perm_from_cycles(c, points) for c in cycles]


def build_gset(doc: dict, G: PermGroup | None = None) -> GSet:
    G = G or build_group(doc["group"])
    return GSet(G, doc["points"], _action(G, doc["points"], doc["action"]))


def build_complex(doc: dict) -> EquivariantCellComplex:
    G = build_group(doc["group"])
    layers: dict[int, GSet] = {}
    for layer in doc["layers"]:
        X = GSet(G, layer["points"], _action(G, layer["points"], layer["action"]))
        k = layer["dim"]
        layers[k] = disjoint_union(layers[k], X) if k in layers else X
    return EquivariantCellComplex(G, layers)


def build_vstrata(doc: dict) -> VStrata:
    reg = default_registry()
    return VStrata([(s["chi"], reg.classify(build_group(s["group"]))) for s in doc["strata"]], reg)


def build_series(doc: dict) -> SeriesR:
    return SeriesR([parse_relement(c) for c in doc["coefficients"]])


def chi_un_of_document(doc: dict) -> RElement:
    kind = doc["kind"]
    if kind == "gset":
        return class_in_R(build_gset(doc))
    if kind == "complex":
        return chi_un_complex(build_complex(doc))
    if kind == "vmanifold":
        return chi_un_vmfd(build_vstrata(doc))
    if kind == "group":
        return RElement({default_registry().classify(build_group(doc["spec"])): 1})
    raise SchemaError(f"no universal Euler characteristic for kind {kind!r}")


def group_argument(arg: str) -> PermGroup:
    """A group given as a document path, an inline JSON spec, or an expression."""
    if os.path.isfile(arg):
        doc = load_document(arg)
        if doc["kind"] != "group":
            raise SchemaError(f"{arg} is a {doc['kind']} document, expected a group")
        return build_group(doc["spec"])
    text = arg.strip()
    if text.startswith("{"):
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"inline group spec is not valid JSON: {exc.msg}") from None
        validate_document({"kind": "group", "spec": spec})
        return build_group(spec)
    return parse_group_expr(text, _resolver)


def _fmt_fraction(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

_KIND_FOR = {"gset": "gset", "complex": "complex", "vmfd": "vmanifold"}


def cmd_chi(args, out) -> int:
    doc = load_document(args.file)
    expected = _KIND_FOR[args.command]
    if doc["kind"] != expected:
        raise SchemaError(f"{args.file} is a {doc['kind']} document, expected {expected}")
    value = chi_un_of_document(doc)
    print(format_relement(value), file=out)
    if args.polynomial:
        print(r_to_polynomial(value), file=out)
    return 0


def cmd_invariant(args, out) -> int:
    spec = HomSpec.parse(args.kind)
    doc = load_document(args.file)
    print(_fmt_fraction(evaluate_hom(chi_un_of_document(doc), spec)), file=out)
    return 0


def cmd_group(args, out) -> int:
    reg = default_registry()
    if args.action == "iso":
        G, H = group_argument(args.a), group_argument(args.b)
        witness = find_isomorphism(G, H)
        if witness is None:
            print("not isomorphic", file=out)
        else:
            print("isomorphic", file=out)
            for g, h in witness.items():
                print(f"  {_cycles_text(g)} -> {_cycles_text(h)}", file=out)
        return 0
    G = group_argument(args.a)
    if args.action == "decompose":
        cls = reg.classify(G)
        factors = reg.factors(cls)
        print(" x ".join(f"[{f.name}]" for f in factors) if factors else "[1]", file=out)
        for f in factors:
            print(f"  {f.name}: order {f.order}", file=out)
        return 0
    # classes
    for sc in subgroup_conjugacy_classes(G):
        cls = reg.classify(sc.group)
        print(f"order {sc.order}, {sc.size} conjugate(s): [{cls.name}]", file=out)
    return 0


def _cycles_text(p) -> str:
    cycles = perm_to_cycles(p)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) or "()"


def cmd_series(args, out) -> int:
    N = args.degree
    if args.which in ("zeta", "lambda"):
        if args.group is None:
            raise SchemaError("--group is required")
        s = LambdaStructure.SYMMETRIC if args.which == "zeta" else LambdaStructure.CONFIGURATION
        if os.path.isfile(args.group) or args.group.strip().startswith("{"):
            cls = default_registry().classify(group_argument(args.group))
        else:
            cls = class_from_expr(args.group)
        print(monomial_lambda_series(cls, s, N), file=out)
        return 0
    if args.base is None or args.exponent is None:
        raise SchemaError("series power needs --base and --exponent")
    doc = load_document(args.base)
    if doc["kind"] != "series":
        raise SchemaError(f"{args.base} is a {doc['kind']} document, expected series")
    f = build_series(doc).truncate(N)
    m = parse_relement(args.exponent)
    print(power(f, m, LambdaStructure.parse(args.structure)), file=out)
    return 0


def cmd_verify(args, out) -> int:
    doc = load_document(args.file)
    mode = LambdaStructure.parse(args.mode)
    if args.gset:
        if doc["kind"] != "gset":
            raise SchemaError(f"{args.file} is a {doc['kind']} document, expected gset")
        report = verify_macdonald_gset(build_gset(doc), mode, args.degree)
    else:
        if doc["kind"] != "vmanifold":
            raise SchemaError(f"{args.file} is a {doc['kind']} document, expected vmanifold")
        report = verify_macdonald(build_vstrata(doc), mode, args.degree)
    print(report.summary(), file=out)
    if args.verbose:
        for line in report.lines()[1:]:
            print(line, file=out)
    return 0 if report.ok else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chiun", description="Universal Euler characteristic toolkit.")
    p.add_argument("--cap", type=int, default=None, help="group enumeration cap (default 20000)")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("gset", "complex", "vmfd"):
        q = sub.add_parser(name, help=f"print chi^un of a {_KIND_FOR[name]} document")
        q.add_argument("file")
        q.add_argument("--polynomial", action="store_true", help="also print the Krull-Schmidt polynomial form")
        q.set_defaults(func=cmd_chi)

    q = sub.add_parser("invariant", help="evaluate an additive invariant")
    q.add_argument("--kind", required=True, help="es | orb | order:K | gamma:free:M | gamma:free-abelian:M | quotient")
    q.add_argument("file")
    q.set_defaults(func=cmd_invariant)

    q = sub.add_parser("group", help="isomorphism, decomposition and subgroup classes")
    q.add_argument("action", choices=["iso", "decompose", "classes"])
    q.add_argument("a")
    q.add_argument("b", nargs="?")
    q.set_defaults(func=cmd_group)

    q = sub.add_parser("series", help="lambda-series and power structure")
    q.add_argument("which", choices=["zeta", "lambda", "power"])
    q.add_argument("--group")
    q.add_argument("--base")
    q.add_argument("--exponent")
    q.add_argument("--structure", default="sym", choices=["sym", "conf"])
    q.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    q.set_defaults(func=cmd_series)

    q = sub.add_parser("verify", help="check a Macdonald identity")
    q.add_argument("--mode", required=True, choices=["sym", "conf"])
    q.add_argument("--gset", action="store_true", help="FILE is a G-set; compare against wreath orbit data")
    q.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    q.add_argument("--verbose", action="store_true", help="print the coefficients too")
    q.add_argument("file")
    q.set_defaults(func=cmd_verify)
    return p


_DIAGNOSTICS = (
    (GroupTooLarge, "group too large"),
    (SubgroupEnumTooLarge, "subgroup enumeration too large"),
    (IsoUndecided, "isomorphism undecided"),
    (InvalidPermutation, "invalid permutation"),
    (InvalidAction, "invalid action"),
    (SchemaError, "invalid input"),
)


def run_command(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.command == "group" and args.action == "iso" and args.b is None:
        print("error: invalid input: group iso needs two groups", file=err)
        return 1
    if getattr(args, "degree", 1) is not None and getattr(args, "degree", 1) < 1:
        print("error: invalid input: --degree must be >= 1", file=err)
        return 1
    saved = LIMITS.cap
    if args.cap is not None:
        if args.cap < 1:
            print("error: invalid input: --cap must be positive", file=err)
            return 1
        LIMITS.cap = args.cap
    try:
        return args.func(args, out)
    except tuple(e for e, _ in _DIAGNOSTICS) as exc:
        for etype, label in _DIAGNOSTICS:
            if isinstance(exc, etype):
                print(f"error: {label}: {exc}", file=err)
                break
        return 1
    finally:
        LIMITS.cap = saved


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()

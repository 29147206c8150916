"""Command-line entry point: ``rulealg <command> ...``.

Operands are DSL expressions (``a``, ``adag ⊎ a``, ``[a, adag]_dpo`` ...);
``--file`` loads graph, rule and diagram definitions first.  Exit status is 0
on success, 1 when a verification finds a mismatch and 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .algebra import Element, commutator, compose_D, dagger, format_element, representative
from .diagrams import diagram_to_dot
from .dsl import DslDocument, DslError, evaluate_expression, parse, print_document, run
from .errors import ContractViolation
from .graphs import to_dot
from .hopf import TensorElement, antipode, coproduct, evaluate_pbw, format_pbw, format_tensor, pbw_normal_form
from .reduction import ALL_TYPES, RewritingType, compose_R, reduce
from .serialize import dumps, element_to_json, pbw_to_json, tensor_to_json
from .subalgebras import (
    hw_compose_closed_form,
    hw_element,
    hw_rule,
    hw_rule_closed_form,
    register_builtin_names,
    vertex_normal_form,
)
from .verification import SUITES, run_suite

TYPE_CHOICES = [t.value for t in ALL_TYPES]


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit status 2 with our own prefix
        self.print_usage(sys.stderr)
        self.exit(2, f"rulealg: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rulealg", description="Rule diagram algebras, rule algebras and their Hopf structure.")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--file", metavar="PATH", help="DSL file with graph/rule/diagram definitions")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compose", help="product of two elements")
    c.add_argument("x")
    c.add_argument("y")
    c.add_argument("--type", default="dpo", choices=TYPE_CHOICES + ["diagram"],
                   help="rule algebra type, or 'diagram' for the diagram algebra (default dpo)")

    c = sub.add_parser("reduce", help="reduce an element to the rule algebra of a type")
    c.add_argument("x")
    c.add_argument("--type", default="dpo", choices=TYPE_CHOICES)

    c = sub.add_parser("commutator", help="[x, y] in a rule algebra or the diagram algebra")
    c.add_argument("x")
    c.add_argument("y")
    c.add_argument("--type", default="dpo", choices=TYPE_CHOICES + ["diagram"])

    for name, text in (("coproduct", "Δ of an element"), ("antipode", "S of an element"),
                       ("dagger", "the dagger of an element")):
        c = sub.add_parser(name, help=text)
        c.add_argument("x")

    c = sub.add_parser("normal-order", help="normal-ordered products",
                       description="hw R1 S1 T1 R2 S2 T2: d(R1,S1,T1) * d(R2,S2,T2) checked against the "
                                   "closed form; hw M1 N1 M2 N2 --type T: the rule algebra version; "
                                   "vertex M N P --type T: a†^M * I^N * a^P; pbw EXPR: PBW normal form.")
    c.add_argument("family", choices=["hw", "vertex", "pbw"])
    c.add_argument("args", nargs="+")
    c.add_argument("--type", default="dpo", choices=TYPE_CHOICES)

    c = sub.add_parser("verify", help="run a verification suite")
    c.add_argument("suite", choices=list(SUITES))
    c.add_argument("--type", default="dpo", choices=TYPE_CHOICES + ["all"])
    c.add_argument("--verbose", action="store_true", help="list every check")

    c = sub.add_parser("export-dot", help="DOT for a graph name or the basis diagrams of an expression")
    c.add_argument("x")

    c = sub.add_parser("run", help="evaluate the print statements of a DSL file")
    c.add_argument("path")

    c = sub.add_parser("fmt", help="print a DSL file in normal layout")
    c.add_argument("path")
    return p


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _context(args) -> DslDocument | None:
    return parse(_read(args.file)) if args.file else None


def _element(text: str, ctx) -> Element:
    v, _ = evaluate_expression(text, ctx)
    if isinstance(v, TensorElement):
        raise InputError(f"{text!r} is a tensor, not an element")
    if not isinstance(v, Element):
        v = v * Element.unit()
    return v


def _emit(args, value, unit: str = "d_∅") -> None:
    names = getattr(args, "names", None)
    if isinstance(value, Element):
        print(dumps(element_to_json(value, unit, names=names)) if args.json else format_element(value, unit, names))
    elif isinstance(value, TensorElement):
        print(dumps(tensor_to_json(value, unit, names)) if args.json else format_tensor(value, unit, names))
    else:
        print(dumps(value) if args.json else value)


def _types(opt: str) -> list[RewritingType]:
    return list(ALL_TYPES) if opt == "all" else [RewritingType.parse(opt)]


def _ints(vals: Sequence[str], n: tuple[int, ...], what: str) -> list[int]:
    if len(vals) not in n:
        raise InputError(f"{what} takes {' or '.join(map(str, n))} integer arguments")
    try:
        out = [int(v) for v in vals]
    except ValueError:
        raise InputError(f"{what} arguments must be integers") from None
    if any(v < 0 for v in out):
        raise InputError(f"{what} arguments must be non-negative")
    return out


def _normal_order(args, ctx) -> int:
    if args.family == "pbw":
        if len(args.args) != 1:
            raise InputError("normal-order pbw takes one expression")
        x = _element(args.args[0], ctx)
        p = pbw_normal_form(x)
        ok = evaluate_pbw(p) == x
        names = getattr(args, "names", None)
        print(dumps(pbw_to_json(p, names=names)) if args.json else format_pbw(p, names=names))
        return 0 if ok else 1
    if args.family == "vertex":
        m, n, q = _ints(args.args, (3,), "normal-order vertex")
        _emit(args, vertex_normal_form(m, n, q, args.type), "r_∅")
        return 0
    vals = _ints(args.args, (4, 6), "normal-order hw")
    if len(vals) == 6:
        got = compose_D(hw_element(*vals[:3]), hw_element(*vals[3:]))
        exp = hw_compose_closed_form(*vals)
        unit = "d_∅"
    else:
        got = compose_R(hw_rule(*vals[:2]), hw_rule(*vals[2:]), args.type)
        exp = hw_rule_closed_form(*vals)
        unit = "r_∅"
    _emit(args, got, unit)
    if got != exp:
        print(f"mismatch with closed form: {format_element(exp, unit)}", file=sys.stderr)
        return 1
    return 0


def _export_dot(args, ctx) -> int:
    if ctx is not None and args.x in ctx.graphs:
        print(to_dot(ctx.graphs[args.x], args.x), end="")
        return 0
    if ctx is not None and args.x in ctx.diagrams:
        print(diagram_to_dot(ctx.diagrams[args.x], args.x), end="")
        return 0
    x = _element(args.x, ctx)
    for i, (k, _) in enumerate(x.items()):
        print(diagram_to_dot(representative(k), f"{args.x}#{i}" if len(x) > 1 else args.x), end="")
    return 0


def dispatch(args) -> int:
    register_builtin_names()
    cmd = args.command
    if cmd == "run":
        outs = run(parse(_read(args.path)))
        for o in outs:
            if args.json:
                v = o.value
                unit = "r_∅" if o.rule else "d_∅"
                doc = element_to_json(v, unit, names=o.names) if isinstance(v, Element) else \
                    tensor_to_json(v, unit, o.names) if isinstance(v, TensorElement) else str(v)
                print(dumps({"source": o.source, "value": doc}))
            else:
                print(f"{o.source} = {o.text}")
        return 0
    if cmd == "fmt":
        print(print_document(parse(_read(args.path))), end="")
        return 0
    ctx = _context(args)
    args.names = ctx.names if ctx else None
    if cmd == "compose":
        x, y = _element(args.x, ctx), _element(args.y, ctx)
        if args.type == "diagram":
            _emit(args, compose_D(x, y))
        else:
            _emit(args, compose_R(x, y, args.type), "r_∅")
        return 0
    if cmd == "commutator":
        x, y = _element(args.x, ctx), _element(args.y, ctx)
        if args.type == "diagram":
            _emit(args, commutator(x, y))
        else:
            T = RewritingType.parse(args.type)
            _emit(args, commutator(x, y, lambda p, q: compose_R(p, q, T)), "r_∅")
        return 0
    if cmd == "reduce":
        _emit(args, reduce(_element(args.x, ctx), args.type), "r_∅")
        return 0
    if cmd == "coproduct":
        _emit(args, coproduct(_element(args.x, ctx)))
        return 0
    if cmd == "antipode":
        _emit(args, antipode(_element(args.x, ctx)))
        return 0
    if cmd == "dagger":
        _emit(args, dagger(_element(args.x, ctx)))
        return 0
    if cmd == "normal-order":
        return _normal_order(args, ctx)
    if cmd == "export-dot":
        return _export_dot(args, ctx)
    if cmd == "verify":
        rep = run_suite(args.suite, _types(args.type))
        if args.json:
            print(dumps(rep.to_json()))
        else:
            print("\n".join(rep.lines(args.verbose)))
        return 0 if rep.ok else 1
    raise InputError(f"unknown command {cmd!r}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except DslError as exc:
        print(f"rulealg: {exc.code} at {exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return 2
    except (InputError, ContractViolation) as exc:
        print(f"rulealg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

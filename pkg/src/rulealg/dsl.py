"""A small text language for graphs, rules, diagrams and algebra expressions.

    # comments run to the end of the line
    graph P2 { v1 v2 e1: v1->v2 }
    rule del { in P2 out {v1 v2} map { v1->v1, v2->v2 } }
    rule A { in {v1} out {} map {} }
    diagram D = compose(A, del, {v1->v1})
    diagram S = superpose(A, del)
    let x = [a, adag]_dpo + 1/2 * a ⊎ adag
    print x ⊛[spoa] S(del)†

Expression operators, loosest first: ``+ -``; then the left-associative
products ``*`` (diagram composition, or scaling when one side is a number),
``*[T]`` (rule algebra product of type T), ``⊎``/``(+)`` (superposition),
``⊛``/``(*)`` and ``⊛[T]`` (nontrivial parts); unary ``-``; postfix ``†``.
Atoms are numbers (``3``, ``2/5``), names, ``d_∅``/``r_∅``, parentheses,
commutators ``[x, y]`` / ``[x, y]_T`` and the functions ``S``, ``Δ``/``Delta``,
``dag``, ``eps``, ``reduce[T]``, ``hat``, ``hatdag``.

Diagnostics carry a code, a line and a column:

    E100 syntax error          E104 duplicate name or identifier
    E101 unknown name          E105 invalid construction
    E102 malformed edge        E106 evaluation error
    E103 non-injective correspondence
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .algebra import (
    Element,
    commutator,
    compose_D,
    dagger,
    format_element,
    intern,
    nontrivial_compose,
    superpose,
)
from .diagrams import Match, RuleDiagram, compose_along, linear_rule
from .errors import ContractViolation
from .graphs import Multigraph
from .hopf import TensorElement, antipode, coproduct, counit, format_tensor
from .reduction import RewritingType, compose_R, nontrivial_compose_R, reduce
from .subalgebras import BUILTINS, graph_hat, graph_hat_dag, register_builtin_names


class DslError(Exception):
    def __init__(self, code: str, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {code} {message}")
        self.code, self.message, self.line, self.col = code, message, line, col


# ---------------------------------------------------------------- lexer

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("WS", r"[ \t\r]+"),
    ("NUMBER", r"\d+(?:/\d+)?"),
    ("UNIT", r"[dr]_∅"),
    ("ARROW", r"->"),
    ("OP", r"\(\+\)|\(\*\)|[⊎⊛*·+\-†]"),
    ("NAME", r"[^\W\d][\w.]*"),
    ("PUNCT", r"[(){}\[\],:=]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{k}>{p})" for k, p in _TOKEN_SPEC))
_ALIASES = {"(+)": "⊎", "(*)": "⊛", "·": "*"}


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError("E100", f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "NEWLINE":
            out.append(Token("NEWLINE", "\n", line, pos - start + 1))
            line, start = line + 1, m.end()
        elif kind != "WS":
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("EOF", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------- document

@dataclass
class GraphSpec:
    """Inline ``{ v1 e1: v1->v2 }`` (items) or a reference to a named graph."""
    items: list[tuple] | None = None  # ("v", id) or ("e", id, src, tgt)
    ref: str | None = None


@dataclass
class GraphDef:
    name: str
    spec: GraphSpec


@dataclass
class RuleDef:
    name: str
    inp: GraphSpec
    out: GraphSpec
    pairs: list[tuple[str, str]] | None


@dataclass
class DiagramDef:
    name: str
    op: str  # "superpose" | "compose"
    args: list[str]
    pairs: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class Expr:
    tokens: list[Token]
    tree: tuple


@dataclass
class LetDef:
    name: str
    expr: Expr


@dataclass
class PrintStmt:
    expr: Expr


@dataclass
class Comment:
    text: str


Statement = Union[GraphDef, RuleDef, DiagramDef, LetDef, PrintStmt, Comment]


@dataclass
class DslDocument:
    statements: list[Statement]
    graphs: dict[str, Multigraph]
    elements: dict[str, Element]
    diagrams: dict[str, RuleDiagram]
    names: dict[str, str] = field(default_factory=dict)  # class key -> defined name


# ---------------------------------------------------------------- parser

_TYPED = {"*", "⊛"}
_FUNCS = {"S", "Δ", "Delta", "dag", "eps", "reduce", "hat", "hatdag"}
_UNIT_NAMES = {"d_∅", "r_∅", "d_0", "r_0"}


def _type_of(tok: Token) -> RewritingType:
    try:
        return RewritingType.parse(tok.text.lstrip("_"))
    except ContractViolation:
        raise DslError("E100", f"unknown rewriting type {tok.text!r}", tok.line, tok.col) from None


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.graphs: dict[str, Multigraph] = {}
        self.diagrams: dict[str, RuleDiagram] = {}
        self.elements: dict[str, Element] = {}
        self.values: set[str] = set()
        self.names: dict[str, str] = {}
        register_builtin_names()

    # -- token helpers
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind != "NAME" and _ALIASES.get(t.text, t.text) == text or \
            (t.kind == "NAME" and t.text == text)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise DslError("E100", f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def name(self) -> Token:
        t = self.peek()
        if t.kind != "NAME":
            raise DslError("E100", f"expected a name, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def skip_newlines(self) -> None:
        while self.peek().kind == "NEWLINE":
            self.i += 1

    def skip_layout(self) -> None:
        # newlines are insignificant inside braces
        while self.peek().kind == "NEWLINE":
            self.i += 1

    def end_statement(self) -> None:
        t = self.peek()
        if t.kind not in ("NEWLINE", "EOF", "COMMENT"):
            raise DslError("E100", f"unexpected {t.text!r} after statement", t.line, t.col)

    def _fresh(self, tok: Token) -> str:
        n = tok.text
        if n in self.graphs or n in self.elements or n in self.values or n in BUILTINS or n in _UNIT_NAMES:
            raise DslError("E104", f"name {n!r} is already defined", tok.line, tok.col)
        return n

    # -- document
    def document(self) -> DslDocument:
        stmts: list[Statement] = []
        while True:
            self.skip_newlines()
            t = self.peek()
            if t.kind == "EOF":
                break
            if t.kind == "COMMENT":
                stmts.append(Comment(self.next().text))
                continue
            if t.kind != "NAME":
                raise DslError("E100", f"expected a statement, found {t.text!r}", t.line, t.col)
            kw = t.text
            if kw == "graph":
                stmts.append(self.graph_def())
            elif kw == "rule":
                stmts.append(self.rule_def())
            elif kw == "diagram":
                stmts.append(self.diagram_def())
            elif kw == "let":
                self.next()
                nt = self.name()
                n = self._fresh(nt)
                self.expect("=")
                e = self.expr_stmt()
                self.values.add(n)
                stmts.append(LetDef(n, e))
            elif kw == "print":
                self.next()
                stmts.append(PrintStmt(self.expr_stmt()))
            else:
                raise DslError("E100", f"unknown statement {kw!r}", t.line, t.col)
            self.end_statement()
        return DslDocument(stmts, dict(self.graphs), dict(self.elements), dict(self.diagrams), dict(self.names))

    # -- graphs
    def graph_items(self) -> list[tuple]:
        self.expect("{")
        items: list[tuple] = []
        seen: dict[str, Token] = {}
        while True:
            self.skip_layout()
            if self.at("}"):
                self.next()
                break
            t = self.peek()
            if t.kind not in ("NAME", "NUMBER") or "/" in t.text:
                raise DslError("E100", f"expected a vertex or edge, found {t.text!r}", t.line, t.col)
            self.next()
            if t.text in seen:
                raise DslError("E104", f"identifier {t.text!r} used twice", t.line, t.col)
            seen[t.text] = t
            if self.at(":"):
                self.next()
                parts = []
                for want in ("src", "->", "tgt"):
                    p = self.peek()
                    if want == "->":
                        if p.kind != "ARROW":
                            raise DslError("E102", f"edge {t.text!r} needs 'src->tgt'", p.line, p.col)
                        self.next()
                        continue
                    if p.kind not in ("NAME", "NUMBER"):
                        raise DslError("E102", f"edge {t.text!r} is missing its {want}", p.line, p.col)
                    parts.append(self.next())
                items.append(("e", t.text, parts[0].text, parts[1].text, parts[0], parts[1]))
            else:
                items.append(("v", t.text))
        verts = {it[1] for it in items if it[0] == "v"}
        for it in items:
            if it[0] == "e":
                for end in it[4:6]:
                    if end.text not in verts:
                        raise DslError("E102", f"edge {it[1]!r} refers to unknown vertex {end.text!r}",
                                       end.line, end.col)
        return [it[:4] for it in items]

    def graph_spec(self) -> GraphSpec:
        if self.at("{"):
            return GraphSpec(items=self.graph_items())
        t = self.name()
        if t.text not in self.graphs:
            raise DslError("E101", f"unknown graph {t.text!r}", t.line, t.col)
        return GraphSpec(ref=t.text)

    def build_graph(self, spec: GraphSpec) -> Multigraph:
        if spec.ref is not None:
            return self.graphs[spec.ref]
        return Multigraph([it[1] for it in spec.items if it[0] == "v"],
                          {it[1]: (it[2], it[3]) for it in spec.items if it[0] == "e"})

    def graph_def(self) -> GraphDef:
        self.expect("graph")
        n = self._fresh(self.name())
        spec = GraphSpec(items=self.graph_items())
        self.graphs[n] = self.build_graph(spec)
        return GraphDef(n, spec)

    # -- correspondences
    def pairs(self) -> list[tuple[Token, Token]]:
        self.expect("{")
        out: list[tuple[Token, Token]] = []
        self.skip_layout()
        if self.at("}"):
            self.next()
            return out
        while True:
            self.skip_layout()
            x = self.peek()
            if x.kind not in ("NAME", "NUMBER"):
                raise DslError("E100", f"expected an identifier, found {x.text!r}", x.line, x.col)
            self.next()
            if self.peek().kind != "ARROW":
                t = self.peek()
                raise DslError("E100", "expected '->' in correspondence", t.line, t.col)
            self.next()
            y = self.peek()
            if y.kind not in ("NAME", "NUMBER"):
                raise DslError("E100", f"expected an identifier, found {y.text!r}", y.line, y.col)
            self.next()
            out.append((x, y))
            self.skip_layout()
            if self.at(","):
                self.next()
                continue
            self.expect("}")
            return out

    @staticmethod
    def _check_injective(pairs: list[tuple[Token, Token]]) -> None:
        src: set[str] = set()
        tgt: set[str] = set()
        for x, y in pairs:
            if x.text in src:
                raise DslError("E103", f"{x.text!r} is paired twice", x.line, x.col)
            if y.text in tgt:
                raise DslError("E103", f"{y.text!r} is the target of two pairs", y.line, y.col)
            src.add(x.text)
            tgt.add(y.text)

    @staticmethod
    def _split_pairs(pairs, G: Multigraph, H: Multigraph, what: str) -> tuple[dict, dict]:
        vs, es = {}, {}
        gv = {str(v): v for v in G.vertices}
        ge = {str(e): e for e in G.edges}
        hv = {str(v): v for v in H.vertices}
        he = {str(e): e for e in H.edges}
        for x, y in pairs:
            if x.text in gv and y.text in hv:
                vs[gv[x.text]] = hv[y.text]
            elif x.text in ge and y.text in he:
                es[ge[x.text]] = he[y.text]
            elif x.text not in gv and x.text not in ge:
                raise DslError("E101", f"{x.text!r} is not an item of the {what} source", x.line, x.col)
            elif y.text not in hv and y.text not in he:
                raise DslError("E101", f"{y.text!r} is not an item of the {what} target", y.line, y.col)
            else:
                raise DslError("E105", f"{x.text!r}->{y.text!r} pairs a vertex with an edge", x.line, x.col)
        return vs, es

    def rule_def(self) -> RuleDef:
        start = self.expect("rule")
        n = self._fresh(self.name())
        self.expect("{")
        self.skip_layout()
        self.expect("in")
        inp = self.graph_spec()
        self.skip_layout()
        self.expect("out")
        out = self.graph_spec()
        self.skip_layout()
        raw = None
        if self.at("map"):
            self.next()
            raw = self.pairs()
            self.skip_layout()
        self.expect("}")
        I, O = self.build_graph(inp), self.build_graph(out)
        pairs = raw or []
        self._check_injective(pairs)
        r_v, r_e = self._split_pairs(pairs, I, O, "rule")
        try:
            d = linear_rule(I, O, r_v, r_e)
        except ContractViolation as exc:
            raise DslError("E105", f"rule {n!r}: {exc}", start.line, start.col) from None
        self._define(n, d)
        return RuleDef(n, inp, out, None if raw is None else [(x.text, y.text) for x, y in raw])

    def _define(self, n: str, d: RuleDiagram) -> None:
        self.diagrams[n] = d
        k = intern(d)
        self.names.setdefault(k, n)
        self.elements[n] = Element.basis(k)

    def _diagram_arg(self) -> Token:
        t = self.name()
        if t.text not in self.diagrams:
            raise DslError("E101", f"unknown rule or diagram {t.text!r}", t.line, t.col)
        return t

    def diagram_def(self) -> DiagramDef:
        start = self.expect("diagram")
        n = self._fresh(self.name())
        self.expect("=")
        op = self.name()
        if op.text not in ("superpose", "compose"):
            raise DslError("E100", f"expected superpose(...) or compose(...), found {op.text!r}", op.line, op.col)
        self.expect("(")
        args = [self._diagram_arg()]
        pairs: list[tuple[Token, Token]] = []
        while self.at(","):
            self.next()
            if op.text == "compose" and len(args) == 2:
                pairs = self.pairs()
                break
            args.append(self._diagram_arg())
        self.expect(")")
        try:
            if op.text == "superpose":
                d = self.diagrams[args[0].text]
                for a in args[1:]:
                    d = compose_along(d, Match(), self.diagrams[a.text], check=False)
            else:
                if len(args) != 2:
                    raise DslError("E100", "compose takes two diagrams and a match", op.line, op.col)
                self._check_injective(pairs)
                A, B = self.diagrams[args[0].text], self.diagrams[args[1].text]
                # pairs read (output of B) -> (input of A)
                vs, es = self._split_pairs(pairs, B.out, A.inp, "match")
                d = compose_along(A, Match.of(vs, es), B, check=True, tags=(args[0].text, args[1].text))
        except ContractViolation as exc:
            raise DslError("E105", f"diagram {n!r}: {exc}", start.line, start.col) from None
        self._define(n, d)
        return DiagramDef(n, op.text, [a.text for a in args], [(x.text, y.text) for x, y in pairs])

    # -- expressions
    def expr_stmt(self) -> Expr:
        lo = self.i
        tree = self.sum()
        return Expr(self.toks[lo:self.i], tree)

    def sum(self) -> tuple:
        x = self.product()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.next().text
            x = ("bin", op, None, x, self.product())
        return x

    def product(self) -> tuple:
        x = self.unary()
        while self.peek().kind == "OP" and _ALIASES.get(self.peek().text, self.peek().text) in ("*", "⊎", "⊛"):
            op = _ALIASES.get(self.next().text, self.toks[self.i - 1].text)
            T = None
            if op in _TYPED and self.at("[") and self.peek(1).kind == "NAME" and self.peek(2).text == "]":
                self.next()
                T = _type_of(self.next())
                self.next()
            x = ("bin", op, T, x, self.unary())
        return x

    def unary(self) -> tuple:
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.next()
            return ("neg", self.unary())
        x = self.atom()
        while self.peek().kind == "OP" and self.peek().text == "†":
            self.next()
            x = ("dag", x)
        return x

    def atom(self) -> tuple:
        t = self.peek()
        if t.kind == "NUMBER":
            self.next()
            num, _, den = t.text.partition("/")
            if den and int(den) == 0:
                raise DslError("E100", "zero denominator", t.line, t.col)
            return ("num", Fraction(int(num), int(den or 1)))
        if t.kind == "UNIT" or (t.kind == "NAME" and t.text in _UNIT_NAMES):
            self.next()
            return ("unit",)
        if self.at("("):
            self.next()
            x = self.sum()
            self.expect(")")
            return x
        if self.at("["):
            self.next()
            x = self.sum()
            self.expect(",")
            y = self.sum()
            self.expect("]")
            T = None
            nt = self.peek()
            if nt.kind == "NAME" and nt.text.startswith("_"):
                self.next()
                T = _type_of(nt)
            return ("comm", T, x, y)
        if t.kind == "NAME":
            self.next()
            if t.text in _FUNCS and (self.at("(") or (t.text == "reduce" and self.at("["))):
                return self.call(t)
            if t.text in self.elements or t.text in self.values or t.text in BUILTINS:
                return ("name", t.text)
            if t.text in self.graphs:
                raise DslError("E105", f"graph {t.text!r} is not an algebra element; use hat({t.text})",
                               t.line, t.col)
            raise DslError("E101", f"unknown name {t.text!r}", t.line, t.col)
        raise DslError("E100", f"unexpected {t.text or 'end of input'!r} in expression", t.line, t.col)

    def call(self, f: Token) -> tuple:
        T = None
        if f.text == "reduce":
            self.expect("[")
            T = _type_of(self.name())
            self.expect("]")
        self.expect("(")
        if f.text in ("hat", "hatdag"):
            g = self.name()
            if g.text not in self.graphs:
                raise DslError("E101", f"unknown graph {g.text!r}", g.line, g.col)
            self.expect(")")
            return ("graph", f.text, g.text)
        x = self.sum()
        self.expect(")")
        return ("call", "Δ" if f.text == "Delta" else f.text, T, x)


def parse(text: str) -> DslDocument:
    return _Parser(text).document()


# ---------------------------------------------------------------- printer

def _print_graph_spec(s: GraphSpec) -> str:
    if s.ref is not None:
        return s.ref
    parts = [it[1] if it[0] == "v" else f"{it[1]}: {it[2]}->{it[3]}" for it in s.items]
    return "{" + " ".join(parts) + "}" if parts else "{}"


def _print_pairs(pairs) -> str:
    return "{" + ", ".join(f"{x}->{y}" for x, y in pairs) + "}"


_NO_SPACE_AFTER = {"(", "["}
_NO_SPACE_BEFORE = {")", "]", ",", "†"}


def print_expr(e: Expr) -> str:
    out = ""
    prev: Token | None = None
    unary = False
    for i, t in enumerate(e.tokens):
        glue = prev is None or unary or prev.text in _NO_SPACE_AFTER or t.text in _NO_SPACE_BEFORE \
            or (t.text == "[" and prev.kind == "OP") or (t.text == "(" and prev.text in _FUNCS) \
            or (prev.text == "]" and t.kind == "NAME" and t.text.startswith("_")) \
            or (t.text == "[" and prev.text == "reduce") \
            or (t.text == "(" and i >= 4 and e.tokens[i - 4].text == "reduce")
        out += ("" if glue else " ") + t.text
        unary = t.text == "-" and (prev is None or prev.kind == "OP" or prev.text in ("(", "[", ","))
        prev = t
    return out


def print_statement(s: Statement) -> str:
    if isinstance(s, Comment):
        return s.text
    if isinstance(s, GraphDef):
        return f"graph {s.name} {_print_graph_spec(s.spec)}"
    if isinstance(s, RuleDef):
        body = f"in {_print_graph_spec(s.inp)} out {_print_graph_spec(s.out)}"
        if s.pairs is not None:
            body += f" map {_print_pairs(s.pairs)}"
        return f"rule {s.name} {{ {body} }}"
    if isinstance(s, DiagramDef):
        args = ", ".join(s.args)
        if s.op == "compose":
            args += f", {_print_pairs(s.pairs)}"
        return f"diagram {s.name} = {s.op}({args})"
    if isinstance(s, LetDef):
        return f"let {s.name} = {print_expr(s.expr)}"
    if isinstance(s, PrintStmt):
        return f"print {print_expr(s.expr)}"
    raise TypeError(type(s).__name__)


def print_document(doc: DslDocument) -> str:
    return "".join(print_statement(s) + "\n" for s in doc.statements)


def normalize_whitespace(text: str) -> str:
    return re.sub(r"\s+", "", text)


# ---------------------------------------------------------------- evaluation

Value = Union[Fraction, Element, TensorElement]


@dataclass
class Output:
    source: str
    value: Any
    rule: bool
    names: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        unit = "r_∅" if self.rule else "d_∅"
        v = self.value
        if isinstance(v, Element):
            return format_element(v, unit, self.names)
        if isinstance(v, TensorElement):
            return format_tensor(v, unit, self.names)
        return str(v)


def _as_element(v: Value) -> Element:
    if isinstance(v, Fraction):
        return v * Element.unit()
    if isinstance(v, Element):
        return v
    raise DslError("E106", "tensor values only support + and -")


class _Evaluator:
    def __init__(self, doc: DslDocument):
        self.doc = doc
        self.env: dict[str, tuple[Value, bool]] = {}
        self.rule = False

    def lookup(self, n: str) -> Value:
        if n in self.env:
            v, r = self.env[n]
            self.rule |= r
            return v
        if n in self.doc.elements:
            return self.doc.elements[n]
        return BUILTINS[n]()

    def ev(self, t: tuple) -> Value:
        tag = t[0]
        if tag == "num":
            return t[1]
        if tag == "unit":
            return Element.unit()
        if tag == "name":
            return self.lookup(t[1])
        if tag == "neg":
            return -self.ev(t[1])
        if tag == "dag":
            return dagger(_as_element(self.ev(t[1])))
        if tag == "graph":
            G = self.doc.graphs[t[2]]
            return graph_hat(G) if t[1] == "hat" else graph_hat_dag(G)
        if tag == "comm":
            T, x, y = t[1], _as_element(self.ev(t[2])), _as_element(self.ev(t[3]))
            if T is None:
                return commutator(x, y)
            self.rule = True
            return commutator(x, y, lambda p, q: compose_R(p, q, T))
        if tag == "call":
            f, T, x = t[1], t[2], self.ev(t[3])
            if f == "Δ":
                return coproduct(_as_element(x))
            if f == "S":
                return antipode(_as_element(x))
            if f == "dag":
                return dagger(_as_element(x))
            if f == "eps":
                return counit(_as_element(x))
            self.rule = True
            return reduce(_as_element(x), T)
        if tag == "bin":
            return self.binary(t[1], t[2], self.ev(t[3]), self.ev(t[4]))
        raise AssertionError(tag)

    def binary(self, op: str, T: RewritingType | None, x: Value, y: Value) -> Value:
        if op in "+-":
            if isinstance(x, TensorElement) or isinstance(y, TensorElement):
                if not (isinstance(x, TensorElement) and isinstance(y, TensorElement)):
                    raise DslError("E106", "cannot add a tensor and an element")
                return x + y if op == "+" else x - y
            if isinstance(x, Fraction) and isinstance(y, Fraction):
                return x + y if op == "+" else x - y
            x, y = _as_element(x), _as_element(y)
            return x + y if op == "+" else x - y
        if op == "*" and T is None and (isinstance(x, Fraction) or isinstance(y, Fraction)):
            if isinstance(x, Fraction) and isinstance(y, Fraction):
                return x * y
            s, v = (x, y) if isinstance(x, Fraction) else (y, x)
            if isinstance(v, TensorElement):
                return TensorElement(v.arity, {k: s * c for k, c in v.terms.items()})
            return s * v
        x, y = _as_element(x), _as_element(y)
        if T is not None:
            self.rule = True
        if op == "*":
            return compose_D(x, y) if T is None else compose_R(x, y, T)
        if op == "⊎":
            return superpose(x, y)
        return nontrivial_compose(x, y) if T is None else nontrivial_compose_R(x, y, T)


def run(doc: DslDocument) -> list[Output]:
    """Evaluate let and print statements in order; returns the printed values."""
    ev = _Evaluator(doc)
    out: list[Output] = []
    for s in doc.statements:
        if isinstance(s, (LetDef, PrintStmt)):
            ev.rule = False
            first = s.expr.tokens[0]
            try:
                v = ev.ev(s.expr.tree)
            except ContractViolation as exc:
                raise DslError("E106", str(exc), first.line, first.col) from None
            except DslError as exc:
                if exc.line == 0:
                    raise DslError(exc.code, exc.message, first.line, first.col) from None
                raise
            if isinstance(s, LetDef):
                ev.env[s.name] = (v, ev.rule)
            else:
                out.append(Output(print_expr(s.expr), v, ev.rule, doc.names))
    return out


def evaluate_expression(text: str, context: DslDocument | None = None) -> tuple[Value, bool]:
    """Evaluate one expression (builtins plus the names defined in ``context``)."""
    p = _Parser(text)
    if context is not None:
        p.graphs.update(context.graphs)
        p.elements.update(context.elements)
        p.diagrams.update(context.diagrams)
        p.names.update(context.names)
    p.skip_newlines()
    e = p.expr_stmt()
    p.skip_newlines()
    t = p.peek()
    if t.kind != "EOF":
        raise DslError("E100", f"unexpected {t.text!r} after expression", t.line, t.col)
    doc = context or DslDocument([], {}, {}, {})
    ev = _Evaluator(doc)
    try:
        v = ev.ev(e.tree)
    except ContractViolation as exc:
        raise DslError("E106", str(exc), 1, 1) from None
    return v, ev.rule


__all__ = [
    "Comment", "DiagramDef", "DslDocument", "DslError", "Expr", "GraphDef", "GraphSpec", "LetDef",
    "Output", "PrintStmt", "RuleDef", "Token", "evaluate_expression", "normalize_whitespace", "parse",
    "print_document", "print_expr", "print_statement", "run", "tokenize",
]

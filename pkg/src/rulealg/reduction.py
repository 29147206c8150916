"""Boundary map, dangling edges, fixing morphisms and the rule algebra products.

The boundary of a diagram keeps only its interfaces: every input item is
traced back and every output item forward along its worldline, and the rule
part becomes ω_r restricted to the interfaces.  An edge whose endpoint's
worldline starts (inputs) or ends (outputs) inside the diagram dangles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .algebra import EMPTY, Element, Key, composites, linear, superpose
from .diagrams import (
    RuleDiagram,
    backward_end,
    component_codes,
    diagram_from_key,
    forward_end,
    interfaces,
    join_codes,
    omega_r_chain,
    split_key,
)
from .errors import ContractViolation
from .graphs import Multigraph


class RewritingType(Enum):
    DPO = "dpo"
    SPO_A = "spoa"
    SPO_B = "spob"
    SPO_AB = "spoab"

    @classmethod
    def parse(cls, s: str | RewritingType) -> RewritingType:
        if isinstance(s, RewritingType):
            return s
        norm = s.lower().replace("_", "").replace("-", "")
        for t in cls:
            if t.value == norm:
                return t
        raise ContractViolation(f"unknown rewriting type {s!r}")

    @property
    def fixes_outputs(self) -> bool:
        return self in (RewritingType.SPO_A, RewritingType.SPO_AB)

    @property
    def fixes_inputs(self) -> bool:
        return self in (RewritingType.SPO_B, RewritingType.SPO_AB)


ALL_TYPES = tuple(RewritingType)


@dataclass
class PreDiagram:
    """Irreducible-shaped data whose edge endpoints may be missing (None)."""
    in_vertices: tuple = ()
    in_edges: dict = field(default_factory=dict)
    out_vertices: tuple = ()
    out_edges: dict = field(default_factory=dict)
    r_v: dict = field(default_factory=dict)
    r_e: dict = field(default_factory=dict)

    @property
    def dangling_in(self) -> frozenset:
        return frozenset(e for e, (s, t) in self.in_edges.items() if s is None or t is None)

    @property
    def dangling_out(self) -> frozenset:
        return frozenset(e for e, (s, t) in self.out_edges.items() if s is None or t is None)

    def is_clean(self) -> bool:
        return not self.dangling_in and not self.dangling_out

    def to_diagram(self) -> RuleDiagram:
        if not self.is_clean():
            raise ContractViolation("pre-diagram still has dangling edges")
        return RuleDiagram(Multigraph(self.in_vertices, self.in_edges),
                           Multigraph(self.out_vertices, self.out_edges), self.r_v, self.r_e)


def boundary(d: RuleDiagram) -> PreDiagram:
    itf = interfaces(d)
    inv = ({b: a for a, b in d.r_v.items()}, {b: a for a, b in d.m_v.items()})
    in_v = tuple(v for v in d.inp.vertices if v in itf.in_vertices)
    out_v = tuple(v for v in d.out.vertices if v in itf.out_vertices)
    in_e = {}
    for e in d.inp.edges:
        if e in itf.in_edges:
            s, t = d.inp.edges[e]
            in_e[e] = (backward_end(d, s, "v", inv), backward_end(d, t, "v", inv))
    out_e = {}
    for e in d.out.edges:
        if e in itf.out_edges:
            s, t = d.out.edges[e]
            out_e[e] = (forward_end(d, s, "v"), forward_end(d, t, "v"))

    def rpart(items, kind, out_items):
        res = {}
        for x in items:
            chain = omega_r_chain(d, x, kind)
            if chain and chain[-1] in out_items:
                res[x] = chain[-1]
        return res

    return PreDiagram(in_v, in_e, out_v, out_e,
                      rpart(in_v, "v", itf.out_vertices), rpart(in_e, "e", itf.out_edges))


def fix_partial(p: PreDiagram, side: str) -> PreDiagram:
    """Side "A" drops dangling output edges, side "B" dangling input edges."""
    if side == "A":
        gone = p.dangling_out
        return PreDiagram(p.in_vertices, dict(p.in_edges), p.out_vertices,
                          {e: st for e, st in p.out_edges.items() if e not in gone},
                          dict(p.r_v), {x: y for x, y in p.r_e.items() if y not in gone})
    if side == "B":
        gone = p.dangling_in
        return PreDiagram(p.in_vertices, {e: st for e, st in p.in_edges.items() if e not in gone},
                          p.out_vertices, dict(p.out_edges),
                          dict(p.r_v), {x: y for x, y in p.r_e.items() if x not in gone})
    raise ContractViolation(f"unknown fixing side {side!r}")


def fix(p: PreDiagram, T: RewritingType) -> PreDiagram:
    T = RewritingType.parse(T)
    if T.fixes_outputs:
        p = fix_partial(p, "A")
    if T.fixes_inputs:
        p = fix_partial(p, "B")
    return p


def _project_codes(p: PreDiagram) -> list[str] | None:
    if not p.is_clean():
        return None
    return component_codes(p.to_diagram())


def project(p: PreDiagram) -> Element:
    codes = _project_codes(p)
    return Element() if codes is None else Element.basis(join_codes(codes))


def reduce_diagram(d: RuleDiagram, T: RewritingType) -> Element:
    return project(fix(boundary(d), T))


_CODE_CACHE: dict[tuple[str, RewritingType], list[str] | None] = {}


def _reduce_code(code: str, T: RewritingType) -> list[str] | None:
    hit = _CODE_CACHE.get((code, T), False)
    if hit is False:
        d, _ = diagram_from_key(code)
        hit = _project_codes(fix(boundary(d), T))
        _CODE_CACHE[(code, T)] = hit
    return hit


def reduce_key(key: Key, T: RewritingType) -> Element:
    """Reduction of one basis diagram, computed component by component."""
    T = RewritingType.parse(T)
    codes: list[str] = []
    for code in split_key(key):
        part = _reduce_code(code, T)
        if part is None:
            return Element()
        codes += part
    return Element.basis(join_codes(codes))


def reduce(x: Element, T: RewritingType | str) -> Element:
    T = RewritingType.parse(T)
    return linear(lambda k: reduce_key(k, T))(x)


_IRR = re.compile(r"\dm\d")


def is_irreducible_key(key: Key) -> bool:
    return _IRR.search(key) is None


_RULE_CACHE: dict[tuple[Key, Key, RewritingType], dict[Key, int]] = {}


def compose_R_keys(ka: Key, kb: Key, T: RewritingType) -> dict[Key, int]:
    hit = _RULE_CACHE.get((ka, kb, T))
    if hit is not None:
        return hit
    acc: dict[Key, int] = {}
    if ka == EMPTY or kb == EMPTY:
        acc[ka or kb] = 1
    else:
        for rest, glued in composites(ka, kb):
            if glued is None:
                k = join_codes(rest)
            else:
                part = _project_codes(fix(boundary(glued), T))
                if part is None:
                    continue
                k = join_codes(rest + part)
            acc[k] = acc.get(k, 0) + 1
    _RULE_CACHE[(ka, kb, T)] = acc
    return acc


def compose_R(x: Element, y: Element, T: RewritingType | str) -> Element:
    """Rule algebra product: reduce(x *_D y, T) for irreducible x, y."""
    T = RewritingType.parse(T)
    for k in list(x.terms) + list(y.terms):
        if not is_irreducible_key(k):
            raise ContractViolation("rule algebra product needs irreducible operands")
    acc: dict[Key, Fraction] = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            for k, n in compose_R_keys(k1, k2, T).items():
                acc[k] = acc.get(k, 0) + c1 * c2 * n
    return Element(acc)


def rule_product(T: RewritingType | str):
    T = RewritingType.parse(T)
    return lambda x, y: compose_R(x, y, T)


def nontrivial_compose_R(x: Element, y: Element, T: RewritingType | str) -> Element:
    return compose_R(x, y, T) - superpose(x, y)


def clear_caches() -> None:
    _CODE_CACHE.clear()
    _RULE_CACHE.clear()

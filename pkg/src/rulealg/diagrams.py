"""Rule diagrams: composites of linear rules connected by matches.

A diagram is stored in aggregate form: an input graph I, an output graph O,
the rule maps r: I ⇀ O and the match maps m: O ⇀ I, each split into a vertex
and an edge part held as dicts.  A match sends an output of an earlier rule to
an input of a later one, so walking r and m alternately follows an item
forward in time along its worldline.

The constituents (atomic linear rules) are the connected components of I ∪ O
under incidence and r; the components of the whole diagram additionally
follow m.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .canon import canonical_labeling
from .errors import ContractViolation
from .graphs import Multigraph
from .relations import Relation, compose_rel, converse, kleene_star

# node kinds used for canonical forms: input vertex/edge, output vertex/edge
KINDS = ("v", "e", "V", "E")
_KIND_COLOR = {k: i for i, k in enumerate(KINDS)}
_ARC = re.compile(r"(\d+)([strm])(\d+)")


class RuleDiagram:
    __slots__ = ("inp", "out", "r_v", "r_e", "m_v", "m_e")

    def __init__(self, inp: Multigraph | None = None, out: Multigraph | None = None,
                 r_v: Mapping | None = None, r_e: Mapping | None = None,
                 m_v: Mapping | None = None, m_e: Mapping | None = None):
        self.inp = inp if inp is not None else Multigraph()
        self.out = out if out is not None else Multigraph()
        self.r_v = dict(r_v or {})
        self.r_e = dict(r_e or {})
        self.m_v = dict(m_v or {})
        self.m_e = dict(m_e or {})

    @classmethod
    def empty(cls) -> RuleDiagram:
        return cls()

    def is_empty(self) -> bool:
        return not (self.inp.vertices or self.out.vertices)

    def size(self) -> int:
        return (len(self.inp.vertices) + len(self.inp.edges)
                + len(self.out.vertices) + len(self.out.edges))

    def __repr__(self) -> str:
        return (f"RuleDiagram(I={self.inp!r}, O={self.out!r}, r_v={self.r_v}, r_e={self.r_e}, "
                f"m_v={self.m_v}, m_e={self.m_e})")


def linear_rule(inp: Multigraph, out: Multigraph, r_v: Mapping | None = None,
                r_e: Mapping | None = None) -> RuleDiagram:
    """The irreducible diagram of a linear rule I ⇀ O."""
    d = RuleDiagram(inp, out, r_v, r_e)
    rep = validate_diagram(d)
    if not rep.ok:
        raise ContractViolation("invalid linear rule: " + rep.summary())
    return d


# ---------------------------------------------------------------- validity

@dataclass
class Violation:
    code: str
    message: str
    items: tuple = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def summary(self) -> str:
        return "; ".join(f"{v.code}: {v.message}" for v in self.violations) or "ok"


def _one_to_one(mapping: Mapping, dom: set, cod: set, name: str, out: list[Violation]) -> None:
    bad_dom = [x for x in mapping if x not in dom]
    bad_cod = [y for y in mapping.values() if y not in cod]
    if bad_dom or bad_cod:
        out.append(Violation("out-of-range", f"{name} relates unknown items", tuple(bad_dom + bad_cod)))
    seen: dict = {}
    for x, y in mapping.items():
        if y in seen:
            out.append(Violation("not-one-to-one", f"{name} is not injective", (seen[y], x, y)))
        seen[y] = x


def constituents(d: RuleDiagram) -> list[dict[str, set]]:
    """Atomic pieces of d, as item sets keyed by kind, in a topological order.

    Earlier entries are applied earlier in time.
    """
    nodes, arcs = _nodes_and_arcs(d, with_match=False)
    comps = _components(len(nodes), arcs)
    order = _constituent_order(d, nodes, comps)
    out = []
    for ci in (order if order is not None else range(len(comps))):
        groups: dict[str, set] = {k: set() for k in KINDS}
        for i in comps[ci]:
            kind, x = nodes[i]
            groups[kind].add(x)
        out.append(groups)
    return out


def _constituent_order(d: RuleDiagram, nodes, comps) -> list[int] | None:
    """Topological order of constituents along matches; None if cyclic."""
    where = {}
    for ci, comp in enumerate(comps):
        for i in comp:
            where[nodes[i]] = ci
    succ: dict[int, set] = {ci: set() for ci in range(len(comps))}
    for kind_o, kind_i, m in (("V", "v", d.m_v), ("E", "e", d.m_e)):
        for y, x in m.items():
            a, b = where.get((kind_o, y)), where.get((kind_i, x))
            if a is None or b is None:
                continue
            if a == b:
                return None
            succ[a].add(b)
    indeg = {ci: 0 for ci in succ}
    for a in succ:
        for b in succ[a]:
            indeg[b] += 1
    ready = sorted(ci for ci, k in indeg.items() if k == 0)
    order = []
    while ready:
        a = ready.pop(0)
        order.append(a)
        for b in sorted(succ[a]):
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
    return order if len(order) == len(comps) else None


def validate_diagram(d: RuleDiagram) -> ValidationReport:
    rep = ValidationReport()
    v = rep.violations
    Iv, Ie = set(d.inp.vertices), set(d.inp.edges)
    Ov, Oe = set(d.out.vertices), set(d.out.edges)
    _one_to_one(d.r_v, Iv, Ov, "r (vertices)", v)
    _one_to_one(d.r_e, Ie, Oe, "r (edges)", v)
    _one_to_one(d.m_v, Ov, Iv, "m (vertices)", v)
    _one_to_one(d.m_e, Oe, Ie, "m (edges)", v)
    if v:
        return rep
    for e, e2 in d.r_e.items():
        s, t = d.inp.edges[e]
        s2, t2 = d.out.edges[e2]
        if d.r_v.get(s) != s2 or d.r_v.get(t) != t2:
            v.append(Violation("not-a-morphism", f"r maps edge {e!r} without its endpoints", (e, e2)))
    nodes, arcs = _nodes_and_arcs(d, with_match=False)
    if _constituent_order(d, nodes, _components(len(nodes), arcs)) is None:
        v.append(Violation("cyclic-matches", "the matches between constituents are not acyclic"))
        return rep
    for e in d.out.edges:
        s, t = d.out.edges[e]
        ms, mt = set(omega_m_chain(d, s, "v")), set(omega_m_chain(d, t, "v"))
        for f in omega_m_chain(d, e, "e"):
            fs, ft = d.inp.edges[f]
            if fs not in ms or ft not in mt:
                v.append(Violation("delayed-edge", f"edge {e!r} is matched to {f!r} but its endpoints are not",
                                   (e, f)))
    return rep


def is_valid(d: RuleDiagram) -> bool:
    return validate_diagram(d).ok


# ---------------------------------------------------------------- worldlines

def _maps(d: RuleDiagram, kind: str):
    return (d.r_v, d.m_v) if kind == "v" else (d.r_e, d.m_e)


def omega_r_chain(d: RuleDiagram, x, kind: str) -> list:
    """Outputs on the worldline of input x, i.e. ω_r(x) = r∘(m∘r)^*(x)."""
    r, m = _maps(d, kind)
    out = []
    y = r.get(x)
    while y is not None:
        out.append(y)
        x = m.get(y)
        if x is None:
            break
        y = r.get(x)
    return out


def omega_m_chain(d: RuleDiagram, y, kind: str) -> list:
    """Inputs on the worldline of output y, i.e. ω_m(y) = m∘(r∘m)^*(y)."""
    r, m = _maps(d, kind)
    out = []
    x = m.get(y)
    while x is not None:
        out.append(x)
        y = r.get(x)
        if y is None:
            break
        x = m.get(y)
    return out


def forward_end(d: RuleDiagram, y, kind: str):
    """Follow (r∘m)^* from output y to the output interface; None if deleted on the way."""
    r, m = _maps(d, kind)
    while True:
        x = m.get(y)
        if x is None:
            return y
        y = r.get(x)
        if y is None:
            return None


def backward_end(d: RuleDiagram, x, kind: str, inv: tuple[dict, dict] | None = None):
    """Follow (r⌣∘m⌣)^* from input x to the input interface; None if created on the way."""
    r, m = _maps(d, kind)
    rinv, minv = inv if inv is not None else ({b: a for a, b in r.items()}, {b: a for a, b in m.items()})
    while True:
        y = minv.get(x)
        if y is None:
            return x
        x = rinv.get(y)
        if x is None:
            return None


def _rel(mapping: Mapping, dom, cod) -> Relation:
    return Relation(mapping.items(), dom, cod)


def worldline_relations(d: RuleDiagram, kind: str) -> dict[str, Relation]:
    """ω_r, ω_m, ω_I, ω_O for one kind, built literally from Kleene stars."""
    g_in = d.inp.vertices if kind == "v" else tuple(d.inp.edges)
    g_out = d.out.vertices if kind == "v" else tuple(d.out.edges)
    r, m = _maps(d, kind)
    R = _rel(r, g_in, g_out)
    M = _rel(m, g_out, g_in)
    return {
        "omega_r": compose_rel(R, kleene_star(compose_rel(M, R))),
        "omega_m": compose_rel(M, kleene_star(compose_rel(R, M))),
        "omega_I": kleene_star(compose_rel(converse(R), converse(M))),
        "omega_O": kleene_star(compose_rel(R, M)),
    }


# ---------------------------------------------------------------- structure

def _nodes_and_arcs(d: RuleDiagram, with_match: bool = True):
    nodes: list[tuple[str, Hashable]] = []
    idx: dict = {}
    for kind, items in (("v", d.inp.vertices), ("e", d.inp.edges), ("V", d.out.vertices), ("E", d.out.edges)):
        for x in items:
            idx[(kind, x)] = len(nodes)
            nodes.append((kind, x))
    arcs = []
    for ek, vk, g in (("e", "v", d.inp), ("E", "V", d.out)):
        for e, (s, t) in g.edges.items():
            arcs.append((idx[(ek, e)], idx[(vk, s)], "s"))
            arcs.append((idx[(ek, e)], idx[(vk, t)], "t"))
    for a, b, mp in (("v", "V", d.r_v), ("e", "E", d.r_e)):
        for x, y in mp.items():
            arcs.append((idx[(a, x)], idx[(b, y)], "r"))
    if with_match:
        for a, b, mp in (("V", "v", d.m_v), ("E", "e", d.m_e)):
            for y, x in mp.items():
                arcs.append((idx[(a, y)], idx[(b, x)], "m"))
    return nodes, arcs


def _components(n: int, arcs) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in arcs:
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def components(d: RuleDiagram) -> list[RuleDiagram]:
    """Connected components under incidence, r and m (the primitive factors)."""
    nodes, arcs = _nodes_and_arcs(d)
    return [restrict_diagram(d, (nodes[i] for i in comp)) for comp in _components(len(nodes), arcs)]


def restrict_diagram(d: RuleDiagram, items: Iterable[tuple[str, Hashable]]) -> RuleDiagram:
    """Sub-diagram on a set of (kind, id) items closed under incidence, r and m."""
    keep: dict[str, set] = {k: set() for k in KINDS}
    for kind, x in items:
        keep[kind].add(x)
    return RuleDiagram(
        d.inp.restrict(keep["v"], keep["e"]),
        d.out.restrict(keep["V"], keep["E"]),
        {x: y for x, y in d.r_v.items() if x in keep["v"]},
        {x: y for x, y in d.r_e.items() if x in keep["e"]},
        {y: x for y, x in d.m_v.items() if y in keep["V"]},
        {y: x for y, x in d.m_e.items() if y in keep["E"]},
    )


def classify(d: RuleDiagram) -> frozenset[str]:
    labels = set()
    irreducible = not d.m_v and not d.m_e
    if d.is_empty():
        labels.add("empty")
    if irreducible:
        labels.add("irreducible")
        if len(constituents(d)) == 1:
            labels.add("atomic")
    else:
        labels.add("generic")
    if not d.is_empty() and len(components(d)) == 1:
        labels.add("primitive")
    return frozenset(labels)


@dataclass(frozen=True)
class Interfaces:
    in_vertices: frozenset
    in_edges: frozenset
    out_vertices: frozenset
    out_edges: frozenset


def interfaces(d: RuleDiagram) -> Interfaces:
    """I minus the codomain of m, and O minus the domain of m."""
    mv, me = set(d.m_v.values()), set(d.m_e.values())
    return Interfaces(
        frozenset(v for v in d.inp.vertices if v not in mv),
        frozenset(e for e in d.inp.edges if e not in me),
        frozenset(v for v in d.out.vertices if v not in d.m_v),
        frozenset(e for e in d.out.edges if e not in d.m_e),
    )


# ---------------------------------------------------------------- canonical keys

def _encode(cert) -> str:
    kinds, arcs = cert
    return "".join(KINDS[k] for k in kinds) + "|" + ",".join(f"{u}{lab}{v}" for u, v, lab in arcs)


def component_codes(d: RuleDiagram) -> list[str]:
    """Canonical codes of the components of d (unsorted, one per component)."""
    nodes, arcs = _nodes_and_arcs(d)
    codes = []
    for comp in _components(len(nodes), arcs):
        local = {g: i for i, g in enumerate(comp)}
        colors = [_KIND_COLOR[nodes[g][0]] for g in comp]
        sub = [(local[u], local[v], lab) for u, v, lab in arcs if u in local]
        cert, _ = canonical_labeling(colors, sub)
        codes.append(_encode(cert))
    return codes


def join_codes(codes: Iterable[str]) -> str:
    return ";".join(sorted(codes))


def split_key(key: str) -> list[str]:
    return key.split(";") if key else []


def diagram_key(d: RuleDiagram) -> str:
    """Isomorphism-class key: sorted canonical codes of the components."""
    return join_codes(component_codes(d))


canonical_diagram = diagram_key


def diagram_from_key(key: str) -> tuple[RuleDiagram, dict[int, int]]:
    """Canonical representative of a key and the component index of every item.

    All item identifiers are distinct integers across the four kinds.
    """
    Iv, Ov = [], []
    Ie: dict = {}
    Oe: dict = {}
    r_v, r_e, m_v, m_e = {}, {}, {}, {}
    comp_of: dict[int, int] = {}
    offset = 0
    for ci, code in enumerate(split_key(key)):
        kinds, _, body = code.partition("|")
        ends: dict[int, dict[str, int]] = {}
        for i, k in enumerate(kinds):
            g = offset + i
            comp_of[g] = ci
            if k == "v":
                Iv.append(g)
            elif k == "V":
                Ov.append(g)
            else:
                ends[g] = {}
        for u, lab, v in _ARC.findall(body):
            u, v = int(u) + offset, int(v) + offset
            ku = kinds[u - offset]
            if lab in "st":
                ends[u][lab] = v
            elif lab == "r":
                (r_v if ku == "v" else r_e)[u] = v
            else:
                (m_v if ku == "V" else m_e)[u] = v
        for g, st in ends.items():
            (Ie if kinds[g - offset] == "e" else Oe)[g] = (st["s"], st["t"])
        offset += len(kinds)
    d = RuleDiagram(Multigraph(Iv, Ie), Multigraph(Ov, Oe), r_v, r_e, m_v, m_e)
    return d, comp_of


# ---------------------------------------------------------------- composition

@dataclass(frozen=True)
class Match:
    """Vertex and edge parts of a match O_B ⇀ I_A."""
    v: tuple = ()
    e: tuple = ()

    @classmethod
    def of(cls, v: Mapping | None = None, e: Mapping | None = None) -> Match:
        return cls(tuple(sorted((v or {}).items(), key=repr)), tuple(sorted((e or {}).items(), key=repr)))

    def __bool__(self) -> bool:
        return bool(self.v or self.e)

    def __len__(self) -> int:
        return len(self.v) + len(self.e)


def _out_boundary(d: RuleDiagram):
    itf = interfaces(d)
    verts = [v for v in d.out.vertices if v in itf.out_vertices]
    edges = {}
    for e in d.out.edges:
        if e in itf.out_edges:
            s, t = d.out.edges[e]
            edges[e] = (forward_end(d, s, "v"), forward_end(d, t, "v"))
    return verts, edges


def _in_boundary(d: RuleDiagram):
    itf = interfaces(d)
    inv = ({b: a for a, b in d.r_v.items()}, {b: a for a, b in d.m_v.items()})
    verts = [v for v in d.inp.vertices if v in itf.in_vertices]
    edges = {}
    for e in d.inp.edges:
        if e in itf.in_edges:
            s, t = d.inp.edges[e]
            edges[e] = (backward_end(d, s, "v", inv), backward_end(d, t, "v", inv))
    return verts, edges


def interface_morphisms(dA: RuleDiagram, dB: RuleDiagram) -> list[Match]:
    """Injective partial morphisms from the output boundary of dB to the input boundary of dA.

    Dangling boundary edges are never matched; orientation is respected.
    """
    ov, oe = _out_boundary(dB)
    iv, ie = _in_boundary(dA)
    oe_list = [e for e, (s, t) in oe.items() if s is not None and t is not None]
    ie_clean = {f: st for f, st in ie.items() if st[0] is not None and st[1] is not None}
    found: list[Match] = []

    def edges(i, vmap, emap, used):
        if i == len(oe_list):
            found.append(Match.of(vmap, emap))
            return
        e = oe_list[i]
        edges(i + 1, vmap, emap, used)
        s, t = oe[e]
        if s not in vmap or t not in vmap:
            return
        want = (vmap[s], vmap[t])
        for f, st in ie_clean.items():
            if f not in used and st == want:
                emap[e] = f
                used.add(f)
                edges(i + 1, vmap, emap, used)
                used.discard(f)
                del emap[e]

    def verts(i, vmap, used):
        if i == len(ov):
            edges(0, vmap, {}, set())
            return
        y = ov[i]
        verts(i + 1, vmap, used)
        for x in iv:
            if x not in used:
                vmap[y] = x
                used.add(x)
                verts(i + 1, vmap, used)
                used.discard(x)
                del vmap[y]

    verts(0, {}, set())
    return found


def enumerate_matches(dA: RuleDiagram, dB: RuleDiagram, check: bool = True) -> list[Match]:
    """All matches of dB's outputs into dA's inputs (empty match first)."""
    ms = interface_morphisms(dA, dB)
    if check:
        for mt in ms:
            compose_along(dA, mt, dB, check=True)
    return ms


def _tagger(tag):
    if tag is None:
        return None
    return lambda x: f"{tag}.{x}"


def compose_along(dA: RuleDiagram, match: Match | Mapping, dB: RuleDiagram, check: bool = True,
                  tags: tuple[str, str] | None = None) -> RuleDiagram:
    """dA after dB, with dB's outputs glued to dA's inputs along ``match``.

    Identifiers are renumbered with integers, or prefixed ``tag.`` when
    ``tags`` is given.
    """
    if isinstance(match, Mapping):
        match = Match.of(match.get("v"), match.get("e"))
    counter = [0]

    def relabeler(tag):
        f = _tagger(tag)
        cache: dict = {}

        def new(kind, x):
            k = (kind, x)
            if k not in cache:
                if f is None:
                    cache[k] = counter[0]
                    counter[0] += 1
                else:
                    cache[k] = f(x)
            return cache[k]
        return new

    ra = relabeler(tags[0] if tags else None)
    rb = relabeler(tags[1] if tags else None)
    Iv, Ov, Ie, Oe = [], [], {}, {}
    r_v, r_e, m_v, m_e = {}, {}, {}, {}
    for d, f in ((dA, ra), (dB, rb)):
        Iv += [f("v", x) for x in d.inp.vertices]
        Ov += [f("V", x) for x in d.out.vertices]
    for d, f in ((dA, ra), (dB, rb)):
        for e, (s, t) in d.inp.edges.items():
            Ie[f("e", e)] = (f("v", s), f("v", t))
        for e, (s, t) in d.out.edges.items():
            Oe[f("E", e)] = (f("V", s), f("V", t))
        r_v.update((f("v", x), f("V", y)) for x, y in d.r_v.items())
        r_e.update((f("e", x), f("E", y)) for x, y in d.r_e.items())
        m_v.update((f("V", y), f("v", x)) for y, x in d.m_v.items())
        m_e.update((f("E", y), f("e", x)) for y, x in d.m_e.items())
    for y, x in match.v:
        if y not in dB.out.vertices or x not in dA.inp.vertices:
            raise ContractViolation(f"match pairs unknown vertices {y!r} -> {x!r}")
        m_v[rb("V", y)] = ra("v", x)
    for y, x in match.e:
        if y not in dB.out.edges or x not in dA.inp.edges:
            raise ContractViolation(f"match pairs unknown edges {y!r} -> {x!r}")
        m_e[rb("E", y)] = ra("e", x)
    if len(set(m_v.values())) != len(m_v) or len(set(m_e.values())) != len(m_e):
        raise ContractViolation("match is not one-to-one")
    out = RuleDiagram(Multigraph(Iv, Ie), Multigraph(Ov, Oe), r_v, r_e, m_v, m_e)
    if check:
        rep = validate_diagram(out)
        if not rep.ok:
            raise ContractViolation("invalid match: " + rep.summary())
    return out


def superpose_diagrams(d1: RuleDiagram, d2: RuleDiagram) -> RuleDiagram:
    return compose_along(d1, Match(), d2, check=False)


def dagger_diagram(d: RuleDiagram) -> RuleDiagram:
    """Swap input and output and take converses of r and m."""
    return RuleDiagram(
        d.out, d.inp,
        {y: x for x, y in d.r_v.items()}, {y: x for x, y in d.r_e.items()},
        {x: y for y, x in d.m_v.items()}, {x: y for y, x in d.m_e.items()},
    )


def relabel_diagram(d: RuleDiagram, f_I: Mapping, f_O: Mapping) -> RuleDiagram:
    """Rename items; f_I and f_O map (kind, id) → new id for I and O items."""
    return RuleDiagram(
        Multigraph((f_I[("v", x)] for x in d.inp.vertices),
                   {f_I[("e", e)]: (f_I[("v", s)], f_I[("v", t)]) for e, (s, t) in d.inp.edges.items()}),
        Multigraph((f_O[("V", x)] for x in d.out.vertices),
                   {f_O[("E", e)]: (f_O[("V", s)], f_O[("V", t)]) for e, (s, t) in d.out.edges.items()}),
        {f_I[("v", x)]: f_O[("V", y)] for x, y in d.r_v.items()},
        {f_I[("e", x)]: f_O[("E", y)] for x, y in d.r_e.items()},
        {f_O[("V", y)]: f_I[("v", x)] for y, x in d.m_v.items()},
        {f_O[("E", y)]: f_I[("e", x)] for y, x in d.m_e.items()},
    )


# ---------------------------------------------------------------- export

def diagram_to_dot(d: RuleDiagram, name: str = "diagram") -> str:
    """Constituents as clusters, input below output; r dotted, m solid bold."""
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    for ci, c in enumerate(constituents(d)):
        lines.append(f'  subgraph "cluster_{ci}" {{')
        lines.append(f'    label="constituent {ci}";')
        for x in sorted(c["v"], key=repr):
            lines.append(f'    "I:{x}" [label="{x}", shape=circle];')
        for y in sorted(c["V"], key=repr):
            lines.append(f'    "O:{y}" [label="{y}", shape=doublecircle];')
        for e in sorted(c["e"], key=repr):
            s, t = d.inp.edges[e]
            lines.append(f'    "I:{s}" -> "I:{t}" [label="{e}"];')
        for e in sorted(c["E"], key=repr):
            s, t = d.out.edges[e]
            lines.append(f'    "O:{s}" -> "O:{t}" [label="{e}"];')
        lines.append("  }")
    for x, y in d.r_v.items():
        lines.append(f'  "I:{x}" -> "O:{y}" [style=dotted, arrowhead=none];')
    for y, x in d.m_v.items():
        lines.append(f'  "O:{y}" -> "I:{x}" [style=bold];')
    for y, x in d.m_e.items():
        lines.append(f'  // edge match {y} -> {x}')
    lines.append("}")
    return "\n".join(lines) + "\n"

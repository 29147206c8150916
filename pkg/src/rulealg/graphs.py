"""Finite directed multigraphs: canonical forms, automorphisms, morphisms.

Edges are first-class identifiers, so parallel edges and self-loops are kept
apart and automorphisms may permute parallel edges.
"""

from __future__ import annotations

import re
from typing import Hashable, Iterable, Mapping

from .canon import canonical_labeling, count_automorphisms
from .errors import ContractViolation
from .relations import Relation

_ARC = re.compile(r"(\d+)([st])(\d+)")


class Multigraph:
    """(V, E, src, tgt) with ``edges`` mapping edge id -> (src, tgt)."""

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices: Iterable[Hashable] = (),
                 edges: Mapping | Iterable[tuple] = ()):
        vs = tuple(vertices)
        if len(set(vs)) != len(vs):
            raise ContractViolation("duplicate vertex identifiers")
        if isinstance(edges, Mapping):
            es = {e: tuple(st) for e, st in edges.items()}
        else:
            es = {}
            for e, s, t in edges:
                if e in es:
                    raise ContractViolation(f"duplicate edge identifier {e!r}")
                es[e] = (s, t)
        vset = set(vs)
        for e, (s, t) in es.items():
            if s not in vset or t not in vset:
                raise ContractViolation(f"edge {e!r} has an endpoint outside the vertex set")
        self.vertices = vs
        self.edges = es

    def src(self, e) -> Hashable:
        return self.edges[e][0]

    def tgt(self, e) -> Hashable:
        return self.edges[e][1]

    def __len__(self) -> int:
        return len(self.vertices)

    def __bool__(self) -> bool:
        return bool(self.vertices)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Multigraph) and set(self.vertices) == set(other.vertices)
                and self.edges == other.edges)

    def __repr__(self) -> str:
        es = ", ".join(f"{e}: {s}->{t}" for e, (s, t) in self.edges.items())
        return f"Multigraph({list(self.vertices)}, {{{es}}})"

    def relabel(self, vmap: Mapping, emap: Mapping) -> Multigraph:
        return Multigraph((vmap[v] for v in self.vertices),
                          {emap[e]: (vmap[s], vmap[t]) for e, (s, t) in self.edges.items()})

    def restrict(self, vertices: Iterable, edges: Iterable) -> Multigraph:
        vs, es = set(vertices), set(edges)
        return Multigraph((v for v in self.vertices if v in vs),
                          {e: st for e, st in self.edges.items() if e in es})


def disjoint_union(G1: Multigraph, G2: Multigraph) -> Multigraph:
    """Superposition; vertices and edges are renumbered 0, 1, ... (G1 first)."""
    vs: dict = {}
    es: dict = {}
    for tag, G in enumerate((G1, G2)):
        for v in G.vertices:
            vs[(tag, v)] = len(vs)
    for tag, G in enumerate((G1, G2)):
        for e, (s, t) in G.edges.items():
            es[len(es)] = (vs[(tag, s)], vs[(tag, t)])
    return Multigraph(range(len(vs)), es)


def _structure(G: Multigraph):
    nodes = list(G.vertices) + list(G.edges)
    vidx = {v: i for i, v in enumerate(G.vertices)}
    nv = len(vidx)
    colors = [0] * nv + [1] * len(G.edges)
    arcs = []
    for k, (e, (s, t)) in enumerate(G.edges.items()):
        arcs.append((nv + k, vidx[s], "s"))
        arcs.append((nv + k, vidx[t], "t"))
    return nodes, colors, arcs


def canonical_form(G: Multigraph) -> tuple[str, dict, dict]:
    """Return (key, vertex relabeling, edge relabeling).

    The relabelings send G onto ``graph_from_key(key)``.
    """
    nodes, colors, arcs = _structure(G)
    cert, pos = canonical_labeling(colors, arcs)
    nv = len(G.vertices)
    vmap = {nodes[i]: pos[i] for i in range(nv)}
    emap = {nodes[i]: pos[i] for i in range(nv, len(nodes))}
    return _encode(cert), vmap, emap


def graph_key(G: Multigraph) -> str:
    return canonical_form(G)[0]


def _encode(cert) -> str:
    kinds, arcs = cert
    body = "".join("v" if k == 0 else "e" for k in kinds)
    return body + "|" + ",".join(f"{u}{lab}{v}" for u, v, lab in arcs)


def graph_from_key(key: str) -> Multigraph:
    kinds, _, arcs = key.partition("|")
    nv = kinds.count("v")
    ends: dict[int, dict[str, int]] = {i: {} for i in range(nv, len(kinds))}
    for u, lab, v in _ARC.findall(arcs):
        ends[int(u)][lab] = int(v)
    return Multigraph(range(nv), {e: (d["s"], d["t"]) for e, d in ends.items()})


def automorphism_count(G: Multigraph) -> int:
    _, colors, arcs = _structure(G)
    return count_automorphisms(colors, arcs)


def is_isomorphic(G: Multigraph, H: Multigraph) -> bool:
    return graph_key(G) == graph_key(H)


def enumerate_injective_partial_morphisms(G: Multigraph, H: Multigraph) -> list[tuple[Relation, Relation]]:
    """All injective partial morphisms G ⇀ H, the empty one included."""
    out = []
    gv, hv = list(G.vertices), list(H.vertices)
    ge, he = list(G.edges), list(H.edges)

    def edges(i, vmap, emap, used):
        if i == len(ge):
            out.append((Relation(vmap.items(), gv, hv), Relation(emap.items(), ge, he)))
            return
        e = ge[i]
        edges(i + 1, vmap, emap, used)
        s, t = G.edges[e]
        if s not in vmap or t not in vmap:
            return
        for f in he:
            if f not in used and H.edges[f] == (vmap[s], vmap[t]):
                emap[e] = f
                used.add(f)
                edges(i + 1, vmap, emap, used)
                used.discard(f)
                del emap[e]

    def verts(i, vmap, used):
        if i == len(gv):
            edges(0, vmap, {}, set())
            return
        v = gv[i]
        verts(i + 1, vmap, used)
        for w in hv:
            if w not in used:
                vmap[v] = w
                used.add(w)
                verts(i + 1, vmap, used)
                used.discard(w)
                del vmap[v]

    verts(0, {}, set())
    return out


def delete_closed(G: Multigraph, vertices: Iterable = (), edges: Iterable = ()) -> Multigraph:
    """Remove the given items and every edge incident to a removed vertex."""
    dv, de = set(vertices), set(edges)
    if not dv <= set(G.vertices) or not de <= set(G.edges):
        raise ContractViolation("delete_closed: unknown identifiers")
    return Multigraph((v for v in G.vertices if v not in dv),
                      {e: (s, t) for e, (s, t) in G.edges.items()
                       if e not in de and s not in dv and t not in dv})


def connected_components(G: Multigraph) -> list[Multigraph]:
    parent = {v: v for v in G.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in G.edges.values():
        a, b = find(s), find(t)
        if a != b:
            parent[b] = a
    groups: dict = {}
    for v in G.vertices:
        groups.setdefault(find(v), []).append(v)
    comps = []
    for vs in groups.values():
        vset = set(vs)
        comps.append(Multigraph(vs, {e: st for e, st in G.edges.items() if st[0] in vset}))
    return comps


def is_connected(G: Multigraph) -> bool:
    return len(connected_components(G)) == 1


def to_dot(G: Multigraph, name: str = "G") -> str:
    lines = [f'digraph "{name}" {{']
    for v in G.vertices:
        lines.append(f'  "{v}";')
    for e, (s, t) in G.edges.items():
        lines.append(f'  "{s}" -> "{t}" [label="{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

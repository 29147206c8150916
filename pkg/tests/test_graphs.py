import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulealg.canon import canonical_labeling, count_automorphisms
from rulealg.errors import ContractViolation
from rulealg.graphs import (
    Multigraph,
    automorphism_count,
    canonical_form,
    connected_components,
    delete_closed,
    disjoint_union,
    enumerate_injective_partial_morphisms,
    graph_from_key,
    graph_key,
    is_connected,
    is_isomorphic,
    to_dot,
)

EDGE = Multigraph([0, 1], {"e": (0, 1)})


@st.composite
def graphs(draw, max_v=4, max_e=4):
    n = draw(st.integers(0, max_v))
    edges = {}
    if n:
        for i in range(draw(st.integers(0, max_e))):
            edges[f"e{i}"] = (draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)))
    return Multigraph(range(n), edges)


def relabeled(G, seed):
    rng = random.Random(seed)
    vs = [f"x{i}" for i in range(len(G.vertices))]
    rng.shuffle(vs)
    vmap = dict(zip(G.vertices, vs))
    es = [f"y{i}" for i in range(len(G.edges))]
    rng.shuffle(es)
    emap = dict(zip(G.edges, es))
    H = G.relabel(vmap, emap)
    items = list(H.edges.items())
    rng.shuffle(items)
    order = list(H.vertices)
    rng.shuffle(order)
    return Multigraph(order, dict(items))


# --------------------------------------------------------------- oracles

def brute_aut(G):
    """Pairs (vertex permutation, edge permutation) preserving src and tgt."""
    vs, es = list(G.vertices), list(G.edges)
    n = 0
    for pv in permutations(vs):
        f = dict(zip(vs, pv))
        for pe in permutations(es):
            g = dict(zip(es, pe))
            if all(G.edges[g[e]] == (f[s], f[t]) for e, (s, t) in G.edges.items()):
                n += 1
    return n


def brute_morphisms(G, H):
    """Filter every pair of relations by the definition of an injective partial morphism."""
    def injective_partial(dom, cod):
        for k in range(min(len(dom), len(cod)) + 1):
            for src in combinations(dom, k):
                for tgt in permutations(cod, k):
                    yield dict(zip(src, tgt))

    found = []
    for fv in injective_partial(list(G.vertices), list(H.vertices)):
        for fe in injective_partial(list(G.edges), list(H.edges)):
            if all(s in fv and t in fv and H.edges[fe[e]] == (fv[s], fv[t])
                   for e in fe for (s, t) in [G.edges[e]]):
                found.append((frozenset(fv.items()), frozenset(fe.items())))
    return found


# --------------------------------------------------------------- examples

def test_disjoint_union_examples():
    assert graph_key(disjoint_union(Multigraph(), EDGE)) == graph_key(EDGE)
    two = disjoint_union(Multigraph([0]), Multigraph([0]))
    assert len(two.vertices) == 2 and not two.edges
    dd = disjoint_union(EDGE, EDGE)
    assert (len(dd.vertices), len(dd.edges)) == (4, 2)
    assert automorphism_count(dd) == 2 == brute_aut(dd)


def test_canonical_key_examples():
    a = Multigraph(["p", "q"], {"x": ("p", "q")})
    b = Multigraph([7, 3], {0: (3, 7)})
    assert graph_key(a) == graph_key(b)
    fwd = Multigraph([0, 1], {"e": (0, 1)})
    back = Multigraph([0, 1], {"e": (1, 0)})
    assert graph_key(fwd) == graph_key(back)
    path = Multigraph([0, 1, 2], {"a": (0, 1), "b": (1, 2)})
    star = Multigraph([0, 1, 2], {"a": (1, 0), "b": (1, 2)})
    assert graph_key(path) != graph_key(star)


def test_automorphism_examples():
    assert automorphism_count(Multigraph([0])) == 1
    assert automorphism_count(Multigraph([0, 1])) == 2
    c3 = Multigraph([0, 1, 2], {"a": (0, 1), "b": (1, 2), "c": (2, 0)})
    assert automorphism_count(c3) == 3 == brute_aut(c3)
    loops = Multigraph([0], {"a": (0, 0), "b": (0, 0), "c": (0, 0)})
    assert automorphism_count(loops) == 6


def test_morphism_examples():
    v = Multigraph([0])
    assert len(enumerate_injective_partial_morphisms(v, v)) == 2
    # 1 empty + 4 single-vertex + identity with and without the edge + the swap
    # (which cannot carry the edge): 8.  The hand count of 7 omits the swap.
    ms = enumerate_injective_partial_morphisms(EDGE, EDGE)
    assert len(ms) == 8 == len(brute_morphisms(EDGE, EDGE))
    big = Multigraph([0, 1, 2])
    ms = enumerate_injective_partial_morphisms(big, v)
    assert not [m for m in ms if len(m[0].pairs) == 3]
    assert len(ms) == 4


def test_delete_closed_examples():
    g = delete_closed(EDGE, vertices=[1])
    assert list(g.vertices) == [0] and not g.edges
    assert delete_closed(EDGE) == EDGE
    path = Multigraph([0, 1, 2], {"a": (0, 1), "b": (1, 2)})
    g = delete_closed(path, vertices=[1])
    assert set(g.vertices) == {0, 2} and not g.edges
    with pytest.raises(ContractViolation):
        delete_closed(EDGE, vertices=["nope"])


def test_connected_components_examples():
    assert connected_components(Multigraph()) == []
    g = disjoint_union(Multigraph([0]), EDGE)
    sizes = sorted((len(c.vertices), len(c.edges)) for c in connected_components(g))
    assert sizes == [(1, 0), (2, 1)]
    assert is_connected(EDGE)


def test_multigraph_contracts():
    with pytest.raises(ContractViolation):
        Multigraph([0, 0])
    with pytest.raises(ContractViolation):
        Multigraph([0], {"e": (0, 1)})
    with pytest.raises(ContractViolation):
        Multigraph([0], [("e", 0, 0), ("e", 0, 0)])


def test_to_dot_mentions_every_item():
    dot = to_dot(EDGE, "edge")
    assert dot.startswith('digraph "edge"') and '"0" -> "1" [label="e"]' in dot


# --------------------------------------------------------------- properties

@settings(max_examples=80)
@given(graphs(), st.integers(0, 10**6))
def test_key_invariant_under_relabeling(G, seed):
    H = relabeled(G, seed)
    assert graph_key(G) == graph_key(H)
    assert automorphism_count(G) == automorphism_count(H)


@settings(max_examples=80)
@given(graphs())
def test_key_decodes_to_isomorphic_graph(G):
    key, vmap, emap = canonical_form(G)
    R = graph_from_key(key)
    assert graph_key(R) == key
    assert G.relabel(vmap, emap) == R


@settings(max_examples=60)
@given(graphs(max_v=3, max_e=3), graphs(max_v=3, max_e=3))
def test_key_equality_is_isomorphism(G, H):
    # brute force: search for a bijection pair
    iso = False
    if len(G.vertices) == len(H.vertices) and len(G.edges) == len(H.edges):
        for pv in permutations(H.vertices):
            f = dict(zip(G.vertices, pv))
            want = sorted((f[s], f[t]) for s, t in G.edges.values())
            if want == sorted(H.edges.values()):
                iso = True
                break
    assert is_isomorphic(G, H) == iso


@settings(max_examples=60)
@given(graphs(max_v=4, max_e=3))
def test_automorphisms_match_brute_force(G):
    assert automorphism_count(G) == brute_aut(G)


@settings(max_examples=40)
@given(graphs(max_v=3, max_e=2), graphs(max_v=3, max_e=2))
def test_morphisms_match_brute_force(G, H):
    got = {(frozenset(fv.pairs), frozenset(fe.pairs)) for fv, fe in enumerate_injective_partial_morphisms(G, H)}
    want = brute_morphisms(G, H)
    assert len(want) == len(set(want)) == len(got)
    assert got == set(want)


@given(graphs())
def test_components_partition(G):
    comps = connected_components(G)
    assert sum(len(c.vertices) for c in comps) == len(G.vertices)
    assert sum(len(c.edges) for c in comps) == len(G.edges)
    assert all(is_connected(c) for c in comps)


def test_canonical_labeling_prunes_consistently():
    # directed 6-cycle: every branch of the search is symmetric
    arcs = [(i, (i + 1) % 6, "s") for i in range(6)]
    cert, pos = canonical_labeling([0] * 6, arcs)
    assert sorted(pos) == list(range(6))
    assert count_automorphisms([0] * 6, arcs) == 6
    relabel = [3, 5, 0, 2, 4, 1]
    arcs2 = [(relabel[u], relabel[v], lab) for u, v, lab in arcs]
    assert canonical_labeling([0] * 6, arcs2)[0] == cert

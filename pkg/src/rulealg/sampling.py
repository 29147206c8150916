"""Random rules and diagrams for property checks."""

from __future__ import annotations

import os
import random
from typing import Hashable

from .diagrams import (
    RuleDiagram,
    classify,
    compose_along,
    enumerate_matches,
    relabel_diagram,
)
from .graphs import Multigraph

SAMPLES_ENV = "RULEALG_SAMPLES"


def sample_size(default: int) -> int:
    """Sample count for property suites, overridable through RULEALG_SAMPLES."""
    raw = os.environ.get(SAMPLES_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return default


def _random_graph(rng: random.Random, n: int, max_edges: int, loops: bool) -> Multigraph:
    edges = {}
    if n:
        for i in range(rng.randint(0, max_edges)):
            s, t = rng.randrange(n), rng.randrange(n)
            if s == t and not loops:
                continue
            edges[f"e{i}"] = (s, t)
    return Multigraph(range(n), edges)


def random_atomic_rule(rng: random.Random, max_vertices: int = 4, max_edges: int = 2,
                       loops: bool = True) -> RuleDiagram:
    """A connected linear rule with at most ``max_vertices`` vertices in I and O together."""
    while True:
        half = max_vertices // 2
        ni, no = rng.randint(0, half), rng.randint(0, half)
        if ni + no == 0:
            continue
        I = _random_graph(rng, ni, max_edges, loops)
        O = _random_graph(rng, no, max_edges, loops)
        k = rng.randint(0, min(ni, no))
        src = rng.sample(range(ni), k)
        dst = rng.sample(range(no), k)
        r_v = dict(zip(src, dst))
        r_e = {}
        used = set()
        for e, (s, t) in I.edges.items():
            if s in r_v and t in r_v and rng.random() < 0.6:
                cands = [f for f, st in O.edges.items() if st == (r_v[s], r_v[t]) and f not in used]
                if cands:
                    f = rng.choice(cands)
                    r_e[e] = f
                    used.add(f)
        d = RuleDiagram(I, O, r_v, r_e)
        if "atomic" in classify(d):
            return d


def random_diagram(rng: random.Random, max_constituents: int = 3, **kw) -> RuleDiagram:
    """Compose up to ``max_constituents`` random atomic rules along random matches."""
    d = random_atomic_rule(rng, **kw)
    for _ in range(rng.randint(0, max_constituents - 1)):
        nxt = random_atomic_rule(rng, **kw)
        if rng.random() < 0.5:
            ms = enumerate_matches(nxt, d, check=False)
            d = compose_along(nxt, rng.choice(ms), d)
        else:
            ms = enumerate_matches(d, nxt, check=False)
            d = compose_along(d, rng.choice(ms), nxt)
    return d


def random_relabel(rng: random.Random, d: RuleDiagram) -> RuleDiagram:
    """Same diagram with shuffled, renamed identifiers."""
    def fresh(items: list[tuple[str, Hashable]], tag: str) -> dict:
        names = [f"{tag}{i}" for i in range(len(items))]
        rng.shuffle(names)
        return dict(zip(items, names))

    f_I = fresh([("v", x) for x in d.inp.vertices] + [("e", e) for e in d.inp.edges], "i")
    f_O = fresh([("V", x) for x in d.out.vertices] + [("E", e) for e in d.out.edges], "o")
    out = relabel_diagram(d, f_I, f_O)
    # shuffle storage order as well
    vs_i, vs_o = list(out.inp.vertices), list(out.out.vertices)
    rng.shuffle(vs_i)
    rng.shuffle(vs_o)
    ei, eo = list(out.inp.edges.items()), list(out.out.edges.items())
    rng.shuffle(ei)
    rng.shuffle(eo)
    return RuleDiagram(Multigraph(vs_i, dict(ei)), Multigraph(vs_o, dict(eo)),
                       out.r_v, out.r_e, out.m_v, out.m_e)

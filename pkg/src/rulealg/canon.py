"""Canonical labeling of small vertex-colored, arc-labeled digraphs.

Individualization-refinement: colors are refined by the multiset of
(label, direction, neighbour color) until stable; the first non-singleton
cell is branched on and the lexicographically least leaf certificate wins.
Automorphisms discovered at equal leaves prune sibling branches that lie in
the same orbit of the pointwise stabilizer of the current path.

Colors and arc labels must be mutually comparable (ints or strs).
"""

from __future__ import annotations

from typing import Hashable, Sequence

Arc = tuple[int, int, Hashable]


class _Structure:
    __slots__ = ("n", "colors", "arcs", "out", "inc")

    def __init__(self, colors: Sequence, arcs: Sequence[Arc]):
        self.n = len(colors)
        self.colors = list(colors)
        self.arcs = [(u, v, lab) for u, v, lab in arcs]
        self.out: list[list] = [[] for _ in range(self.n)]
        self.inc: list[list] = [[] for _ in range(self.n)]
        for u, v, lab in self.arcs:
            self.out[u].append((lab, v))
            self.inc[v].append((lab, u))


def _rank(values: list) -> list[int]:
    table = {v: i for i, v in enumerate(sorted(set(values)))}
    return [table[v] for v in values]


def _refine(st: _Structure, col: list[int]) -> list[int]:
    ncls = len(set(col))
    while True:
        sig = [
            (col[x],
             tuple(sorted((lab, col[v]) for lab, v in st.out[x])),
             tuple(sorted((lab, col[u]) for lab, u in st.inc[x])))
            for x in range(st.n)
        ]
        new = _rank(sig)
        k = len(set(new))
        if k == ncls:
            return new
        col, ncls = new, k


def _certificate(st: _Structure, col: list[int]) -> tuple:
    inv = [0] * st.n
    for x, c in enumerate(col):
        inv[c] = x
    kinds = tuple(st.colors[inv[c]] for c in range(st.n))
    arcs = tuple(sorted((col[u], col[v], lab) for u, v, lab in st.arcs))
    return kinds, arcs


def _target_cell(col: list[int]) -> list[int]:
    counts: dict[int, list[int]] = {}
    for x, c in enumerate(col):
        counts.setdefault(c, []).append(x)
    for c in sorted(counts):
        if len(counts[c]) > 1:
            return counts[c]
    return []


def _individualize(col: list[int], cell: list[int], x: int) -> list[int]:
    members = set(cell)
    return [2 * c + (1 if (y in members and y != x) else 0) for y, c in enumerate(col)]


def canonical_labeling(colors: Sequence, arcs: Sequence[Arc]) -> tuple[tuple, list[int]]:
    """Return (certificate, position) with position[x] the canonical index of node x.

    Two structures receive equal certificates iff they are isomorphic
    (a color- and label-preserving bijection of nodes mapping arcs onto arcs,
    counted with multiplicity).
    """
    st = _Structure(colors, arcs)
    if st.n == 0:
        return ((), ()), []
    best: list = [None, None]  # certificate, labeling
    autos: list[list[int]] = []

    def leaf(col):
        cert = _certificate(st, col)
        if best[0] is None or cert < best[0]:
            best[0], best[1] = cert, col
        elif cert == best[0]:
            # col and best[1] are both bijections onto 0..n-1
            inv = [0] * st.n
            for x, c in enumerate(best[1]):
                inv[c] = x
            autos.append([inv[col[x]] for x in range(st.n)])

    def search(col, path):
        col = _refine(st, col)
        cell = _target_cell(col)
        if not cell:
            leaf(col)
            return
        done: list[int] = []
        for x in cell:
            if done:
                stab = [g for g in autos if all(g[p] == p for p in path)]
                if stab and _same_orbit(x, done, stab):
                    continue
            search(_individualize(col, cell, x), path + [x])
            done.append(x)

    search(_rank(list(st.colors)), [])
    return best[0], best[1]


def _same_orbit(x: int, explored: list[int], gens: list[list[int]]) -> bool:
    seen = {x}
    frontier = [x]
    targets = set(explored)
    while frontier:
        y = frontier.pop()
        for g in gens:
            z = g[y]
            if z not in seen:
                if z in targets:
                    return True
                seen.add(z)
                frontier.append(z)
    return False


def count_automorphisms(colors: Sequence, arcs: Sequence[Arc]) -> int:
    """Number of leaves of the unpruned search tree hitting the least certificate."""
    st = _Structure(colors, arcs)
    if st.n == 0:
        return 1
    best: list = [None, 0]

    def search(col):
        col = _refine(st, col)
        cell = _target_cell(col)
        if not cell:
            cert = _certificate(st, col)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, 1
            elif cert == best[0]:
                best[1] += 1
            return
        for x in cell:
            search(_individualize(col, cell, x))

    search(_rank(list(st.colors)))
    return best[1]

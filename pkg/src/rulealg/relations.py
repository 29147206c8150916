"""Finite binary relations with explicit universes.

A relation R between A and B is a set of pairs (a, b). Composition follows
the usual convention: ``compose_rel(S, R)`` applies R first, then S.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator

from .errors import ContractViolation

Pair = tuple[Hashable, Hashable]


@dataclass(frozen=True)
class Relation:
    pairs: frozenset
    domain_universe: frozenset
    codomain_universe: frozenset

    def __init__(self, pairs: Iterable[Pair], domain_universe: Iterable | None = None,
                 codomain_universe: Iterable | None = None):
        ps = frozenset((a, b) for a, b in pairs)
        dom_u = frozenset(a for a, _ in ps) if domain_universe is None else frozenset(domain_universe)
        cod_u = frozenset(b for _, b in ps) if codomain_universe is None else frozenset(codomain_universe)
        for a, b in ps:
            if a not in dom_u or b not in cod_u:
                raise ContractViolation(f"pair {(a, b)!r} lies outside the universes")
        object.__setattr__(self, "pairs", ps)
        object.__setattr__(self, "domain_universe", dom_u)
        object.__setattr__(self, "codomain_universe", cod_u)

    @classmethod
    def identity(cls, universe: Iterable) -> Relation:
        u = frozenset(universe)
        return cls(((x, x) for x in u), u, u)

    @classmethod
    def from_map(cls, mapping: dict, domain_universe=None, codomain_universe=None) -> Relation:
        return cls(mapping.items(), domain_universe, codomain_universe)

    def dom(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    def im(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def converse(self) -> Relation:
        return converse(self)

    def image_of(self, a) -> frozenset:
        return frozenset(b for x, b in self.pairs if x == a)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs, key=repr))

    def __len__(self) -> int:
        return len(self.pairs)


def compose_rel(S: Relation, R: Relation) -> Relation:
    """S∘R = {(a, c) | (a, b) ∈ R and (b, c) ∈ S for some b}."""
    if R.codomain_universe != S.domain_universe:
        raise ContractViolation("composition of relations with mismatched universes")
    succ: dict = {}
    for b, c in S.pairs:
        succ.setdefault(b, []).append(c)
    out = {(a, c) for a, b in R.pairs for c in succ.get(b, ())}
    return Relation(out, R.domain_universe, S.codomain_universe)


def converse(R: Relation) -> Relation:
    return Relation(((b, a) for a, b in R.pairs), R.codomain_universe, R.domain_universe)


def _require_endo(R: Relation) -> None:
    if R.domain_universe != R.codomain_universe:
        raise ContractViolation("operation requires an endo-relation")


def kleene_star(R: Relation) -> Relation:
    """Reflexive-transitive closure, by squaring until a fixed point."""
    _require_endo(R)
    cur = Relation(R.pairs | Relation.identity(R.domain_universe).pairs,
                   R.domain_universe, R.codomain_universe)
    while True:
        nxt = compose_rel(cur, cur)
        if nxt.pairs == cur.pairs:
            return cur
        cur = nxt


def is_univalent(R: Relation) -> bool:
    return len({a for a, _ in R.pairs}) == len(R.pairs)


def is_injective(R: Relation) -> bool:
    return len({b for _, b in R.pairs}) == len(R.pairs)


def is_one_to_one(R: Relation) -> bool:
    return is_univalent(R) and is_injective(R)


def is_acyclic(R: Relation) -> bool:
    """No cycles; a self-pair (a, a) counts as a cycle."""
    _require_endo(R)
    plus = compose_rel(R, kleene_star(R))
    return not any(a == b for a, b in plus.pairs)


def restrict(R: Relation, domain: Iterable | None = None, codomain: Iterable | None = None) -> Relation:
    """Restrict to pairs with first component in ``domain`` and second in ``codomain``."""
    d = R.domain_universe if domain is None else frozenset(domain)
    c = R.codomain_universe if codomain is None else frozenset(codomain)
    return Relation(((a, b) for a, b in R.pairs if a in d and b in c), d, c)

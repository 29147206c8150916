"""Formal linear combinations of diagram classes and the diagram algebra product.

Elements map class keys (see :func:`diagrams.diagram_key`) to exact rational
coefficients.  A key is the sorted list of its component codes joined by
``;``, so superposition and the component decomposition work on strings
alone; the canonical representative of any key can be decoded from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .diagrams import (
    RuleDiagram,
    compose_along,
    component_codes,
    dagger_diagram,
    diagram_from_key,
    diagram_key,
    interface_morphisms,
    join_codes,
    restrict_diagram,
    split_key,
)

Key = str
EMPTY: Key = ""


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Element:
    """Immutable sparse vector over diagram class keys."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        t = {}
        for k, c in (terms or {}).items():
            c = _frac(c)
            if c:
                t[k] = c
        object.__setattr__(self, "terms", t)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    @classmethod
    def basis(cls, key: Key, coeff=1) -> Element:
        return cls({key: coeff})

    @classmethod
    def of(cls, d: RuleDiagram, coeff=1) -> Element:
        return cls({intern(d): coeff})

    @classmethod
    def unit(cls) -> Element:
        return cls({EMPTY: 1})

    @classmethod
    def zero(cls) -> Element:
        return cls()

    def coefficient(self, key: Key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def keys(self) -> list[Key]:
        return sorted(self.terms)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        for k in sorted(self.terms):
            yield k, self.terms[k]

    def __iter__(self):
        return self.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            if other == 0:
                return self
            return NotImplemented
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return Element(t)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return Element({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __mul__(self, scalar) -> Element:
        if isinstance(scalar, (int, Fraction)):
            return scale(scalar, self)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Element({format_element(self)})"


def add(x: Element, y: Element) -> Element:
    return x + y


def scale(k, x: Element) -> Element:
    k = _frac(k)
    return Element({key: k * c for key, c in x.terms.items()})


def linear(f: Callable[[Key], Element]) -> Callable[[Element], Element]:
    """Extend a map on basis keys linearly."""
    def g(x: Element) -> Element:
        acc: dict[Key, Fraction] = {}
        for k, c in x.terms.items():
            for k2, c2 in f(k).terms.items():
                acc[k2] = acc.get(k2, 0) + c * c2
        return Element(acc)
    return g


def bilinear(f: Callable[[Key, Key], Mapping[Key, object]]) -> Callable[[Element, Element], Element]:
    def g(x: Element, y: Element) -> Element:
        acc: dict[Key, Fraction] = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                for k, c in f(k1, k2).items():
                    acc[k] = acc.get(k, 0) + c1 * c2 * c
        return Element(acc)
    return g


# ---------------------------------------------------------------- registry

_REPS: dict[Key, "KeyRep"] = {}
_NAMES: dict[Key, str] = {}


@dataclass
class KeyRep:
    """Canonical representative of a key plus per-component bookkeeping."""
    diagram: RuleDiagram
    codes: list[str]
    comp_of: dict[int, int]
    comp_items: list[list[tuple[str, int]]]


def rep(key: Key) -> KeyRep:
    r = _REPS.get(key)
    if r is None:
        d, comp_of = diagram_from_key(key)
        codes = split_key(key)
        items: list[list] = [[] for _ in codes]
        for kind, coll in (("v", d.inp.vertices), ("e", d.inp.edges),
                           ("V", d.out.vertices), ("E", d.out.edges)):
            for x in coll:
                items[comp_of[x]].append((kind, x))
        r = KeyRep(d, codes, comp_of, items)
        _REPS[key] = r
    return r


def representative(key: Key) -> RuleDiagram:
    return rep(key).diagram


def intern(d: RuleDiagram) -> Key:
    key = diagram_key(d)
    rep(key)
    return key


def register_name(key: Key, name: str) -> None:
    _NAMES.setdefault(key, name)


def name_of(key: Key) -> str | None:
    return _NAMES.get(key)


def degree(key: Key) -> int:
    return len(split_key(key))


def superpose_keys(k1: Key, k2: Key) -> Key:
    return join_codes(split_key(k1) + split_key(k2))


# ---------------------------------------------------------------- products

def _sub(r: KeyRep, comps: set[int]) -> RuleDiagram:
    return restrict_diagram(r.diagram, (it for ci in sorted(comps) for it in r.comp_items[ci]))


def composites(ka: Key, kb: Key) -> Iterator[tuple[list[str], RuleDiagram | None]]:
    """For every match of kb's outputs into ka's inputs yield (untouched codes, glued part).

    The glued part is the composite restricted to the components touched by
    the match (None for the empty match); the full composite is its
    superposition with the untouched components.
    """
    A, B = rep(ka), rep(kb)
    for mt in interface_morphisms(A.diagram, B.diagram):
        if not mt:
            yield A.codes + B.codes, None
            continue
        ta = {A.comp_of[x] for _, x in mt.v} | {A.comp_of[x] for _, x in mt.e}
        tb = {B.comp_of[y] for y, _ in mt.v} | {B.comp_of[y] for y, _ in mt.e}
        glued = compose_along(_sub(A, ta), mt, _sub(B, tb), check=True)
        rest = [c for i, c in enumerate(A.codes) if i not in ta] + \
               [c for i, c in enumerate(B.codes) if i not in tb]
        yield rest, glued


_COMPOSE_CACHE: dict[tuple[Key, Key], dict[Key, int]] = {}


def compose_keys(ka: Key, kb: Key) -> dict[Key, int]:
    """ka *_D kb on basis keys: one summand per match, accumulated by class."""
    hit = _COMPOSE_CACHE.get((ka, kb))
    if hit is not None:
        return hit
    acc: dict[Key, int] = {}
    if ka == EMPTY or kb == EMPTY:
        acc[ka or kb] = 1
    else:
        for rest, glued in composites(ka, kb):
            codes = rest if glued is None else rest + component_codes(glued)
            k = join_codes(codes)
            acc[k] = acc.get(k, 0) + 1
    _COMPOSE_CACHE[(ka, kb)] = acc
    return acc


compose_D = bilinear(compose_keys)


def superpose(x: Element, y: Element) -> Element:
    return bilinear(lambda a, b: {superpose_keys(a, b): 1})(x, y)


def nontrivial_compose(x: Element, y: Element) -> Element:
    """The ⊛ part: composition minus superposition."""
    return compose_D(x, y) - superpose(x, y)


def commutator(x: Element, y: Element, product: Callable[[Element, Element], Element] = compose_D) -> Element:
    return product(x, y) - product(y, x)


_DAGGER_CACHE: dict[str, str] = {}


def _dagger_code(code: str) -> str:
    hit = _DAGGER_CACHE.get(code)
    if hit is None:
        hit = diagram_key(dagger_diagram(representative(code)))
        _DAGGER_CACHE[code] = hit
    return hit


def dagger_key(key: Key) -> Key:
    return join_codes(c for code in split_key(key) for c in split_key(_dagger_code(code)))


dagger = linear(lambda k: Element.basis(dagger_key(k)))


def power(x: Element, n: int, product: Callable[[Element, Element], Element] = compose_D) -> Element:
    out = Element.unit()
    for _ in range(n):
        out = product(out, x)
    return out


def superpose_power(x: Element, n: int) -> Element:
    out = Element.unit()
    for _ in range(n):
        out = superpose(out, x)
    return out


def clear_caches() -> None:
    _COMPOSE_CACHE.clear()
    _DAGGER_CACHE.clear()


# ---------------------------------------------------------------- printing

def format_coefficient(c) -> str:
    c = _frac(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_key(key: Key, unit: str = "d_∅", names: Mapping[Key, str] | None = None) -> str:
    """Registered name, else a local name from ``names``, else the ⊎ of its codes."""
    if key == EMPTY:
        return unit
    look = lambda k: _NAMES.get(k) or (names or {}).get(k)  # noqa: E731
    n = look(key)
    if n is not None:
        return n
    parts = sorted(look(c) or f"⟨{c}⟩" for c in split_key(key))
    return "⊎".join(parts)


def format_element(x: Element, unit: str = "d_∅", names: Mapping[Key, str] | None = None) -> str:
    if not x:
        return "0"
    fk = lambda k: format_key(k, unit, names)  # noqa: E731
    terms = sorted(x.terms.items(), key=lambda kc: (-degree(kc[0]), fk(kc[0]), kc[0]))
    out = []
    for i, (k, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = fk(k)
        text = body if (mag == 1 and k != EMPTY) else f"{format_coefficient(mag)}·{body}"
        if i == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


def items_of(keys: Iterable[Key]) -> Element:
    acc: dict[Key, int] = {}
    for k in keys:
        acc[k] = acc.get(k, 0) + 1
    return Element(acc)


__all__ = [
    "EMPTY", "Element", "KeyRep", "add", "bilinear", "commutator", "compose_D", "compose_keys",
    "composites", "dagger", "dagger_key", "degree", "format_coefficient", "format_element",
    "format_key", "intern", "linear", "name_of", "nontrivial_compose", "power", "register_name",
    "rep", "representative", "scale", "superpose", "superpose_keys", "superpose_power",
]

"""Coproduct, counit, antipode and PBW normal forms of the diagram algebra.

The coproduct splits a basis diagram's set of components in all possible
ways; the counit reads off the coefficient of the empty diagram.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .algebra import EMPTY, Element, Key, compose_D, degree, format_coefficient, format_key
from .diagrams import join_codes, split_key

Word = tuple[Key, ...]


class TensorElement:
    """Sparse element of the k-fold tensor power: k-tuples of keys -> coefficient."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: dict | None = None):
        self.arity = arity
        t = {}
        for ks, c in (terms or {}).items():
            ks = tuple(ks)
            if len(ks) != arity:
                raise ValueError(f"term {ks!r} does not have arity {arity}")
            c = Fraction(c)
            if c:
                t[ks] = c
        self.terms = t

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        for ks in sorted(self.terms):
            yield ks, self.terms[ks]

    def __eq__(self, other) -> bool:
        if isinstance(other, TensorElement):
            return self.arity == other.arity and self.terms == other.terms
        return NotImplemented

    def __add__(self, other: TensorElement) -> TensorElement:
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        t = dict(self.terms)
        for ks, c in other.terms.items():
            t[ks] = t.get(ks, 0) + c
        return TensorElement(self.arity, t)

    def __neg__(self) -> TensorElement:
        return TensorElement(self.arity, {ks: -c for ks, c in self.terms.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}·({' ⊗ '.join(repr(k) for k in ks)})" for ks, c in self.items())
        return f"TensorElement[{self.arity}]({body or '0'})"


def format_tensor(t: TensorElement, unit: str = "d_∅", names=None) -> str:
    if not t.terms:
        return "0"
    out = []
    for i, (ks, c) in enumerate(t.items()):
        body = "(" + " ⊗ ".join(format_key(k, unit, names) for k in ks) + ")"
        text = body if abs(c) == 1 else f"{format_coefficient(abs(c))}·{body}"
        out.append(("-" if c < 0 else "") + text if i == 0 else f" {'-' if c < 0 else '+'} {text}")
    return "".join(out)


def tensor(*xs: Element) -> TensorElement:
    terms: dict[Word, Fraction] = {(): Fraction(1)}
    for x in xs:
        terms = {ks + (k,): c * c2 for ks, c in terms.items() for k, c2 in x.terms.items()}
    return TensorElement(len(xs), terms)


def filtration_degree(key: Key) -> int:
    return degree(key)


def _splits(key: Key) -> dict[tuple[Key, Key], int]:
    codes = split_key(key)
    n = len(codes)
    acc: dict[tuple[Key, Key], int] = {}
    for mask in range(1 << n):
        left = join_codes(codes[i] for i in range(n) if mask >> i & 1)
        right = join_codes(codes[i] for i in range(n) if not mask >> i & 1)
        acc[(left, right)] = acc.get((left, right), 0) + 1
    return acc


def coproduct(x: Element) -> TensorElement:
    acc: dict[Word, Fraction] = {}
    for k, c in x.terms.items():
        for pair, n in _splits(k).items():
            acc[pair] = acc.get(pair, 0) + c * n
    return TensorElement(2, acc)


def counit(x: Element) -> Fraction:
    return x.coefficient(EMPTY)


def map_factor(t: TensorElement, i: int, f: Callable[[Element], Element | TensorElement]) -> TensorElement:
    """Apply f to the i-th factor; if f returns a tensor its factors are spliced in."""
    acc: dict[Word, Fraction] = {}
    arity = None
    for ks, c in t.terms.items():
        img = f(Element.basis(ks[i]))
        if isinstance(img, TensorElement):
            parts = img.terms.items()
            width = img.arity
        else:
            parts = (((k,), c2) for k, c2 in img.terms.items())
            width = 1
        arity = t.arity - 1 + width
        for mid, c2 in parts:
            w = ks[:i] + tuple(mid) + ks[i + 1:]
            acc[w] = acc.get(w, 0) + c * c2
    return TensorElement(arity if arity is not None else t.arity, acc)


def map_all(t: TensorElement, fs: Iterable[Callable[[Element], Element]]) -> TensorElement:
    for i, f in enumerate(fs):
        t = map_factor(t, i, f)
    return t


def k_fold_coproduct(x: Element, k: int) -> TensorElement:
    if k < 1:
        raise ValueError("k must be at least 1")
    t = TensorElement(1, {(key,): c for key, c in x.terms.items()})
    for _ in range(k - 1):
        t = map_factor(t, t.arity - 1, coproduct)
    return t


def k_fold_product(t: TensorElement, product: Callable[[Element, Element], Element] = compose_D) -> Element:
    out = Element()
    for ks, c in t.terms.items():
        acc = Element.unit()
        for k in ks:
            acc = product(acc, Element.basis(k))
        out = out + c * acc
    return out


def swap(t: TensorElement) -> TensorElement:
    return TensorElement(t.arity, {ks[::-1]: c for ks, c in t.terms.items()})


def tensor_multiply(s: TensorElement, t: TensorElement,
                    product: Callable[[Element, Element], Element] = compose_D) -> TensorElement:
    """Factorwise product (x1⊗…⊗xk)(y1⊗…⊗yk) = x1y1⊗…⊗xkyk."""
    if s.arity != t.arity:
        raise ValueError("arity mismatch")
    acc: dict[Word, Fraction] = {}
    for ks, c in s.terms.items():
        for ls, d in t.terms.items():
            parts: dict[Word, Fraction] = {(): c * d}
            for a, b in zip(ks, ls):
                prod = product(Element.basis(a), Element.basis(b))
                parts = {w + (k,): v * v2 for w, v in parts.items() for k, v2 in prod.terms.items()}
            for w, v in parts.items():
                acc[w] = acc.get(w, 0) + v
    return TensorElement(s.arity, acc)


def reduced_coproduct(x: Element, k: int = 2) -> TensorElement:
    """Δ_k with every term containing an empty-diagram factor removed."""
    t = k_fold_coproduct(x, k)
    return TensorElement(k, {ks: c for ks, c in t.terms.items() if EMPTY not in ks})


# ---------------------------------------------------------------- antipode

_ANTIPODE_CACHE: dict[Key, Element] = {}


def _antipode_key(key: Key) -> Element:
    hit = _ANTIPODE_CACHE.get(key)
    if hit is not None:
        return hit
    if key == EMPTY:
        res = Element.unit()
    else:
        # S(d) = -d - Σ S(d_X) * d_{X^c} over nonempty proper subsets X
        res = -Element.basis(key)
        for (left, right), n in _splits(key).items():
            if left == EMPTY or right == EMPTY:
                continue
            res = res - n * compose_D(_antipode_key(left), Element.basis(right))
    _ANTIPODE_CACHE[key] = res
    return res


def antipode(x: Element) -> Element:
    out = Element()
    for k, c in x.terms.items():
        out = out + c * _antipode_key(k)
    return out


def e_minus_id(x: Element) -> Element:
    return Element({EMPTY: counit(x)}) - x


def convolution_power(f: Callable[[Element], Element], k: int, x: Element) -> Element:
    """f^{⋆k}(x) = μ_k ∘ f^{⊗k} ∘ Δ_k (x)."""
    if k == 0:
        return Element({EMPTY: counit(x)})
    t = k_fold_coproduct(x, k)
    return k_fold_product(map_all(t, [f] * k))


def antipode_by_convolution(x: Element) -> Element:
    """S = e + Σ_{k=1}^{n} (e − Id)^{⋆k}, n the top filtration degree of x."""
    n = max((degree(k) for k in x.terms), default=0)
    out = Element({EMPTY: counit(x)})
    for k in range(1, n + 1):
        out = out + convolution_power(e_minus_id, k, x)
    return out


def convolve(f: Callable[[Element], Element], g: Callable[[Element], Element], x: Element) -> Element:
    return k_fold_product(map_all(coproduct(x), [f, g]))


# ---------------------------------------------------------------- PBW

class PBWPolynomial:
    """Rational combination of non-decreasing words of primitive keys.

    The empty word stands for the empty diagram.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c}

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            yield w, self.terms[w]

    def __eq__(self, other) -> bool:
        return isinstance(other, PBWPolynomial) and self.terms == other.terms

    def __add__(self, other: PBWPolynomial) -> PBWPolynomial:
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return PBWPolynomial(t)

    def scaled(self, c) -> PBWPolynomial:
        return PBWPolynomial({w: c * v for w, v in self.terms.items()})

    def __repr__(self) -> str:
        return f"PBWPolynomial({dict(self.items())})"


def format_pbw(p: PBWPolynomial, unit: str = "d_∅", names=None) -> str:
    if not p.terms:
        return "0"
    out = []
    terms = sorted(p.terms.items(), key=lambda wc: (-len(wc[0]), wc[0]))
    for i, (w, c) in enumerate(terms):
        body = " * ".join(format_key(k, unit, names) for k in w) or unit
        text = body if abs(c) == 1 and w else f"{format_coefficient(abs(c))}·{body}"
        out.append(("-" if c < 0 else "") + text if i == 0 else f" {'-' if c < 0 else '+'} {text}")
    return "".join(out)


_PBW_CACHE: dict[tuple[Key, object], PBWPolynomial] = {}


def _pbw_key(key: Key, order: Callable[[Key], object] | None) -> PBWPolynomial:
    hit = _PBW_CACHE.get((key, order))
    if hit is not None:
        return hit
    if key == EMPTY:
        res = PBWPolynomial({(): 1})
    else:
        word = tuple(sorted(split_key(key), key=order))
        prod = evaluate_word(word)
        res = PBWPolynomial({word: 1})
        # d = P - (P - d); the correction has strictly fewer components
        for k, c in prod.terms.items():
            if k != key:
                res = res + _pbw_key(k, order).scaled(-c)
    _PBW_CACHE[(key, order)] = res
    return res


def pbw_normal_form(x: Element, order: Callable[[Key], object] | None = None) -> PBWPolynomial:
    """Rewrite x in ordered products of primitives (default order: key strings)."""
    out = PBWPolynomial()
    for k, c in x.terms.items():
        out = out + _pbw_key(k, order).scaled(c)
    return out


def evaluate_word(word: Word, product: Callable[[Element, Element], Element] = compose_D) -> Element:
    acc = Element.unit()
    for k in word:
        acc = product(acc, Element.basis(k))
    return acc


def evaluate_pbw(p: PBWPolynomial) -> Element:
    out = Element()
    for w, c in p.terms.items():
        out = out + c * evaluate_word(w)
    return out


def clear_caches() -> None:
    _ANTIPODE_CACHE.clear()
    _PBW_CACHE.clear()


"""Verification suites behind ``rulealg verify``.

Each suite returns a :class:`Report`: a flat list of named checks with an
``ok`` flag and optional detail.  Sample-based suites read their sizes from
the ``RULEALG_SAMPLES`` environment variable (see :mod:`sampling`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from .algebra import Element, compose_D, dagger, format_element, intern, superpose
from .diagrams import RuleDiagram, components
from .hopf import (
    antipode,
    antipode_by_convolution,
    convolve,
    coproduct,
    counit,
    evaluate_pbw,
    format_tensor,
    k_fold_product,
    map_factor,
    pbw_normal_form,
    swap,
    tensor_multiply,
)
from .reduction import ALL_TYPES, RewritingType, compose_R, reduce
from .sampling import random_diagram, random_relabel, sample_size
from .subalgebras import (
    Cell,
    commutator_cells,
    demonstrate_no_counit,
    edge_composition_report,
    graph_catalog,
    hw_antipode_closed_form,
    hw_compose_closed_form,
    hw_coproduct_closed_form,
    hw_element,
    hw_rule,
    hw_rule_closed_form,
    verify_observables,
    verify_structural,
    verify_table,
)

SUITES = ("vertex", "loop", "coupling", "hw", "structural", "observables", "hopf", "all")


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, **self.detail}


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def extend(self, other: Report) -> None:
        self.checks += other.checks

    def to_json(self) -> dict:
        return {"kind": "report", "suite": self.suite, "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}

    def lines(self, verbose: bool = False) -> list[str]:
        out = []
        show_all = verbose or len(self.checks) <= 40
        for c in self.checks:
            if show_all or not c.ok:
                extra = ""
                if "computed" in c.detail:
                    extra = f": {c.detail['computed']}"
                    if not c.ok:
                        extra += f" (expected {c.detail['expected']})"
                elif "cases" in c.detail:
                    extra = f": {c.detail['cases']} cases, {c.detail.get('mismatches', 0)} mismatches"
                out.append(f"[{'ok' if c.ok else 'MISMATCH'}] {c.name}{extra}")
        good = sum(c.ok for c in self.checks)
        out.append(f"{self.suite}: {good}/{len(self.checks)} checks passed")
        return out


def _cells(tag: str, cells: Iterable[Cell]) -> list[Check]:
    return [Check(f"{tag} {c.cell}", c.match, c.to_json()) for c in cells]


def _types(types: Sequence[RewritingType | str] | None) -> list[RewritingType]:
    return [RewritingType.parse(t) for t in (types or ALL_TYPES)]


def _fmt(x) -> str:
    return format_element(x) if isinstance(x, Element) else format_tensor(x)


def _aggregate(name: str, pairs: Iterable[tuple[Element, Element]]) -> Check:
    n = bad = 0
    first = None
    for got, exp in pairs:
        n += 1
        if got != exp:
            bad += 1
            if first is None:
                first = {"computed": _fmt(got), "expected": _fmt(exp)}
    return Check(name, bad == 0, {"cases": n, "mismatches": bad, **({"first_mismatch": first} if first else {})})


# ---------------------------------------------------------------- table suites

def verify_vertex(types=None) -> Report:
    r = Report("vertex")
    for T in _types(types):
        r.checks += _cells(f"[{T.value}]", verify_table("vertex", T))
        r.checks += _cells(f"[{T.value}]", commutator_cells("vertex", T))
    return r


def verify_loop(types=None) -> Report:
    r = Report("loop")
    for T in _types(types):
        r.checks += _cells(f"[{T.value}]", verify_table("loop", T))
        r.checks += _cells(f"[{T.value}]", commutator_cells("loop", T))
    return r


def verify_coupling(types=None) -> Report:
    r = Report("coupling")
    for T in _types(types):
        r.checks += _cells(f"[{T.value}]", verify_table("coupling", T))
        rep = edge_composition_report(T)
        r.checks.append(Check(f"[{T.value}] e_> ⊛ E_> seven terms", rep["match"],
                              {"terms": rep["terms"], "shapes": [list(s) for s in rep["shapes"]]}))
        r.checks += _cells(f"[{T.value}]", commutator_cells("edge", T))
    return r


def verify_hw(types=None, max_index: int = 3) -> Report:
    r = Report("hw")
    r.checks += _cells("[diagram]", verify_table("hw_diagram"))
    rng = range(max_index + 1)
    r.checks.append(_aggregate(
        f"d(r1,s1,t1) * d(r2,s2,t2), indices ≤ {max_index}",
        ((compose_D(hw_element(r1, s1, t1), hw_element(r2, s2, t2)),
          hw_compose_closed_form(r1, s1, t1, r2, s2, t2))
         for r1, s1, t1, r2, s2, t2 in iproduct(rng, repeat=6))))
    for T in _types(types):
        r.checks.append(_aggregate(
            f"[{T.value}] r(m1,n1) * r(m2,n2), indices ≤ {max_index}",
            ((compose_R(hw_rule(m1, n1), hw_rule(m2, n2), T), hw_rule_closed_form(m1, n1, m2, n2))
             for m1, n1, m2, n2 in iproduct(rng, repeat=4))))
        c = demonstrate_no_counit(T)
        r.checks.append(Check(f"[{T.value}] [a, a†] = r_∅ rules out a multiplicative counit",
                              c["contradiction"], {k: v for k, v in c.items() if k != "type"}))
    return r


def verify_structural_suite(types=None) -> Report:
    r = Report("structural")
    cat = graph_catalog()
    for T in _types(types):
        r.checks += _cells(f"[{T.value}]", verify_structural(T, cat))
    return r


def verify_observables_suite(types=None) -> Report:
    r = Report("observables")
    sample = [g for _, g in graph_catalog()[:7]]
    for T in _types(types):
        res = verify_observables(sample, T)
        r.checks += _cells(f"[{T.value}]", res["cells"])
        r.checks.append(Check(f"[{T.value}] Õ products stay in the span of Õ-shapes", res["tilde_closed"]))
        if T is RewritingType.DPO:
            r.checks.append(Check(f"[{T.value}] Ŏ products stay in the span of Ŏ-shapes", res["breve_closed"]))
    return r


# ---------------------------------------------------------------- Hopf suite

def random_primitive(rng: random.Random) -> RuleDiagram:
    return rng.choice(components(random_diagram(rng)))


def random_basis(rng: random.Random, degree: int) -> Element:
    x = Element.unit()
    for _ in range(degree):
        x = superpose(x, Element.basis(intern(random_primitive(rng))))
    return x


def _mu(t) -> Element:
    return k_fold_product(t, compose_D)


def hopf_checks(rng: random.Random, samples: int) -> list[Check]:
    ident: Callable[[Element], Element] = lambda x: x  # noqa: E731
    eps_unit = lambda x: counit(x) * Element.unit()  # noqa: E731
    checks: list[Check] = []

    def agg(name, pairs):
        checks.append(_aggregate(name, pairs))

    xs = [random_basis(rng, rng.randint(0, 4)) for _ in range(samples)]
    small = [x for x in xs if all(len(k.split(";")) <= 3 for k in x.terms)] + \
        [random_basis(rng, d) for d in range(4)]
    agg("counit: (ε⊗id)Δ = id = (id⊗ε)Δ",
        ((_mu(map_factor(coproduct(x), i, eps_unit)), x) for x in xs for i in (0, 1)))
    agg("cocommutativity", ((swap(coproduct(x)), coproduct(x)) for x in xs))
    agg("coassociativity", ((map_factor(coproduct(x), 0, coproduct), map_factor(coproduct(x), 1, coproduct))
                            for x in xs))
    pairs = []
    for _ in range(samples):
        da = rng.randint(0, 2)
        pairs.append((random_basis(rng, da), random_basis(rng, rng.randint(0, 4 - da))))
    agg("bialgebra: Δ(x*y) = Δ(x)Δ(y)",
        ((coproduct(compose_D(x, y)), tensor_multiply(coproduct(x), coproduct(y))) for x, y in pairs))
    agg("antipode: S⋆Id = e", ((convolve(antipode, ident, x), eps_unit(x)) for x in small))
    agg("antipode: Id⋆S = e", ((convolve(ident, antipode, x), eps_unit(x)) for x in small))
    agg("antipode agrees with the convolution series", ((antipode(x), antipode_by_convolution(x)) for x in small))

    def reversal():
        for _ in range(samples):
            ds = [Element.basis(intern(random_primitive(rng))) for _ in range(rng.randint(1, 3))]
            prod = Element.unit()
            rev = Element.unit()
            for d in ds:
                prod = compose_D(prod, d)
                rev = compose_D(antipode(d), rev)
            yield antipode(prod), rev
            sign = -1 if len(ds) % 2 else 1
            back = Element.unit()
            for d in reversed(ds):
                back = compose_D(back, d)
            yield antipode(prod), sign * back
    agg("antipode reverses products of primitives", reversal())
    rs = range(3)
    agg("HW antipode closed form, r,s,t ≤ 2",
        ((antipode(hw_element(r, s, t)), hw_antipode_closed_form(r, s, t)) for r, s, t in iproduct(rs, rs, rs)))
    agg("HW coproduct closed form, r,s,t ≤ 2",
        ((coproduct(hw_element(r, s, t)), hw_coproduct_closed_form(r, s, t)) for r, s, t in iproduct(rs, rs, rs)))
    agg("PBW round trip", ((evaluate_pbw(pbw_normal_form(x)), x) for x in small))
    return checks


def verify_hopf(types=None, seed: int = 0) -> Report:
    r = Report("hopf")
    r.checks = hopf_checks(random.Random(seed), sample_size(20))
    return r


# ---------------------------------------------------------------- property suite

def property_checks(rng: random.Random, samples: int, types=None) -> list[Check]:
    """Associativity, homomorphism, dagger and relabelling on random diagram triples."""
    types = _types(types)
    stats = {k: [0, 0] for k in ("assoc_D", "dagger", "relabel")}
    for T in types:
        stats[f"assoc_{T.value}"] = [0, 0]
        stats[f"hom_{T.value}"] = [0, 0]

    def rec(k, ok):
        stats[k][0] += 1
        stats[k][1] += not ok

    for _ in range(samples):
        ds = [random_diagram(rng) for _ in range(3)]
        x, y, z = (Element.of(d) for d in ds)
        xy = compose_D(x, y)
        rec("assoc_D", compose_D(xy, z) == compose_D(x, compose_D(y, z)))
        rec("dagger", dagger(xy) == compose_D(dagger(y), dagger(x)) and dagger(dagger(x)) == x)
        rec("relabel", Element.of(random_relabel(rng, ds[0])) == x)
        for T in types:
            rx, ry, rz = reduce(x, T), reduce(y, T), reduce(z, T)
            rec(f"hom_{T.value}", reduce(xy, T) == compose_R(rx, ry, T))
            rec(f"assoc_{T.value}",
                compose_R(compose_R(rx, ry, T), rz, T) == compose_R(rx, compose_R(ry, rz, T), T))
    return [Check(k, v[1] == 0, {"cases": v[0], "mismatches": v[1]}) for k, v in stats.items()]


# ---------------------------------------------------------------- dispatch

_RUNNERS: dict[str, Callable[..., Report]] = {
    "vertex": verify_vertex,
    "loop": verify_loop,
    "coupling": verify_coupling,
    "hw": verify_hw,
    "structural": verify_structural_suite,
    "observables": verify_observables_suite,
    "hopf": verify_hopf,
}


def run_suite(name: str, types=None) -> Report:
    if name == "all":
        r = Report("all")
        for n, f in _RUNNERS.items():
            r.extend(f(types))
        return r
    try:
        return _RUNNERS[name](types)
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None

"""The ten acceptance criteria, each exact over the rationals."""

import random
import time
from itertools import permutations
from itertools import product as iproduct

from rulealg.algebra import Element, compose_D, superpose
from rulealg.graphs import automorphism_count, graph_key, is_connected
from rulealg.hopf import antipode, antipode_by_convolution, evaluate_pbw, pbw_normal_form
from rulealg.reduction import ALL_TYPES, compose_R
from rulealg.subalgebras import (
    commutator_cells,
    demonstrate_no_counit,
    edge_composition_report,
    falling_factorial_expand,
    graph_catalog,
    hw_compose_closed_form,
    hw_element,
    hw_rule,
    hw_rule_closed_form,
    structural_compose,
    verify_table,
    vertex_identity,
)
from rulealg.verification import hopf_checks, property_checks, random_primitive


def brute_aut(G) -> int:
    vs, es = list(G.vertices), list(G.edges)
    n = 0
    for pv in permutations(vs):
        f = dict(zip(vs, pv))
        for pe in permutations(es):
            g = dict(zip(es, pe))
            n += all(G.edges[g[e]] == (f[s], f[t]) for e, (s, t) in G.edges.items())
    return n


def bad_cells(cells) -> list[str]:
    return [c.cell for c in cells if not c.match]


def test_criterion_1_hw_normal_ordering(verdict):
    t0 = time.perf_counter()
    rng = range(4)
    cases = bad = 0
    for r1, s1, t1, r2, s2, t2 in iproduct(rng, repeat=6):
        cases += 1
        bad += compose_D(hw_element(r1, s1, t1), hw_element(r2, s2, t2)) != \
            hw_compose_closed_form(r1, s1, t1, r2, s2, t2)
    dt = time.perf_counter() - t0
    ok = cases == 4096 and bad == 0 and dt < 60
    assert verdict(1, ok, f"HW diagram normal ordering, {cases} cases, {bad} mismatches, {dt:.1f} s")


def test_criterion_2_hw_rule_algebra(verdict):
    rng = range(4)
    cases = bad = 0
    for T in ALL_TYPES:
        for m1, n1, m2, n2 in iproduct(rng, repeat=4):
            cases += 1
            bad += compose_R(hw_rule(m1, n1), hw_rule(m2, n2), T) != hw_rule_closed_form(m1, n1, m2, n2)
    assert verdict(2, cases == 1024 and bad == 0, f"HW rule algebra, 4 types, {cases} cases, {bad} mismatches")


def test_criterion_3_vertex_algebra(verdict):
    bad, computed = [], []
    for T in ALL_TYPES:
        cells = verify_table("vertex", T) + commutator_cells("vertex", T)
        bad += [f"{T.value} {c}" for c in bad_cells(cells)]
        computed.append([c.computed for c in cells])
    independent = all(c == computed[0] for c in computed)
    ok = not bad and independent and len(computed[0]) == 9 + 3
    assert verdict(3, ok, f"vertex table (9 cells) and 3 commutators for 4 types, "
                          f"type-independent={independent}, mismatches={bad}")


def test_criterion_4_loop_and_coupling_tables(verdict):
    bad, n = [], 0
    for T in ALL_TYPES:
        for which in ("loop", "coupling"):
            cells = verify_table(which, T)
            n += len(cells)
            bad += [f"{T.value} {c}" for c in bad_cells(cells)]
    assert verdict(4, not bad and n == 4 * (9 + 36), f"loop and vertex-loop tables, {n} cells, mismatches={bad}")


def test_criterion_5_edge_composition(verdict):
    reps = {T.value: edge_composition_report(T) for T in ALL_TYPES}
    ok = all(r["match"] and r["terms"] == 7 for r in reps.values())
    shapes = reps["dpo"]["shapes"]
    assert verdict(5, ok, f"e_> ⊛ E_> has 7 atomic vertex-preserving terms, shapes (V, E_in, E_out) {shapes}")


def test_criterion_6_structural_dpo(verdict):
    cat = graph_catalog()
    assert len(cat) >= 10 and all(is_connected(G) and len(G.vertices) <= 5 for _, G in cat)
    bad = []
    for gn, G in cat:
        aut = brute_aut(G)
        if aut != automorphism_count(G):
            bad.append(f"|Aut({gn})|")
        for hn, H in cat:
            got = structural_compose(G, H, "dpo")
            exp = aut * Element.unit() if graph_key(G) == graph_key(H) else Element()
            if got != exp:
                bad.append(f"{gn}^ ⊛ {hn}^†")
    assert verdict(6, not bad, f"structural DPO over {len(cat)} graphs ({len(cat) ** 2} pairs), "
                               f"|Aut| by permutation oracle, mismatches={bad}")


def test_criterion_7_property_suite(verdict):
    t0 = time.perf_counter()
    checks = property_checks(random.Random(7), 200, ALL_TYPES)
    dt = time.perf_counter() - t0
    failed = [c.name for c in checks if not c.ok]
    ok = not failed and all(c.detail["cases"] == 200 for c in checks) and dt < 300
    names = ", ".join(c.name for c in checks)
    assert verdict(7, ok, f"200 random diagram triples: {names}; failed={failed}, {dt:.1f} s")


def antipode_explicit(ds: list[Element]) -> Element:
    """The explicit degree ≤ 3 antipode on a superposition of primitives."""
    d = Element.unit()
    for x in ds:
        d = superpose(d, x)
    n = len(ds)
    if n == 0:
        return d
    if n == 1:
        return -d
    if n == 2:
        return compose_D(ds[0], ds[1]) + compose_D(ds[1], ds[0]) - d
    out = -d
    for p in permutations(range(3)):
        out = out - compose_D(compose_D(ds[p[0]], ds[p[1]]), ds[p[2]])
    for i in range(3):
        j, k = (x for x in range(3) if x != i)
        out = out + compose_D(ds[i], superpose(ds[j], ds[k])) + compose_D(superpose(ds[j], ds[k]), ds[i])
    return out


def test_criterion_8_hopf_suite(verdict):
    rng = random.Random(8)
    checks = hopf_checks(rng, 30)
    cases = bad = 0
    for _ in range(40):
        ds = [Element.of(random_primitive(rng)) for _ in range(rng.randint(0, 3))]
        x = Element.unit()
        for y in ds:
            x = superpose(x, y)
        cases += 1
        bad += not (antipode_by_convolution(x) == antipode_explicit(ds) == antipode(x))
    failed = [c.name for c in checks if not c.ok] + (["explicit antipode, degrees 0-3"] if bad else [])
    names = "; ".join(c.name for c in checks)
    assert verdict(8, not failed, f"{names}; explicit antipode at degrees 0-3 ({cases} cases); failed={failed}")


def test_criterion_9_pbw(verdict):
    rng = random.Random(9)
    bad = 0
    for _ in range(50):
        x = Element.unit()
        for _ in range(rng.randint(1, 3)):
            x = superpose(x, Element.of(random_primitive(rng)))
        bad += evaluate_pbw(pbw_normal_form(x)) != x
    I = vertex_identity()
    stirling_bad = []
    for T in ALL_TYPES:
        sup, powers = Element.unit(), [Element.unit()]
        for n in range(6):
            while len(powers) <= n:
                powers.append(compose_R(powers[-1], I, T))
            exp = sum((c * powers[j] for j, c in enumerate(falling_factorial_expand(n))), Element())
            if sup != exp:
                stirling_bad.append((T.value, n))
            sup = superpose(sup, I)
    ok = bad == 0 and not stirling_bad
    assert verdict(9, ok, f"PBW round trip on 50 superpositions ({bad} mismatches); "
                          f"I^(⊎n) falling-factorial expansion n ≤ 5, 4 types, mismatches={stirling_bad}")


def test_criterion_10_no_counit(verdict):
    reps = [demonstrate_no_counit(T) for T in ALL_TYPES]
    ok = all(r["commutator"] == "1·r_∅" and r["contradiction"] and r["epsilon_if_multiplicative"] == "0"
             and r["epsilon_of_unit"] == "1" for r in reps)
    assert verdict(10, ok, "[a, a†] = 1·r_∅ in all 4 types; a multiplicative counit would force ε(r_∅) = 0 ≠ 1")

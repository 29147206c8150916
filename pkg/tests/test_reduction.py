import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulealg.algebra import Element, compose_D, superpose
from rulealg.diagrams import Match, compose_along, diagram_key, linear_rule
from rulealg.errors import ContractViolation
from rulealg.graphs import Multigraph
from rulealg.reduction import (
    ALL_TYPES,
    PreDiagram,
    RewritingType,
    boundary,
    compose_R,
    fix,
    fix_partial,
    is_irreducible_key,
    project,
    reduce,
    reduce_diagram,
)
from rulealg.sampling import random_atomic_rule, random_diagram
from rulealg.subalgebras import a, adag, d_e, d_e_diagram, ell, ldag, lam, vertex_identity

P2 = Multigraph(["u", "w"], {"e": ("u", "w")})


def dangling_example():
    """Edge-preserving rule with a vertex creation below and a deletion above."""
    keep = linear_rule(P2, P2, {"u": "u", "w": "w"}, {"e": "e"})
    new = linear_rule(Multigraph(), Multigraph(["w"]))
    dele = linear_rule(Multigraph(["w"]), Multigraph())
    lower = compose_along(keep, Match.of({"w": "w"}), new, tags=("keep", "new"))
    return compose_along(dele, Match.of({"keep.w": "w"}), lower, tags=("del", "low"))


def seeds():
    return st.integers(0, 2**32 - 1)


def test_types_parse():
    assert RewritingType.parse("SPO_AB") is RewritingType.SPO_AB
    assert RewritingType.parse("spo-a") is RewritingType.SPO_A
    with pytest.raises(ContractViolation):
        RewritingType.parse("nope")


def test_boundary_of_irreducible_is_itself():
    r = linear_rule(P2, Multigraph(["u", "w"]), {"u": "u", "w": "w"})
    p = boundary(r)
    assert p.is_clean()
    assert diagram_key(p.to_diagram()) == diagram_key(r)


def test_boundary_of_d_e_is_empty():
    p = boundary(d_e_diagram())
    assert not (p.in_vertices or p.in_edges or p.out_vertices or p.out_edges)
    assert project(p) == Element.unit()


def test_dangling_example_boundary():
    p = boundary(dangling_example())
    assert len(p.dangling_in) == 1 and len(p.dangling_out) == 1
    a_fixed = fix_partial(p, "A")
    assert not a_fixed.dangling_out and a_fixed.dangling_in == p.dangling_in
    ab = fix_partial(a_fixed, "B")
    assert ab.is_clean()
    ba = fix_partial(fix_partial(p, "B"), "A")
    assert ab == ba
    with pytest.raises(ContractViolation):
        fix_partial(p, "C")


def test_dangling_example_reductions():
    d = dangling_example()
    for T in (RewritingType.DPO, RewritingType.SPO_A, RewritingType.SPO_B):
        assert reduce_diagram(d, T) == 0
    assert reduce_diagram(d, RewritingType.SPO_AB) == vertex_identity()


def test_project_examples():
    assert project(PreDiagram()) == Element.unit()
    dirty = PreDiagram(in_vertices=(0,), in_edges={"e": (0, None)})
    assert project(dirty) == 0
    with pytest.raises(ContractViolation):
        dirty.to_diagram()


def test_reduce_examples():
    for T in ALL_TYPES:
        x = a() + 2 * lam(1, 1, 0)
        assert reduce(x, T) == x
        assert reduce(d_e(), T) == Element.unit()
        assert reduce(compose_D(a(), adag()), T) == superpose(a(), adag()) + Element.unit()


def test_compose_R_examples():
    I = vertex_identity()
    for T in ALL_TYPES:
        assert compose_R(a(), adag(), T) == superpose(a(), adag()) + Element.unit()
        assert compose_R(ell(), ldag(), T) == superpose(ell(), ldag()) + I + lam(1, 0, 1)
    with pytest.raises(ContractViolation):
        compose_R(d_e(), a(), "dpo")


def test_irreducible_key_predicate():
    assert is_irreducible_key(a().keys()[0])
    assert not is_irreducible_key(d_e().keys()[0])


def test_fix_is_identity_without_dangling_edges():
    p = boundary(linear_rule(P2, P2, {"u": "u", "w": "w"}, {"e": "e"}))
    for T in ALL_TYPES:
        assert fix(p, T) == p


@settings(max_examples=40, deadline=None)
@given(seeds(), seeds(), st.sampled_from(ALL_TYPES))
def test_reduction_is_a_homomorphism(s1, s2, T):
    x = Element.of(random_diagram(random.Random(s1)))
    y = Element.of(random_diagram(random.Random(s2)))
    assert reduce(compose_D(x, y), T) == compose_R(reduce(x, T), reduce(y, T), T)


@settings(max_examples=40, deadline=None)
@given(seeds(), seeds(), st.sampled_from(ALL_TYPES))
def test_rule_product_is_reduced_diagram_product(s1, s2, T):
    x = Element.of(random_atomic_rule(random.Random(s1)))
    y = Element.of(random_atomic_rule(random.Random(s2)))
    assert compose_R(x, y, T) == reduce(compose_D(x, y), T)


@settings(max_examples=40, deadline=None)
@given(seeds(), st.sampled_from(ALL_TYPES))
def test_reduction_is_idempotent(seed, T):
    x = Element.of(random_diagram(random.Random(seed)))
    r = reduce(x, T)
    assert reduce(r, T) == r
    assert all(is_irreducible_key(k) for k in r.keys())

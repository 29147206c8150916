import pytest

from rulealg.algebra import Element, commutator, compose_D, superpose, superpose_power
from rulealg.diagrams import classify, validate_diagram
from rulealg.errors import ContractViolation
from rulealg.graphs import Multigraph, automorphism_count, connected_components as graph_components
from rulealg.reduction import ALL_TYPES, RewritingType, compose_R, rule_product
from rulealg.subalgebras import (
    BUILTINS,
    L,
    a,
    adag,
    commutator_cells,
    d_e,
    demonstrate_no_counit,
    edge_composition_report,
    ell,
    falling_factorial_expand,
    graph_catalog,
    graph_hat,
    graph_hat_dag,
    hw_compose_closed_form,
    hw_element,
    hw_rule,
    hw_rule_closed_form,
    lam,
    ldag,
    nested_commutator_check,
    nontrivial_T,
    observable_breve,
    structural_compose,
    structural_expected,
    verify_observables,
    verify_structural,
    verify_table,
    vertex_identity,
    vertex_normal_form,
)

V = Multigraph([0])
EDGE = Multigraph([0, 1], {"a": (0, 1)})
TWO_CYCLE = Multigraph([0, 1], {"a": (0, 1), "b": (1, 0)})
PAIR = Multigraph([0, 1])


def failures(cells):
    return [(c.cell, c.to_json()) for c in cells if not c.match]


def test_generators_are_valid_and_classified():
    for name, f in BUILTINS.items():
        x = f()
        (k,) = x.keys()
        assert x.coefficient(k) == 1, name
    from rulealg.algebra import representative
    d = representative(d_e().keys()[0])
    assert not validate_diagram(d).violations
    labels = classify(d)
    assert "primitive" in labels and "irreducible" not in labels
    assert "atomic" in classify(representative(a().keys()[0]))


def test_hw_examples():
    assert hw_element(0, 0, 0) == Element.unit()
    assert hw_compose_closed_form(0, 1, 0, 1, 0, 0) == hw_element(1, 1, 0) + hw_element(0, 0, 1)
    assert hw_compose_closed_form(0, 2, 0, 2, 0, 0) == \
        hw_element(2, 2, 0) + 4 * hw_element(1, 1, 1) + 2 * hw_element(0, 0, 2)
    assert compose_D(a(), adag()) == hw_element(1, 1, 0) + d_e()


def test_hw_closed_form_small_indices():
    rng = range(3)
    for r1 in rng:
        for s1 in rng:
            for r2 in rng:
                for s2 in rng:
                    assert compose_D(hw_element(r1, s1, 1), hw_element(r2, s2, 0)) == \
                        hw_compose_closed_form(r1, s1, 1, r2, s2, 0)


def test_hw_rule_closed_form_all_types():
    for T in ALL_TYPES:
        for m1, n1, m2, n2 in ((0, 1, 1, 0), (1, 2, 2, 1), (0, 3, 3, 0), (2, 0, 0, 2)):
            assert compose_R(hw_rule(m1, n1), hw_rule(m2, n2), T) == hw_rule_closed_form(m1, n1, m2, n2)


def test_vertex_normal_form_examples():
    assert vertex_normal_form(1, 0, 0) == adag()
    I = vertex_identity()
    for T in ALL_TYPES:
        assert superpose(I, I) == compose_R(I, I, T) - I
        assert vertex_normal_form(0, 2, 0, T) == compose_R(I, I, T)
    assert falling_factorial_expand(2) == [0, -1, 1]
    assert falling_factorial_expand(3) == [0, 2, -3, 1]


@pytest.mark.parametrize("which", ["vertex", "loop", "coupling", "hw_diagram"])
@pytest.mark.parametrize("T", ALL_TYPES, ids=lambda t: t.value)
def test_tables(which, T):
    cells = verify_table(which, T)
    assert cells and not failures(cells)


def test_table_examples():
    assert nontrivial_T(a(), adag(), "dpo") == Element.unit()
    assert nontrivial_T(L(), ldag(), "dpo") == ldag() + lam(1, 1, 0)


def test_coupling_guards():
    for T in ALL_TYPES:
        got = nontrivial_T(a(), L(), T)
        assert (got != 0) == T.fixes_outputs
        assert len(nontrivial_T(a(), ell(), T)) == 1


def test_unknown_table():
    with pytest.raises(ContractViolation):
        verify_table("nope")


@pytest.mark.parametrize("which", ["vertex", "loop", "edge"])
@pytest.mark.parametrize("T", ALL_TYPES, ids=lambda t: t.value)
def test_commutators(which, T):
    cells = commutator_cells(which, T)
    assert cells and not failures(cells)


def test_edge_composition_report():
    for T in ALL_TYPES:
        rep = edge_composition_report(T)
        assert rep["match"] and rep["terms"] == 7


def test_structural_examples():
    assert structural_compose(EDGE, EDGE, "dpo") == Element.unit()
    assert structural_compose(TWO_CYCLE, TWO_CYCLE, "dpo") == 2 * Element.unit()
    assert structural_compose(V, EDGE, "dpo") == 0
    with pytest.raises(ContractViolation):
        structural_compose(PAIR, V, "dpo")


@pytest.mark.parametrize("T", ALL_TYPES, ids=lambda t: t.value)
def test_structural_catalog(T):
    cat = graph_catalog()[:8]
    assert not failures(verify_structural(T, cat))


def test_structural_prediction_agrees_with_automorphisms_in_dpo():
    for _, G in graph_catalog():
        assert structural_expected(G, G, "dpo") == automorphism_count(G) * Element.unit()


def test_polynomial_presentation():
    # Ĝ for a disconnected G is the product of the hats of its components, in either order
    G = Multigraph([0, 1, 2, 3], {"a": (0, 1), "b": (2, 2)})
    parts = graph_components(G)
    assert len(parts) == 3
    for T in ALL_TYPES:
        for hat in (graph_hat, graph_hat_dag):
            prod = Element.unit()
            for P in parts:
                prod = compose_R(prod, hat(P), T)
            assert prod == hat(G)
            assert compose_R(hat(parts[0]), hat(parts[1]), T) == compose_R(hat(parts[1]), hat(parts[0]), T)


def test_observables():
    # the Ŏ product formula is for connected observables; •• only enters the closure checks
    sample = [V, EDGE, TWO_CYCLE]
    for T in ALL_TYPES:
        res = verify_observables(sample, T)
        assert not failures(res["cells"]) and res["tilde_closed"]
    assert verify_observables(sample, "dpo")["breve_closed"]
    assert verify_observables([EDGE, PAIR], "dpo")["breve_closed"]
    assert observable_breve(V) == compose_R(observable_breve(V), observable_breve(V), "dpo") - \
        superpose(observable_breve(V), observable_breve(V))


def test_breve_not_closed_under_spo_a():
    assert not verify_observables([EDGE, PAIR], "spo_a")["breve_closed"]
    nt = nontrivial_T(observable_breve(PAIR), observable_breve(EDGE), "spo_a")
    assert len(nt) > 0


@pytest.mark.parametrize("T", ALL_TYPES, ids=lambda t: t.value)
def test_no_counit(T):
    rep = demonstrate_no_counit(T)
    assert rep["commutator_is_unit"] and rep["contradiction"]
    assert rep["epsilon_if_multiplicative"] == "0" and rep["epsilon_of_unit"] == "1"


@pytest.mark.parametrize("T", ALL_TYPES, ids=lambda t: t.value)
def test_nested_commutator_expansion(T):
    gens = [ell(), L(), ldag()]
    for xi in gens:
        for n in range(1, 4):
            for ys in ([ldag()] * n, gens[:n], [L()] * n):
                direct, expanded = nested_commutator_check(xi, ys, T)
                assert direct == expanded


def test_edge_commutator_value():
    from rulealg.subalgebras import edge_create, edge_delete
    prod = rule_product(RewritingType.DPO)
    assert commutator(edge_delete(), edge_create(), prod) == superpose_power(vertex_identity(), 2)

"""Rule diagram algebras, rule algebras and their Hopf structure, with exact arithmetic."""

from .algebra import (
    EMPTY,
    Element,
    commutator,
    compose_D,
    dagger,
    format_element,
    intern,
    nontrivial_compose,
    representative,
    superpose,
)
from .diagrams import (
    Match,
    RuleDiagram,
    classify,
    compose_along,
    diagram_key,
    enumerate_matches,
    linear_rule,
    validate_diagram,
)
from .errors import ContractViolation
from .graphs import Multigraph, automorphism_count, enumerate_injective_partial_morphisms, is_isomorphic
from .hopf import TensorElement, antipode, coproduct, counit, pbw_normal_form
from .reduction import RewritingType, compose_R, reduce
from .relations import Relation

__version__ = "0.1.0"

__all__ = [
    "EMPTY", "ContractViolation", "Element", "Match", "Multigraph", "Relation", "RewritingType",
    "RuleDiagram", "TensorElement", "antipode", "automorphism_count", "classify", "commutator",
    "compose_D", "compose_R", "compose_along", "coproduct", "counit", "dagger", "diagram_key",
    "enumerate_injective_partial_morphisms", "enumerate_matches", "format_element", "intern",
    "is_isomorphic", "linear_rule", "nontrivial_compose", "pbw_normal_form", "reduce",
    "representative", "superpose", "validate_diagram",
]

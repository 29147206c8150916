"""JSON encodings of diagrams, Elements, tensors, PBW polynomials and reports.

Every document is produced with sorted keys so output is byte-stable across
runs; the shipped schema lives in ``rulealg/schemas/rulealg.schema.json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any

from .algebra import Element, format_coefficient, format_element, format_key, representative
from .diagrams import RuleDiagram
from .graphs import Multigraph
from .hopf import PBWPolynomial, TensorElement


def _ids(xs) -> list[str]:
    return sorted(str(x) for x in xs)


def graph_to_json(G: Multigraph) -> dict:
    return {
        "vertices": _ids(G.vertices),
        "edges": sorted(([str(e), str(s), str(t)] for e, (s, t) in G.edges.items())),
    }


def diagram_to_json(d: RuleDiagram) -> dict:
    pairs = lambda m: sorted([str(x), str(y)] for x, y in m.items())  # noqa: E731
    return {
        "kind": "diagram",
        "input": graph_to_json(d.inp),
        "output": graph_to_json(d.out),
        "rule": {"vertices": pairs(d.r_v), "edges": pairs(d.r_e)},
        "match": {"vertices": pairs(d.m_v), "edges": pairs(d.m_e)},
    }


def element_to_json(x: Element, unit: str = "d_∅", representatives: bool = True, names=None) -> dict:
    terms = []
    for k, c in x.items():
        t: dict[str, Any] = {"key": k, "name": format_key(k, unit, names), "coefficient": format_coefficient(c)}
        if representatives:
            t["representative"] = diagram_to_json(representative(k))
        terms.append(t)
    return {"kind": "element", "text": format_element(x, unit, names), "terms": terms}


def tensor_to_json(t: TensorElement, unit: str = "d_∅", names=None) -> dict:
    return {
        "kind": "tensor",
        "arity": t.arity,
        "terms": [{"keys": list(ks), "names": [format_key(k, unit, names) for k in ks],
                   "coefficient": format_coefficient(c)} for ks, c in t.items()],
    }


def pbw_to_json(p: PBWPolynomial, unit: str = "d_∅", names=None) -> dict:
    return {
        "kind": "pbw",
        "terms": [{"word": list(w), "names": [format_key(k, unit, names) for k in w],
                   "coefficient": format_coefficient(c)} for w, c in p.items()],
    }


def parse_coefficient(s: str) -> Fraction:
    return Fraction(s)


def element_from_json(doc: dict) -> Element:
    return Element({t["key"]: parse_coefficient(t["coefficient"]) for t in doc["terms"]})


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2, default=_default)


def _default(o):
    if isinstance(o, Fraction):
        return format_coefficient(o)
    if isinstance(o, Element):
        return element_to_json(o, representatives=False)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def load_schema() -> dict:
    text = resources.files("rulealg").joinpath("schemas/rulealg.schema.json").read_text(encoding="utf-8")
    return json.loads(text)

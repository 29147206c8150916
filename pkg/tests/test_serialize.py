import json
import random
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulealg.algebra import Element, compose_D
from rulealg.hopf import coproduct, pbw_normal_form
from rulealg.serialize import (
    diagram_to_json,
    dumps,
    element_from_json,
    element_to_json,
    load_schema,
    parse_coefficient,
    pbw_to_json,
    tensor_to_json,
)
from rulealg.subalgebras import a, adag, d_e_diagram, hw_element
from rulealg.verification import random_basis, run_suite


@pytest.fixture(scope="module")
def validator():
    schema = load_schema()
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def test_element_json(validator):
    x = compose_D(a(), adag()) + Fraction(1, 3) * a()
    doc = element_to_json(x)
    validator.validate(doc)
    assert doc["kind"] == "element"
    assert {t["coefficient"] for t in doc["terms"]} == {"1", "1/3"}
    assert element_from_json(doc) == x


def test_zero_and_negative_coefficients(validator):
    doc = element_to_json(Element())
    validator.validate(doc)
    assert doc["terms"] == [] and doc["text"] == "0"
    doc = element_to_json(Fraction(-5, 2) * a())
    validator.validate(doc)
    assert doc["terms"][0]["coefficient"] == "-5/2"


def test_tensor_pbw_diagram_json(validator):
    validator.validate(tensor_to_json(coproduct(hw_element(1, 1, 0))))
    validator.validate(pbw_to_json(pbw_normal_form(hw_element(2, 0, 0))))
    validator.validate(diagram_to_json(d_e_diagram()))


def test_report_json(validator):
    validator.validate(run_suite("vertex", ["dpo"]).to_json())


def test_schema_rejects_bad_documents(validator):
    doc = element_to_json(a())
    doc["terms"][0]["coefficient"] = "1/0"
    with pytest.raises(jsonschema.ValidationError):
        validator.validate(doc)
    with pytest.raises(jsonschema.ValidationError):
        validator.validate({"kind": "element"})


def test_dumps_is_sorted_and_deterministic():
    x = compose_D(a(), adag())
    s1, s2 = dumps(element_to_json(x)), dumps(element_to_json(compose_D(a(), adag())))
    assert s1 == s2
    assert s1 == json.dumps(json.loads(s1), sort_keys=True, ensure_ascii=False, indent=2)


def test_parse_coefficient():
    assert parse_coefficient("-3/6") == Fraction(-1, 2)
    assert parse_coefficient("7") == 7


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_element_round_trip(seed, deg):
    rng = random.Random(seed)
    x = random_basis(rng, deg) - Fraction(rng.randint(1, 9), rng.randint(1, 9)) * random_basis(rng, 1)
    assert element_from_json(json.loads(dumps(element_to_json(x)))) == x

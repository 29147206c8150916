import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from rulealg import cli
from rulealg.serialize import load_schema
from rulealg.verification import Check, Report

CORPUS = Path(__file__).parent.parent / "corpus"
VALIDATOR = jsonschema.Draft202012Validator(load_schema())


def call(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compose_text_and_json(capsys):
    code, out, _ = call(capsys, "compose", "a", "adag")
    assert code == 0 and out.strip() == "a⊎a† + 1·r_∅"
    code, out, _ = call(capsys, "--json", "compose", "a", "adag")
    doc = json.loads(out)
    VALIDATOR.validate(doc)
    assert code == 0 and doc["text"] == "a⊎a† + 1·r_∅"
    assert out == json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def test_compose_diagram_type(capsys):
    code, out, _ = call(capsys, "compose", "a", "adag", "--type", "diagram")
    assert code == 0 and out.strip() == "a⊎a† + d_e"


def test_json_is_deterministic(capsys):
    runs = [call(capsys, "--json", "coproduct", "adag ⊎ a ⊎ d_e")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    VALIDATOR.validate(json.loads(runs[0]))


def test_reduce_dangling_example(capsys):
    f = str(CORPUS / "dangling.rd")
    for T, expected in (("dpo", "0"), ("spoa", "0"), ("spob", "0"), ("spoab", "I")):
        code, out, _ = call(capsys, "--file", f, "reduce", "D", "--type", T)
        assert code == 0 and out.strip() == expected
    code, out, _ = call(capsys, "--json", "--file", f, "reduce", "D", "--type", "dpo")
    assert json.loads(out)["terms"] == []


def test_commutator_antipode_dagger(capsys):
    assert call(capsys, "commutator", "a", "adag", "--type", "spob")[1].strip() == "1·r_∅"
    assert call(capsys, "antipode", "adag ⊎ a")[1].strip() == "a⊎a† + d_e"
    assert call(capsys, "dagger", "a")[1].strip() == "a†"


def test_normal_order(capsys):
    code, out, _ = call(capsys, "normal-order", "hw", "0", "2", "0", "2", "0", "0")
    assert code == 0 and out.strip() == "a⊎a⊎a†⊎a† + 4·a⊎a†⊎d_e + 2·d_e⊎d_e"
    code, out, _ = call(capsys, "normal-order", "hw", "0", "1", "1", "0", "--type", "spoa")
    assert code == 0 and out.strip() == "a⊎a† + 1·r_∅"
    code, out, _ = call(capsys, "normal-order", "vertex", "1", "0", "0")
    assert code == 0 and out.strip() == "a†"
    code, out, _ = call(capsys, "--json", "normal-order", "pbw", "I ⊎ I ⊎ I")
    assert code == 0
    VALIDATOR.validate(json.loads(out))


def test_verify_vertex(capsys):
    code, out, _ = call(capsys, "verify", "vertex")
    assert code == 0
    assert out.strip().splitlines()[-1] == "vertex: 12/12 checks passed"
    code, out, _ = call(capsys, "--json", "verify", "vertex", "--type", "all")
    doc = json.loads(out)
    VALIDATOR.validate(doc)
    assert doc["ok"] and len(doc["checks"]) == 48
    assert {"cell", "expected", "computed", "match"} <= set(doc["checks"][0])


def test_verify_mismatch_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda name, types: Report(name, [Check("broken", False)]))
    code, out, _ = call(capsys, "verify", "vertex")
    assert code == 1 and "[MISMATCH] broken" in out


@pytest.mark.parametrize("argv", [
    ["compose", "a", "nope"],
    ["compose", "a", "[a"],
    ["--file", "/nonexistent.rd", "compose", "a", "a"],
    ["normal-order", "hw", "1", "2"],
    ["normal-order", "vertex", "1", "x", "0"],
    ["compose", "Δ(a)", "a"],
    ["reduce", "a", "--type", "bogus"],
    ["frobnicate"],
])
def test_input_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(cli.main(argv))
    assert info.value.code == 2
    assert "rulealg" in capsys.readouterr().err


def test_export_dot(capsys):
    code, out, _ = call(capsys, "--file", str(CORPUS / "delayed_edge.rd"), "export-dot", "D")
    assert code == 0 and out.startswith("digraph") and out.count("subgraph") == 3
    code, out, _ = call(capsys, "export-dot", "a ⊎ adag")
    assert code == 0 and "digraph" in out


def test_run_and_fmt(capsys):
    code, out, _ = call(capsys, "run", str(CORPUS / "heisenberg.rd"))
    assert code == 0 and "[ann, cre]_dpo = 1·r_∅" in out.splitlines()
    code, out, _ = call(capsys, "fmt", str(CORPUS / "heisenberg.rd"))
    assert code == 0 and out.startswith("# Vertex creation")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rulealg", "compose", "a", "adag"],
                         capture_output=True, text=True, encoding="utf-8")
    assert res.returncode == 0 and res.stdout.strip() == "a⊎a† + 1·r_∅"

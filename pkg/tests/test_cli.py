import io
import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from dexr.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"
SCHEMA = json.loads(resources.files("dexr").joinpath("schemas/report.schema.json").read_text())


def d(name):
    return str(DATA / name)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        code = run(list(argv), out, err)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["exit_code"] == code
    return code, doc


def test_entail_example_prints_countermodel():
    code, out, _ = call("entail", d("ex1.dxr"), "--rule", "R(X) -> S(X).")
    assert code == 1
    assert "NotEntailed" in out and "countermodel: R(a). T(a)." in out
    code, doc = call_json("entail", d("ex1.dxr"), "--rule", "R(X) -> S(X).")
    v = doc["result"]["verdicts"][0]
    assert v["countermodel"]["facts"] == ["R(a).", "T(a)."]


def test_entail_positive_and_rules_file():
    assert call("entail", d("ex1.dxr"), "--rule", "R(X) -> S(X) | T(X).")[0] == 0
    code, doc = call_json("entail", d("linear-already.dxr"), "--rules", d("ex1.dxr"))
    assert code == 0 and doc["status"] == "Entailed"


def test_entail_unknown():
    code, out, _ = call("entail", d("successor.dxr"), "--rule", "R(X,Y) -> Q(X).",
                        "--max-depth", "3", "--max-nodes", "20", "--countermodel-bound", "1")
    # R(a,a) is a countermodel of size one, so enumeration still decides
    assert code == 1
    code, _, _ = call("entail", d("successor.dxr"), "--rule", "R(X,Y) -> exists Z. R(Z,X).",
                      "--max-depth", "3", "--max-nodes", "20", "--countermodel-bound", "1")
    assert code == 2


def test_compat_examples():
    code, out, _ = call("compat", d("ex1.dxr"), "--structure", d("ra.dst"),
                        "--n", "1", "--m", "0", "--l", "1")
    assert code == 0 and out.startswith("CompatibleWithI")
    code, doc = call_json("compat", d("ex1.dxr"), "--structure", d("ra.dst"),
                          "--n", "1", "--m", "0", "--l", "2")
    assert code == 1 and doc["result"]["witness"] == "R(a) & !(S(a)) & !(T(a))"


def test_rewrite_examples():
    code, out, _ = call("rewrite", d("linear-already.dxr"))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "Rewritten"
    assert lines[1:3] == ["R(X1) -> T(X1).", "S(X1) -> T(X1)."]
    code, doc = call_json("rewrite", d("guarded-fail.dxr"))
    assert code == 1 and doc["status"] == "Fail"
    # facts follow the schema order R, P, S
    assert doc["result"]["certificate"]["countermodel"]["facts"] == ["R(a).", "P(a)."]
    code, doc = call_json("rewrite", d("ex1.dxr"), "--candidate-cap", "5")
    assert code == 2 and doc["result"]["cap_hit"]


def test_chase_and_tree():
    code, doc = call_json("chase", d("ex1.dxr"), "--structure", d("ra.dst"))
    assert code == 0 and doc["status"] == "Saturated"
    assert [s["facts"] for s in doc["result"]["saturated"]] == [["R(a).", "S(a)."], ["R(a).", "T(a)."]]
    code, out, _ = call("chase", d("successor.dxr"), "--structure", d("rab.dst"),
                        "--max-depth", "3", "--tree")
    assert code == 2 and "truncated: 1" in out


def test_model_product_critical_diagram():
    assert call("model", d("ex1.dxr"), "--structure", d("i1.dst"))[0] == 0
    code, out, _ = call("model", d("ex1.dxr"), "--structure", d("ra.dst"))
    assert code == 1 and "violated at X1 -> a" in out
    code, doc = call_json("product", d("i1.dst"), d("i2.dst"))
    assert code == 0 and doc["result"]["product"]["facts"] == ["R(a*a)."]
    code, doc = call_json("product", d("i1.dst"), d("i2.dst"), "--repair", d("ex1.dxr"))
    assert code == 0 and doc["result"]["repaired"]["facts"] == ["R(a*a).", "S(a*a)."]
    code, doc = call_json("critical", d("ex1.dxr"), "--k", "1")
    assert code == 0 and doc["status"] == "Model"
    code, doc = call_json("diagram", d("ex1.dxr"), "--structure", d("ra.dst"), "--k-sub", "a")
    assert len(doc["result"]["negative"]) == 6
    assert doc["result"]["diagrams"][0] == {"diagram": "R(a)", "dd": "R(X1) -> false."}
    code, doc = call_json("check", d("guarded-fail.dxr"))
    assert code == 0 and doc["result"]["rules"][0]["guarded"] and not doc["result"]["rules"][0]["linear"]


@pytest.mark.parametrize("argv", [
    ("check", "no-such-file.dxr"),
    ("entail", "ex1.dxr", "--rule", "R(X -> S(X)."),
    ("chase", "ex1.dxr", "--structure", "ra.dst", "--max-depth", "0"),
    ("compat", "ex1.dxr", "--structure", "ra.dst", "--n", "1"),
    ("diagram", "ex1.dxr", "--structure", "ra.dst", "--k-sub", "b"),
    ("bogus",),
])
def test_usage_errors_exit_3(argv):
    argv = [d(a) if a.endswith((".dxr", ".dst")) and a != "no-such-file.dxr" else a for a in argv]
    code, _, _ = call(*argv)
    assert code == 3


def test_error_json_validates():
    code, doc = call_json("check", "no-such-file.dxr")
    assert code == 3 and doc["status"] == "Error"


@pytest.mark.parametrize("argv", [
    ("entail", "ex1.dxr", "--rule", "R(X) -> S(X)."),
    ("rewrite", "linear-already.dxr"),
    ("chase", "successor.dxr", "--structure", "rab.dst", "--max-depth", "4", "--tree"),
    ("diagram", "ex1.dxr", "--structure", "ra.dst", "--k-sub", "a", "--l", "2"),
])
def test_output_is_deterministic(argv):
    argv = [d(a) if a.endswith((".dxr", ".dst")) else a for a in argv]
    for fmt in ("text", "json"):
        first = call(*argv, "--format", fmt)
        assert first == call(*argv, "--format", fmt)


def test_text_and_json_verdicts_agree():
    for argv in (("entail", d("ex1.dxr"), "--rule", "R(X) -> S(X)."),
                 ("compat", d("ex1.dxr"), "--structure", d("ra.dst"), "--n", "1", "--m", "0", "--l", "1"),
                 ("rewrite", d("guarded-fail.dxr"))):
        code, out, _ = call(*argv)
        jcode, doc = call_json(*argv)
        assert code == jcode
        assert out.splitlines()[0].split()[0] == doc["status"]

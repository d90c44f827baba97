import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dexr.chase import (ChaseBudget, FreshNames, Trigger, active_triggers, apply_trigger, chase,
                        dump_tree, is_active, make_trigger)
from dexr.core import Atom, Schema, Structure, Var
from dexr.errors import NotATrigger
from dexr.generate import RuleShape, random_rules, random_schema, random_structure
from dexr.syntax import parse, parse_rule, parse_structure

from oracles import naive_model, plain_structure
from strategies import schema_and_rules, structures

RST = Schema.of("R/1", "S/1", "T/1")
EX1 = parse_rule("R(X) -> S(X) | T(X).", RST)
X = Var("X")


def test_active_triggers():
    ra = parse_structure("R(a).", RST)
    assert len(active_triggers(ra, [EX1])) == 1
    assert active_triggers(parse_structure("R(a). S(a).", RST), [EX1]) == []
    empty_body = parse_rule("true -> exists Z. S(Z).", RST)
    ts = active_triggers(Structure(RST), [empty_body])
    assert ts == [Trigger(0, empty_body, ())]


def test_apply_disjunctive_trigger():
    ra = parse_structure("R(a).", RST)
    t = make_trigger(0, EX1, {X: "a"})
    children = apply_trigger(ra, t)
    assert [c.facts for c in children] == [
        parse_structure("R(a). S(a).", RST).facts, parse_structure("R(a). T(a).", RST).facts]


def test_apply_existential_trigger():
    schema = Schema.of("R/1", "S/2")
    rule = parse_rule("R(X) -> exists Z. S(X,Z).", schema)
    [child] = apply_trigger(parse_structure("R(a).", schema), make_trigger(0, rule, {X: "a"}))
    assert Atom("S", ("a", "_n1")) in child
    two = parse_rule("R(X) -> exists Z W. S(Z,W).", schema)
    [child] = apply_trigger(parse_structure("R(a).", schema), make_trigger(0, two, {X: "a"}))
    assert Atom("S", ("_n1", "_n2")) in child


def test_apply_rejects_non_triggers():
    with pytest.raises(NotATrigger):
        apply_trigger(parse_structure("S(a).", RST), make_trigger(0, EX1, {X: "a"}))


def test_chase_two_branches():
    out = chase(parse_structure("R(a).", RST), [EX1])
    assert len(out.saturated) == 2 and out.truncated == 0
    assert out.complete


def test_chase_of_a_model_is_itself():
    i = parse_structure("R(a). T(a).", RST)
    out = chase(i, [EX1])
    assert out.saturated == [i]


def test_non_terminating_chase_is_truncated():
    rule = parse_rule("R(X,Y) -> exists Z. R(Y,Z).")
    out = chase(parse_structure("R(a,b)."), [rule], ChaseBudget(max_depth=5))
    assert out.saturated == [] and out.truncated >= 1
    assert not out.complete


def test_fifo_fairness():
    # the successor rule stays active forever; S -> T must still be applied early
    doc = parse("""
        R(X,Y) -> exists Z. R(Y,Z).
        S(X) -> T(X).
    """)
    i = parse_structure("R(a,b). S(a).", doc.schema)
    out = chase(i, doc.rules, ChaseBudget(max_depth=3))
    [leaf] = out.truncated_results
    assert Atom("T", ("a",)) in leaf


def test_determinism_and_tree():
    i = parse_structure("R(a).", RST)
    a = chase(i, [EX1], keep_tree=True)
    b = chase(i, [EX1], keep_tree=True)
    assert dump_tree(a.tree) == dump_tree(b.tree)
    lines = dump_tree(a.tree).splitlines()
    assert lines[0].startswith("0  -  -  +R(a)")
    assert lines[1].strip().startswith("1  0  0  +S(a)")


def test_fresh_names_skip_existing_nulls():
    schema = Schema.of("R/1", "S/2")
    rule = parse_rule("R(X) -> exists Z. S(X,Z).", schema)
    i = Structure(schema, [Atom("R", ("_n1",))])
    [leaf] = chase(i, [rule]).saturated
    assert Atom("S", ("_n1", "_n2")) in leaf
    fresh = FreshNames(1)
    assert fresh.take({"_n1"}) == "_n2"


def test_budget_validation():
    with pytest.raises(ValueError):
        ChaseBudget(max_depth=0)


@settings(max_examples=60, deadline=None)
@given(schema_and_rules(max_existentials=1), st.data())
def test_saturated_results_are_models(pair, data):
    schema, rules = pair
    i = data.draw(structures(schema))
    out = chase(i, rules, ChaseBudget(max_depth=6, max_nodes=200, max_domain=12))
    for s in out.saturated:
        assert naive_model(plain_structure(s), rules)


def test_paths_grow_monotonically():
    rng = random.Random(7)
    for _ in range(30):
        schema = random_schema(rng)
        rules = random_rules(rng, schema, 2, RuleShape(max_existentials=1))
        out = chase(random_structure(rng, schema), rules, ChaseBudget(6, 100, 12), keep_tree=True)
        stack = [out.tree]
        while stack:
            node = stack.pop()
            for c in node.children:
                assert node.structure.facts <= c.structure.facts
                assert c.trigger is not None and is_active(node.structure, c.trigger)
                stack.append(c)

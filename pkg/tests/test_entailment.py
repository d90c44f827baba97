import random

import pytest

from dexr.chase import ChaseBudget
from dexr.core import Schema, embed
from dexr.entailment import (Entailment, enumerate_structures, entails, entails_dd, entails_set,
                             find_countermodel, freeze_body)
from dexr.errors import SchemaMismatch
from dexr.generate import RuleShape, random_rules, random_schema
from dexr.satisfaction import is_model, satisfies
from dexr.syntax import format_structure, parse, parse_rule, parse_structure

from oracles import naive_countermodel, naive_model, naive_satisfies, plain_rule, plain_structure

RST = Schema.of("R/1", "S/1", "T/1")
EX1 = parse_rule("R(X) -> S(X) | T(X).", RST)


def test_freeze_body():
    f = freeze_body(EX1)
    assert format_structure(f.structure) == "R(_f1)."
    assert len(f.head) == 2
    empty = freeze_body(parse_rule("true -> exists Z. S(Z)."))
    assert not empty.structure.facts
    doc = parse("R(X,Y), S(X) -> exists Z. T(Y,Z).")
    f = freeze_body(doc.rules[0], doc.schema)
    assert format_structure(f.structure) == "R(_f1,_f2).\nS(_f1)."


def test_reflexive():
    v = entails([EX1], EX1, RST)
    assert v.status is Entailment.ENTAILED and v.depth == 1


def test_countermodel_example():
    v = entails([EX1], parse_rule("R(X) -> S(X).", RST), RST)
    assert v.status is Entailment.NOT_ENTAILED
    assert v.countermodel == parse_structure("R(a). T(a).", RST)
    assert v.source == "enumeration"


def test_empty_premises():
    v = entails([], parse_rule("R(X) -> R(X)."))
    assert v.status is Entailment.ENTAILED and v.depth == 0


def test_dependencies():
    v = entails_dd([], parse_rule("R(X) -> false."))
    assert v.countermodel == parse_structure("R(a).")
    v = entails_dd([EX1], embed(EX1), RST)
    assert v.entailed
    v = entails_dd([], parse_rule("R(X,Y) -> X = Y."))
    assert v.status is Entailment.NOT_ENTAILED
    assert v.countermodel == parse_structure("R(a,b).")


def test_sets():
    s = parse_rule("R(X) -> S(X).", RST)
    assert entails_set([EX1, s], [EX1], RST).entailed
    v = entails_set([], [s], RST)
    assert v.status is Entailment.NOT_ENTAILED and v.countermodel == parse_structure("R(a).", RST)
    assert entails_set([EX1], [EX1], RST).entailed


def test_schema_mismatch():
    with pytest.raises(SchemaMismatch):
        entails([EX1], parse_rule("R(X,Y) -> S(X)."), RST)


def test_unknown_when_nothing_decides():
    # a successor chain has no finite branch where Q appears, and no small countermodel
    doc = parse("""
        R(X,Y) -> exists Z. R(Y,Z).
        R(X,Y), R(Y,X) -> Q(X).
    """)
    goal = parse_rule("R(X,Y) -> Q(X).", doc.schema)
    v = entails(doc.rules, goal, doc.schema, ChaseBudget(4, 50, 10), countermodel_bound=1)
    assert v.status is Entailment.UNKNOWN


def test_enumeration_order():
    schema = Schema.of("R/1")
    out = list(enumerate_structures(schema, 2))
    assert len(out) == 4
    assert [format_structure(s).splitlines()[-1] for s in out[1:]] == ["R(a).", "R(b).", "R(b)."]
    assert find_countermodel([], EX1, RST, 1) == parse_structure("R(a).", RST)


def test_verdicts_against_oracle():
    rng = random.Random(29)
    budget = ChaseBudget(8, 200, 16)
    seen = {e: 0 for e in Entailment}
    for _ in range(80):
        schema = random_schema(rng, max_relations=2)
        shape = RuleShape(max_existentials=1, max_disjuncts=2)
        premises = random_rules(rng, schema, rng.randint(0, 2), shape)
        [goal] = random_rules(rng, schema, 1, shape)
        v = entails(premises, goal, schema, budget)
        seen[v.status] += 1
        if v.status is Entailment.ENTAILED:
            assert naive_countermodel(premises, goal, schema, 2) is None
        elif v.status is Entailment.NOT_ENTAILED:
            cm = plain_structure(v.countermodel)
            assert naive_model(cm, premises) and not naive_satisfies(cm, plain_rule(goal))
            assert is_model(v.countermodel, premises) and not satisfies(v.countermodel, goal)
    assert seen[Entailment.ENTAILED] and seen[Entailment.NOT_ENTAILED]


def test_monotone_in_premises():
    rng = random.Random(31)
    for _ in range(40):
        schema = random_schema(rng, max_relations=2)
        shape = RuleShape(max_existentials=0)
        premises = random_rules(rng, schema, 2, shape)
        extra = random_rules(rng, schema, 1, shape)
        [goal] = random_rules(rng, schema, 1, shape)
        if entails(premises, goal, schema).entailed:
            assert entails(premises + extra, goal, schema).status is not Entailment.NOT_ENTAILED

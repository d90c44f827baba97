import random

import pytest

from dexr.core import Atom, RuleProfile, Schema, Structure, critical_structure, induced_substructure
from dexr.diagrams import (Compat, NegConjunction, build_diagram, candidate_substructures,
                           check_compat_with, conjunctions, dd_in_class, diagram_to_dd,
                           g_subsets, minimal_neg_candidates, neg_candidates, satisfies_diagram,
                           variablize)
from dexr.errors import DomainNotSubset, GNotNegative, NotSubset
from dexr.generate import RuleShape, random_rules, random_structure
from dexr.satisfaction import satisfies_dd
from dexr.syntax import format_rule, parse_rule, parse_structure

from corpus import random_triple, structure_corpus
from oracles import naive_diagram_holds, naive_model, naive_variablized_holds, plain_rule

RST = Schema.of("R/1", "S/1", "T/1")
EX1 = parse_rule("R(X) -> S(X) | T(X).", RST)
I = parse_structure("R(a).", RST)


def conj(text):
    return NegConjunction.of(parse_structure(text, RST).facts)


def test_negative_candidates_of_the_worked_example():
    expected = [conj(t) for t in ("S(a).", "T(a).", "R(a). S(a).", "R(a). T(a).",
                                  "S(a). T(a).", "R(a). S(a). T(a).")]
    assert neg_candidates(I, I, 0) == expected
    assert len(list(g_subsets(neg_candidates(I, I, 0), 1))) == 7
    assert minimal_neg_candidates(I, I, 0) == expected[:2]


def test_negative_candidates_degenerate():
    c = critical_structure(RST, 1)
    k = induced_substructure(c, ["c1"])
    assert neg_candidates(k, c, 1) == []
    assert neg_candidates(Structure(RST), I, 0) == []
    assert minimal_neg_candidates(Structure(RST), I, 0) == []


def test_conjunctions_are_canonical_up_to_renaming():
    k = Structure(Schema.of("R/2"))
    cs = conjunctions(k, 2)
    texts = [g.to_text() for g in cs]
    assert len(texts) == len(set(texts))
    assert "exists Y1.(R(Y1,Y1))" in texts
    # R(Y1,Y2) and R(Y2,Y1) are the same conjunction
    assert sum(1 for g in cs if len(g.atoms) == 1) == 2


def test_sub_checks():
    with pytest.raises(NotSubset):
        neg_candidates(parse_structure("S(a).", RST), I, 0)
    with pytest.raises(DomainNotSubset):
        neg_candidates(Structure(RST, [], ["a"]), I, 0)


def test_build_diagram():
    d = build_diagram(I, I, [conj("S(a).")])
    assert d.to_text() == "R(a) & !(S(a))"
    assert build_diagram(I, I, []).to_text() == "R(a)"
    assert build_diagram(Structure(RST), I, []).is_tautology()
    with pytest.raises(GNotNegative):
        build_diagram(I, I, [conj("R(a).")])


def test_variablize_examples():
    d = build_diagram(I, I, [conj("S(a).")])
    assert variablize(d).to_text() == "exists X1.(R(X1) & !(S(X1)))"
    two = parse_structure("R(a,b).")
    v = variablize(build_diagram(two, two, []))
    assert "X1 != X2" in v.to_text()
    assert variablize(build_diagram(Structure(RST), I, [])).is_tautology()


def test_diagram_to_dd_cases():
    assert format_rule(diagram_to_dd(build_diagram(I, I, [conj("S(a).")]))) == "R(X1) -> S(X1)."
    assert format_rule(diagram_to_dd(build_diagram(I, I, []))) == "R(X1) -> false."
    two = parse_structure("R(a,b).")
    assert format_rule(diagram_to_dd(build_diagram(two, two, []))) == "R(X1,X2) -> X1 = X2."
    assert format_rule(diagram_to_dd(build_diagram(Structure(RST), I, []))) == "true -> false."


def test_compatibility_verdicts():
    v = check_compat_with(I, [EX1], RuleProfile(1, 0, 1))
    assert v.status is Compat.COMPATIBLE and v.verify([EX1])
    v = check_compat_with(I, [EX1], RuleProfile(1, 0, 2))
    assert v.status is Compat.NOT_COMPATIBLE
    assert v.witness.to_text() == "R(a) & !(S(a)) & !(T(a))"
    assert check_compat_with(I, [], RuleProfile(2, 1, 2)).status is Compat.COMPATIBLE


def test_minimal_and_exhaustive_agree():
    rng = random.Random(5)
    for _ in range(25):
        schema = Schema.of("R/1", "S/1") if rng.random() < 0.5 else RST
        rules = random_rules(rng, schema, 2, RuleShape(max_body=1, max_vars=1, max_existentials=0))
        i = random_structure(rng, schema, 2)
        for profile in (RuleProfile(1, 0, 1), RuleProfile(1, 0, 2)):
            a = check_compat_with(i, rules, profile)
            b = check_compat_with(i, rules, profile, exhaustive=True)
            assert a.status == b.status


def test_not_compatible_witnesses_have_no_model_in_corpus():
    v = check_compat_with(I, [EX1], RuleProfile(1, 0, 2))
    rule = plain_rule(EX1)
    for plain, s in structure_corpus(RST, 2):
        if naive_model(plain, [rule]):
            assert not satisfies_diagram(s, v.witness)


def test_variants():
    i = parse_structure("R(a,b). S(a). S(b).")
    plain = candidate_substructures(i, 2)
    linear = candidate_substructures(i, 2, "linear")
    guarded = candidate_substructures(i, 2, "guarded")
    assert all(len(k.facts) <= 1 for k in linear)
    assert len(guarded) <= len(plain)
    assert Structure(i.schema, [Atom("R", ("a", "b"))]) in linear
    with pytest.raises(ValueError):
        candidate_substructures(i, 2, "bogus")


def test_source_satisfies_its_diagrams():
    rng = random.Random(17)
    for _ in range(150):
        k, i, g, _m = random_triple(rng)
        d = build_diagram(k, i, g)
        assert satisfies_diagram(i, d)
        assert naive_diagram_holds(i, d.facts, d.negated)


def test_dd_is_negated_variablized_diagram():
    rng = random.Random(23)
    for _ in range(30):
        k, i, g, m = random_triple(rng)
        d = build_diagram(k, i, g)
        dd = diagram_to_dd(d)
        assert dd_in_class(dd, RuleProfile(len(k.domain), m, len(g)))
        for plain, s in structure_corpus(k.schema, 2):
            assert satisfies_dd(s, dd) != naive_variablized_holds(plain, d.facts, d.constants, d.negated)

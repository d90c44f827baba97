from hypothesis import given, settings
from hypothesis import strategies as st

from dexr.core import Atom, Schema, Structure, Var
from dexr.homs import (all_homomorphisms, are_isomorphic, compose, find_homomorphism,
                       is_homomorphism)
from dexr.products import direct_product, projective_homomorphism
from dexr.syntax import parse_structure

from oracles import naive_homs, naive_isomorphic
from strategies import schemas, structures

X, Y = Var("X"), Var("Y")
RST = Schema.of("R/1", "S/1", "T/1")


def test_atoms_into_structure():
    target = parse_structure("R(c,c).")
    assert find_homomorphism([Atom("R", (X, Y))], target) == {X: "c", Y: "c"}
    assert find_homomorphism([Atom("R", (X, X))], parse_structure("R(a,b).")) is None


def test_counts():
    two = parse_structure("R(a). R(b).")
    assert len(list(all_homomorphisms([Atom("R", (X,))], two))) == 2
    assert list(all_homomorphisms([], two)) == [{}]
    rs = parse_structure("R(a). S(b).")
    assert list(all_homomorphisms([Atom("R", (X,)), Atom("S", (X,))], rs)) == []


def test_projection_is_found_as_homomorphism():
    i1 = parse_structure("R(a). S(a).", RST)
    i2 = parse_structure("R(a). T(a).", RST)
    k = direct_product(i1, i2)
    pi = projective_homomorphism(k, i1)
    assert find_homomorphism(k, i1, fixed=pi) == pi


def test_isomorphism_examples():
    schema = Schema.of("R/1")
    assert are_isomorphic(parse_structure("R(a).", schema), parse_structure("R(b).", schema))
    schema = Schema.of("R/2")
    assert not are_isomorphic(parse_structure("R(a,b).", schema), parse_structure("R(a,a).", schema))


def test_injective_search():
    s = parse_structure("R(a,b). R(b,a).")
    t = parse_structure("R(c,c).")
    assert find_homomorphism(s, t) == {"a": "c", "b": "c"}
    assert find_homomorphism(s, t, injective=True) is None


def _same_schema_pair():
    return schemas().flatmap(lambda sc: st.tuples(structures(sc), structures(sc)))


@settings(max_examples=80, deadline=None)
@given(_same_schema_pair())
def test_homomorphisms_match_oracle(pair):
    s, t = pair
    found = sorted(sorted(h.items()) for h in all_homomorphisms(s, t))
    expected = sorted(sorted(h.items()) for h in naive_homs(s, t))
    assert found == expected
    for h in found:
        assert is_homomorphism(dict(h), s, t)


@settings(max_examples=80, deadline=None)
@given(_same_schema_pair())
def test_isomorphism_matches_oracle(pair):
    s, t = pair
    assert are_isomorphic(s, t) == naive_isomorphic(s, t)
    assert are_isomorphic(s, s)


@settings(max_examples=40, deadline=None)
@given(schemas().flatmap(lambda sc: st.tuples(structures(sc), structures(sc), structures(sc))))
def test_composition_closure(triple):
    i, j, k = triple
    h = find_homomorphism(i, j)
    g = find_homomorphism(j, k)
    if h is not None and g is not None:
        assert is_homomorphism(compose(g, h), i, k)


def test_renamed_copy_is_isomorphic():
    s = parse_structure("R(a,b). S(b).")
    ren = {"a": "x", "b": "y"}
    t = Structure(s.schema, [Atom(f.relation, tuple(ren[c] for c in f.args)) for f in s.facts])
    assert are_isomorphic(s, t)

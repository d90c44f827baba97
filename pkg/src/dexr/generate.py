"""Seeded random corpora of schemas, structures and rules for testing and demos."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Atom, Dexr, Disjunct, DisjunctiveDependency, Equality, Schema, Structure, Var

NAMES = "RSTPQU"
CONSTS = "abcdefgh"


@dataclass(frozen=True)
class RuleShape:
    max_body: int = 2
    max_vars: int = 2
    max_disjuncts: int = 2
    max_existentials: int = 1
    max_head_atoms: int = 2
    empty_body: float = 0.1
    linear: bool = False
    guarded: bool = False


def random_schema(rng: random.Random, max_relations: int = 3, max_arity: int = 2) -> Schema:
    k = rng.randint(1, max_relations)
    return Schema(tuple((NAMES[i], rng.randint(1, max_arity)) for i in range(k)))


def random_structure(rng: random.Random, schema: Schema, max_domain: int = 3,
                     density: float = 0.4, wide_domain: bool = False) -> Structure:
    size = rng.randint(1, max_domain)
    dom = list(CONSTS[:size])
    facts = []
    for name, arity in schema:
        for _ in range(size ** arity):
            if rng.random() < density:
                facts.append(Atom(name, tuple(rng.choice(dom) for _ in range(arity))))
    if wide_domain:
        return Structure(schema, facts, dom)
    return Structure(schema, facts)


def _atom(rng, schema, terms):
    name, arity = rng.choice(schema.relations)
    return Atom(name, tuple(rng.choice(terms) for _ in range(arity)))


def random_dexr(rng: random.Random, schema: Schema, shape: RuleShape = RuleShape()) -> Dexr:
    xs = [Var(f"X{i}") for i in range(1, shape.max_vars + 1)]
    if rng.random() < shape.empty_body:
        body = ()
    else:
        size = 1 if shape.linear else rng.randint(1, shape.max_body)
        if shape.guarded and not shape.linear:
            name, arity = rng.choice(schema.relations)
            guard = Atom(name, tuple(rng.choice(xs) for _ in range(arity)))
            gvars = list(guard.variables)
            body = (guard,) + tuple(_atom(rng, schema, gvars) for _ in range(size - 1))
        else:
            body = tuple(_atom(rng, schema, xs) for _ in range(size))
    bvars = list(dict.fromkeys(v for a in body for v in a.variables))
    disjuncts = []
    for _ in range(rng.randint(1, shape.max_disjuncts)):
        zs = [Var(f"Z{i}") for i in range(1, rng.randint(0, shape.max_existentials) + 1)]
        terms = bvars + zs
        if not terms:
            zs = [Var("Z1")]
            terms = zs
        atoms = tuple(_atom(rng, schema, terms) for _ in range(rng.randint(1, shape.max_head_atoms)))
        disjuncts.append(Disjunct(frozenset(zs), atoms))
    return Dexr(body, tuple(disjuncts))


def random_rules(rng: random.Random, schema: Schema, count: int, shape: RuleShape = RuleShape()) -> list:
    return [random_dexr(rng, schema, shape) for _ in range(count)]


def random_dd(rng: random.Random, schema: Schema, shape: RuleShape = RuleShape()) -> DisjunctiveDependency:
    base = random_dexr(rng, schema, shape)
    bvars = list(base.body_variables)
    head = list(base.disjuncts[: rng.randint(0, len(base.disjuncts))])
    if len(bvars) >= 2 and rng.random() < 0.5:
        x, y = rng.sample(bvars, 2)
        head.append(Equality(x, y))
    return DisjunctiveDependency(base.body, tuple(head))


def full_shape(**kw) -> RuleShape:
    """Rules without existential variables: their chase always terminates."""
    return RuleShape(max_existentials=0, empty_body=0.0, **kw)

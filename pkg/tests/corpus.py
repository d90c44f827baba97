"""Shared random inputs for the property and acceptance suites."""
from __future__ import annotations

import random
from functools import lru_cache

from dexr.core import Schema, const_key, induced_substructure
from dexr.diagrams import NegConjunction, atom_candidates
from dexr.generate import random_structure

from oracles import corpus, schema_key, to_structure

SCHEMA_POOL = (
    Schema.of("R/1", "S/1", "T/1"),
    Schema.of("R/2"),
    Schema.of("R/2", "S/1"),
    Schema.of("R/1", "S/1"),
)


@lru_cache(maxsize=None)
def _structures(key, max_size):
    schema = Schema(key)
    return tuple(to_structure(schema, p) for p in corpus(schema, max_size))


def structure_corpus(schema, max_size=3):
    """The brute-force corpus as (plain, Structure) pairs."""
    return list(zip(corpus(schema, max_size), _structures(schema_key(schema), max_size)))


def random_substructure(rng: random.Random, i, max_size=2):
    """An induced substructure of ``i`` whose domain is its active domain."""
    adom = sorted(i.active_domain(), key=const_key)
    for _ in range(20):
        top = min(max_size, len(adom))
        size = 0 if not top or rng.random() < 0.15 else rng.randint(1, top)
        k = induced_substructure(i, rng.sample(adom, size))
        if k.domain == k.active_domain():
            return k
    return induced_substructure(i, [])


def random_negations(rng: random.Random, k, i, m, l):
    """Up to ``l`` conjunctions over K's constants and ``m`` variables, none true in ``i``."""
    atoms = atom_candidates(k, m)
    out = set()
    for _ in range(6 * l):
        if len(out) >= l or not atoms:
            break
        g = NegConjunction.of(rng.sample(atoms, rng.randint(1, min(3, len(atoms)))))
        if not g.holds_in(i):
            out.add(g)
    return sorted(out, key=NegConjunction.sort_key)


def random_triple(rng: random.Random, l=2):
    """``(K, I, G, m)`` with K an induced substructure of I and G negative in I."""
    schema = rng.choice(SCHEMA_POOL)
    i = random_structure(rng, schema, max_domain=3, density=0.5)
    k = random_substructure(rng, i)
    m = rng.randint(0, 1)
    return k, i, random_negations(rng, k, i, m, rng.randint(0, l)), m

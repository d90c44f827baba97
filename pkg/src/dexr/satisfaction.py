"""Satisfaction of dexrs and disjunctive dependencies by finite structures."""
from __future__ import annotations

from .core import Dexr, DisjunctiveDependency, Equality, Structure
from .homs import all_homomorphisms, find_homomorphism


def disjunct_holds(structure: Structure, disjunct, match: dict) -> bool:
    """Does ``match`` extend to the disjunct inside ``structure``?"""
    if isinstance(disjunct, Equality):
        return match.get(disjunct.left, disjunct.left) == match.get(disjunct.right, disjunct.right)
    fixed = {v: match[v] for v in disjunct.frontier if v in match}
    return find_homomorphism(disjunct.atoms, structure, fixed) is not None


def violations(structure: Structure, rule):
    """Body matches of ``rule`` that no disjunct extends.

    For an empty body the single candidate match is ``{}``.
    """
    matches = all_homomorphisms(rule.body, structure) if rule.body else iter([{}])
    for h in matches:
        if not any(disjunct_holds(structure, d, h) for d in rule.disjuncts):
            yield h


def satisfies_dexr(structure: Structure, rule: Dexr) -> bool:
    return next(violations(structure, rule), None) is None


def satisfies_dd(structure: Structure, dependency: DisjunctiveDependency) -> bool:
    # k = 0 with an empty body is false; the generic loop covers every other case
    return next(violations(structure, dependency), None) is None


def satisfies(structure: Structure, rule) -> bool:
    if isinstance(rule, Dexr):
        return satisfies_dexr(structure, rule)
    return satisfies_dd(structure, rule)


def is_model(structure: Structure, rules) -> bool:
    return all(satisfies(structure, r) for r in rules)


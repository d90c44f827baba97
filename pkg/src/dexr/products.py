"""Direct products and repairable direct products."""
from __future__ import annotations

import itertools

from .core import Atom, Structure
from .errors import ChaseExhausted, InputNotModel, NotAProduct, SchemaMismatch
from .homs import find_homomorphism, is_homomorphism

OPEN, CLOSE = "⟨", "⟩"


def pair(left: str, right: str) -> str:
    return f"{OPEN}{left},{right}{CLOSE}"


def split_pair(c: str):
    """Inverse of :func:`pair`; None for constants that are not pairs."""
    if not (c.startswith(OPEN) and c.endswith(CLOSE)):
        return None
    inner = c[1:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == OPEN:
            depth += 1
        elif ch == CLOSE:
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1:]
    return None


def direct_product(i: Structure, j: Structure) -> Structure:
    if i.schema != j.schema:
        raise SchemaMismatch(f"{i.schema} vs {j.schema}")
    dom = [pair(a, b) for a in i.sorted_domain() for b in j.sorted_domain()]
    facts = []
    for name in i.schema.names:
        for s, t in itertools.product(i.tuples(name), j.tuples(name)):
            facts.append(Atom(name, tuple(pair(a, b) for a, b in zip(s, t))))
    return Structure(i.schema, facts, dom)


def projective_homomorphism(k: Structure, left: Structure | None = None, side: int = 0) -> dict:
    """The projection of a product onto its left (``side=0``) or right factor.

    When ``left`` is given the map is also checked to be a homomorphism into it.
    """
    parts = {}
    for c in k.domain:
        p = split_pair(c)
        if p is None:
            raise NotAProduct(f"{c!r} is not a pair constant")
        parts[c] = p
    lefts = {p[0] for p in parts.values()}
    rights = {p[1] for p in parts.values()}
    if len(parts) != len(lefts) * len(rights):
        raise NotAProduct("the domain is not a full Cartesian product")
    pi = {c: p[side] for c, p in parts.items()}
    if left is not None and not is_homomorphism(pi, k, left):
        raise NotAProduct("the projection is not a homomorphism into the given factor")
    return pi


def repairable_direct_product(i: Structure, j: Structure, rules, budget=None) -> Structure:
    """Chase ``I ⊗ J`` and return the first saturated result that maps into
    ``I`` by a homomorphism extending the projection."""
    from .chase import ChaseBudget, chase
    from .satisfaction import is_model

    rules = list(rules)
    for name, s in (("I", i), ("J", j)):
        if not is_model(s, rules):
            raise InputNotModel(f"{name} is not a model of the rule set")
    k = direct_product(i, j)
    pi = projective_homomorphism(k, i)
    outcome = chase(k, rules, budget or ChaseBudget())
    for result in outcome.saturated:
        if find_homomorphism(result, i, fixed=pi) is not None:
            return result
    raise ChaseExhausted(f"no saturated branch within budget "
                         f"({len(outcome.saturated)} saturated, {outcome.truncated} truncated)")


def repair_homomorphism(i: Structure, product: Structure, repaired: Structure) -> dict | None:
    """A homomorphism ``repaired -> I`` extending the projection of ``product``."""
    pi = projective_homomorphism(product, i)
    return find_homomorphism(repaired, i, fixed=pi)


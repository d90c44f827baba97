"""Three-valued entailment between rule sets.

Positive answers come from chasing the frozen body of the rule: if every branch
reaches a structure where some instantiated head disjunct holds, the rule is
entailed.  Negative answers come with a countermodel, either from a plain
enumeration of small structures or from a saturated chase branch.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .chase import ChaseBudget, chase
from .core import Atom, Disjunct, Equality, Schema, Structure
from .errors import SchemaMismatch
from .homs import find_homomorphism
from .satisfaction import is_model, satisfies

FROZEN_PREFIX = "_f"
DEFAULT_BUDGET = ChaseBudget(max_depth=12, max_nodes=400, max_domain=24)
DOMAIN_NAMES = "abcdefghijklmnopqrstuvwxyz"


class Entailment(str, enum.Enum):
    ENTAILED = "Entailed"
    NOT_ENTAILED = "NotEntailed"
    UNKNOWN = "Unknown"


@dataclass
class Verdict:
    status: Entailment
    countermodel: Structure | None = None
    depth: int | None = None
    source: str = ""       # "chase" | "enumeration" | ""
    rule: object = None    # the rule the verdict is about (entails_set: the failing one)
    unresolved: list = field(default_factory=list)

    @property
    def entailed(self) -> bool:
        return self.status is Entailment.ENTAILED


@dataclass(frozen=True)
class FrozenRule:
    structure: Structure
    head: tuple          # disjuncts with the body variables replaced by constants
    renaming: dict

    def head_holds(self, structure: Structure) -> bool:
        return any(instance_holds(structure, d) for d in self.head)


def instance_holds(structure: Structure, d) -> bool:
    if isinstance(d, Equality):
        return d.left == d.right  # frozen constants stay distinct
    return find_homomorphism(d.atoms, structure) is not None


def rules_schema(rules, extra=()) -> Schema:
    return Schema.infer(list(rules) + list(extra))


def _check_schema(schema: Schema, items):
    try:
        for a in _atoms(items):
            schema.check_atom(a)
    except Exception as exc:
        raise SchemaMismatch(str(exc)) from None


def _atoms(items):
    for r in items:
        yield from r.body
        for d in r.disjuncts:
            if isinstance(d, Disjunct):
                yield from d.atoms


def freeze_body(rule, schema: Schema | None = None) -> FrozenRule:
    """Replace each body variable by its own frozen constant ``_f1, _f2, ...``."""
    schema = schema or rules_schema([rule])
    rho = {v: f"{FROZEN_PREFIX}{i}" for i, v in enumerate(rule.body_variables, 1)}
    facts = [a.substitute(rho) for a in rule.body]
    head = []
    for d in rule.disjuncts:
        if isinstance(d, Equality):
            head.append(Equality(rho[d.left], rho[d.right]))
        else:
            head.append(Disjunct(d.existentials, tuple(a.substitute(rho) for a in d.atoms)))
    return FrozenRule(Structure(schema, facts), tuple(head), rho)


def all_facts(schema: Schema, domain) -> list:
    return [Atom(name, args) for name, arity in schema
            for args in itertools.product(domain, repeat=arity)]


def enumerate_structures(schema: Schema, size: int):
    """Every structure with domain ``a, b, ...`` of the given size, ordered by
    the bitmask over the facts (schema order, then arguments)."""
    domain = list(DOMAIN_NAMES[:size]) if size <= len(DOMAIN_NAMES) else [f"d{i}" for i in range(size)]
    facts = all_facts(schema, domain)
    for mask in range(1 << len(facts)):
        yield Structure(schema, [f for i, f in enumerate(facts) if mask >> i & 1], domain)


def find_countermodel(rules, rule, schema: Schema, bound: int, max_facts: int = 16):
    """First structure (by size, then bitmask) satisfying ``rules`` but not ``rule``."""
    for size in range(1, bound + 1):
        if sum(size ** a for _, a in schema) > max_facts:
            break
        for s in enumerate_structures(schema, size):
            if not satisfies(s, rule) and is_model(s, rules):
                return s
    return None


def _decide(rules, rule, schema, budget, bound) -> Verdict:
    frozen = freeze_body(rule, schema)
    outcome = chase(frozen.structure, rules, budget, stop=frozen.head_holds)
    if outcome.complete and not outcome.saturated:
        return Verdict(Entailment.ENTAILED, depth=max(outcome.stopped_depths, default=0), rule=rule)
    cm = find_countermodel(rules, rule, schema, bound)
    if cm is not None:
        return Verdict(Entailment.NOT_ENTAILED, cm, source="enumeration", rule=rule)
    for s in outcome.saturated:
        # saturated and not stopped: a model of the rules where the head fails
        if is_model(s, rules) and not satisfies(s, rule):
            return Verdict(Entailment.NOT_ENTAILED, s, source="chase", rule=rule)
    return Verdict(Entailment.UNKNOWN, rule=rule)


def entails(rules, rule, schema: Schema | None = None, budget: ChaseBudget | None = None,
            countermodel_bound: int = 2) -> Verdict:
    """Does every model of ``rules`` satisfy ``rule``?"""
    rules = list(rules)
    if schema is None:
        schema = rules_schema(rules, [rule])
    else:
        _check_schema(schema, rules + [rule])
    return _decide(rules, rule, schema, budget or DEFAULT_BUDGET, countermodel_bound)


def entails_dd(rules, dependency, schema: Schema | None = None, budget: ChaseBudget | None = None,
               countermodel_bound: int = 2) -> Verdict:
    """As :func:`entails` for a disjunctive dependency.

    Equality disjuncts count as derived only when both sides are the same
    frozen constant, so identifications forced by the rules are not seen and
    may leave the answer Unknown.
    """
    return entails(rules, dependency, schema, budget, countermodel_bound)


def entails_set(premises, conclusions, schema: Schema | None = None,
                budget: ChaseBudget | None = None, countermodel_bound: int = 2) -> Verdict:
    """``premises ⊨ σ`` for every ``σ`` in ``conclusions``."""
    premises, conclusions = list(premises), list(conclusions)
    if schema is None:
        schema = rules_schema(premises, conclusions)
    unknown = []
    depth = 0
    for rule in conclusions:
        v = entails(premises, rule, schema, budget, countermodel_bound)
        if v.status is Entailment.NOT_ENTAILED:
            return v
        if v.status is Entailment.UNKNOWN:
            unknown.append(rule)
        else:
            depth = max(depth, v.depth or 0)
    if unknown:
        return Verdict(Entailment.UNKNOWN, unresolved=unknown)
    return Verdict(Entailment.ENTAILED, depth=depth)


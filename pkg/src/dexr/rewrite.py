"""Guarded-to-linear rewriting by bounded candidate enumeration.

The rewriter collects every linear rule within the size bounds that the input
entails, and keeps the collection when it entails the input back.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from math import comb

from .chase import ChaseBudget, chase
from .core import Atom, Dexr, Disjunct, RuleProfile, Schema, Var, profile_of_set
from .entailment import (DEFAULT_BUDGET, Entailment, Verdict, entails, entails_set,
                         freeze_body, instance_holds)
from .errors import NotGuarded
from .satisfaction import is_model, satisfies


def linearization_bound(schema: Schema, n: int, m: int, l: int, alg1: bool = False) -> int:
    """Number of head disjuncts that suffices for an equivalent linear rule set.

    ``alg1`` selects the variant exponent ``ar(S)·(n+1)`` instead of ``m·ar(S)``.
    """
    RuleProfile(n, m, l).require_dexr_bounds()
    ar = schema.max_arity
    if alg1:
        return l * len(schema) * (n + m) ** (ar * (n + 1))
    return l * len(schema) * (n + m + 1) ** (m * ar)


def candidate_count_bound(schema: Schema, n: int, m: int, lp: int, p: int | None = None,
                          empty_body: bool = True) -> int:
    """``|S|·n^ar · Σ_{i=1..ℓ'} C(H, i)`` with ``H = 2^(|S|·(n+m)^ar)``, or
    ``H = Σ_{i=1..p} C(|S|·(n+m)^ar, i)`` when heads have at most ``p`` atoms.

    The first factor only covers bodies with one atom.  With ``empty_body``
    the rules with an empty body are added, ``Σ_{i=1..ℓ'} C(H0, i)`` where
    ``H0`` counts the non-empty heads over ``m`` existential variables alone;
    the term is 0 when ``m = 0``.
    """
    ar = schema.max_arity
    atoms = len(schema) * (n + m) ** ar
    h = 2 ** atoms if p is None else sum(comb(atoms, i) for i in range(1, p + 1))
    total = len(schema) * n ** ar * sum(comb(h, i) for i in range(1, lp + 1))
    if empty_body:
        atoms0 = len(schema) * m ** ar
        h0 = 2 ** atoms0 - 1 if p is None else sum(comb(atoms0, i) for i in range(1, p + 1))
        total += sum(comb(h0, i) for i in range(1, lp + 1))
    return total


def _variable_patterns(arity: int, n: int):
    """Restricted-growth argument tuples over at most ``n`` variables."""
    def grow(prefix, used):
        if len(prefix) == arity:
            yield tuple(prefix)
            return
        for k in range(1, min(used + 1, n) + 1):
            yield from grow(prefix + [k], max(used, k))
    yield from grow([], 0)


def linear_bodies(schema: Schema, n: int) -> list:
    """Canonical single-atom bodies, then the empty body."""
    bodies = []
    for name, arity in schema:
        for pattern in _variable_patterns(arity, n):
            bodies.append((Atom(name, tuple(Var(f"X{k}") for k in pattern)),))
    bodies.append(())
    return bodies


def head_disjuncts(schema: Schema, body: tuple, m: int, p: int | None = None) -> list:
    """Distinct disjuncts over the body variables and Z1..Zm, up to renaming of
    the existential variables."""
    bvars = [v for a in body for v in a.variables]
    bvars = list(dict.fromkeys(bvars))
    zs = [Var(f"Z{i}") for i in range(1, m + 1)]
    terms = bvars + zs
    atoms = [Atom(name, args) for name, arity in schema
             for args in itertools.product(terms, repeat=arity)]
    top = len(atoms) if p is None else min(p, len(atoms))
    seen = set()
    out = []
    for size in range(1, top + 1):
        for combo in itertools.combinations(atoms, size):
            d = Disjunct(frozenset(zs), combo)
            k = d.key()
            if k not in seen:
                seen.add(k)
                out.append(d)
    return out


def count_linear_dexrs(schema: Schema, n: int, m: int, lp: int, p: int | None = None) -> int:
    total = 0
    for body in linear_bodies(schema, n):
        total += sum(comb(len(head_disjuncts(schema, body, m, p)), i) for i in range(1, lp + 1))
    return total


def enumerate_linear_dexrs(schema: Schema, n: int, m: int, lp: int, p: int | None = None):
    """Every linear rule with at most ``n`` body variables, ``m`` existential
    variables per disjunct and ``lp`` disjuncts, once up to renaming."""
    for body in linear_bodies(schema, n):
        disjuncts = head_disjuncts(schema, body, m, p)
        for size in range(1, lp + 1):
            for head in itertools.combinations(disjuncts, size):
                yield Dexr(body, head)


class Rewrite(str, enum.Enum):
    REWRITTEN = "Rewritten"
    FAIL = "Fail"
    UNKNOWN = "Unknown"


@dataclass
class RewriteConfig:
    profile: RuleProfile | None = None
    lp: int | None = None
    p: int | None = None
    alg1_bound: bool = False
    budget: ChaseBudget = DEFAULT_BUDGET
    countermodel_bound: int = 2
    candidate_cap: int = 100_000
    minimize: bool = True

    def __post_init__(self):
        for name in ("lp", "p"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be positive")
        if self.countermodel_bound < 1 or self.candidate_cap < 1:
            raise ValueError("bounds must be positive")


@dataclass
class RewriteResult:
    status: Rewrite
    rules: list = field(default_factory=list)
    raw_rules: list = field(default_factory=list)
    certificate: Verdict | None = None
    report: dict = field(default_factory=dict)


def _filter_body(rules, schema, body, heads, cfg):
    """Split the candidate heads for one body into entailed and unresolved."""
    probe = Dexr(body, (heads[0][0],)) if heads else None
    if probe is None:
        return [], []
    frozen = freeze_body(probe, schema)
    outcome = chase(frozen.structure, rules, cfg.budget)
    entailed, unknown = [], []
    if outcome.complete:
        leaves = outcome.saturated
        full = (1 << len(leaves)) - 1
        masks = {}
        for head in heads:
            mask = 0
            for d in head:
                if d not in masks:
                    inst = freeze_body(Dexr(body, (d,)), schema).head[0]
                    masks[d] = sum(1 << i for i, s in enumerate(leaves) if instance_holds(s, inst))
                mask |= masks[d]
            if mask == full:
                entailed.append(Dexr(body, head))
        return entailed, unknown
    for head in heads:
        rule = Dexr(body, head)
        v = entails(rules, rule, schema, cfg.budget, cfg.countermodel_bound)
        if v.status is Entailment.ENTAILED:
            entailed.append(rule)
        elif v.status is Entailment.UNKNOWN:
            unknown.append(rule)
    return entailed, unknown


def _is_tautology(rule: Dexr, schema) -> bool:
    frozen = freeze_body(rule, schema)
    return frozen.head_holds(frozen.structure)


def reduce_candidates(rules: list, schema) -> list:
    """Drop tautologies and rules whose head strictly contains the head of
    another kept rule with the same body; the result is equivalent."""
    kept = []
    by_body = {}
    for r in rules:
        if _is_tautology(r, schema):
            continue
        keys = frozenset(d.key() for d in r.disjuncts)
        earlier = by_body.setdefault(r.body, [])
        if any(k < keys for k in earlier):
            continue
        earlier.append(keys)
        kept.append(r)
    # heads are enumerated smallest first, so a later rule never subsumes an earlier one
    return kept


def minimize_rules(candidates: list, target: list, schema, cfg) -> list:
    """Greedily drop rules while the remainder still entails ``target``."""
    current = list(candidates)
    for r in reversed(list(candidates)):
        rest = [x for x in current if x is not r]
        if entails_set(rest, target, schema, cfg.budget, cfg.countermodel_bound).entailed:
            current = rest
    return current


def rewrite_guarded_to_linear(rules, schema: Schema | None = None,
                              cfg: RewriteConfig | None = None) -> RewriteResult:
    cfg = cfg or RewriteConfig()
    rules = list(rules)
    for r in rules:
        if not r.is_guarded():
            raise NotGuarded(f"rule {r} is not guarded")
    if schema is None:
        schema = Schema.infer(rules)
    profile = cfg.profile or profile_of_set(rules) or RuleProfile(1, 0, 1)
    n, m = profile.n, profile.m
    lp = cfg.lp or linearization_bound(schema, n, m, profile.l, cfg.alg1_bound)
    report = {"profile": list(profile.as_tuple()), "lp": lp, "p": cfg.p,
              "bound": str(candidate_count_bound(schema, n, m, lp, cfg.p))}

    bodies = []
    total = 0
    for body in linear_bodies(schema, n):
        disjuncts = head_disjuncts(schema, body, m, cfg.p)
        total += sum(comb(len(disjuncts), i) for i in range(1, min(lp, len(disjuncts)) + 1))
        bodies.append((body, disjuncts))
    report["candidates"] = total
    if total > cfg.candidate_cap:
        report.update(entailed=0, unknown=0, status=Rewrite.UNKNOWN.value, cap_hit=True)
        return RewriteResult(Rewrite.UNKNOWN, report=report)

    raw, unknown = [], []
    for body, disjuncts in bodies:
        heads = [h for size in range(1, lp + 1) for h in itertools.combinations(disjuncts, size)]
        ok, unk = _filter_body(rules, schema, body, heads, cfg)
        raw.extend(ok)
        unknown.extend(unk)
    report.update(entailed=len(raw), unknown=len(unknown), cap_hit=False)
    if not raw:
        report["status"] = Rewrite.FAIL.value
        return RewriteResult(Rewrite.FAIL, report=report)

    reduced = reduce_candidates(raw, schema)
    report["reduced"] = len(reduced)
    back = entails_set(reduced, rules, schema, cfg.budget, cfg.countermodel_bound)
    if back.status is Entailment.ENTAILED:
        out = minimize_rules(reduced, rules, schema, cfg) if cfg.minimize else raw
        report.update(status=Rewrite.REWRITTEN.value, output=len(out))
        return RewriteResult(Rewrite.REWRITTEN, out, raw, back, report)
    if back.status is Entailment.NOT_ENTAILED and not unknown:
        cm = back.countermodel
        assert is_model(cm, reduced) and not satisfies(cm, back.rule)
        report["status"] = Rewrite.FAIL.value
        return RewriteResult(Rewrite.FAIL, [], raw, back, report)
    report["status"] = Rewrite.UNKNOWN.value
    return RewriteResult(Rewrite.UNKNOWN, [], raw, back, report)


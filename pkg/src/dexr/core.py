"""Schemas, finite structures, disjunctive existential rules and disjunctive
dependencies, plus the purely structural operations on them.

Constants are plain strings and variables are :class:`Var` instances, so an
:class:`Atom` whose arguments are all strings is a fact.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import DomainNotSubset, InvalidProfile, RuleError, SchemaError, SchemaMismatch


def natural_key(text: str):
    parts = re.split(r"(\d+)", text)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return self.name


Term = Union[Var, str]


def term_key(term):
    if isinstance(term, Var):
        return (1, natural_key(term.name))
    return (0, natural_key(term))


def const_key(const: str):
    return natural_key(const)


def _dedup(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return tuple(out)


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @property
    def variables(self) -> tuple:
        return _dedup(a for a in self.args if isinstance(a, Var))

    @property
    def constants(self) -> tuple:
        return _dedup(a for a in self.args if not isinstance(a, Var))

    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def substitute(self, mapping) -> "Atom":
        return Atom(self.relation, tuple(mapping.get(a, a) for a in self.args))

    def sort_key(self):
        return (self.relation, tuple(term_key(a) for a in self.args))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"{self.relation}({','.join(map(str, self.args))})"


@dataclass(frozen=True, eq=False)
class Schema:
    """An ordered collection of relation symbols with positive arities.

    Two schemas are equal when they declare the same symbols with the same
    arities; declaration order only affects printing and enumeration order.
    """

    relations: tuple

    def __post_init__(self):
        rels = tuple((str(name), int(arity)) for name, arity in self.relations)
        names = [name for name, _ in rels]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate relation names in {names}")
        for name, arity in rels:
            if arity < 1:
                raise SchemaError(f"relation {name} must have positive arity, got {arity}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "_arity", dict(rels))

    @classmethod
    def of(cls, *specs) -> "Schema":
        """``Schema.of("R/2", "S/1")`` or ``Schema.of(("R", 2), ("S", 1))``."""
        rels = []
        for spec in specs:
            if isinstance(spec, str):
                name, arity = spec.split("/")
                rels.append((name.strip(), int(arity)))
            else:
                rels.append(tuple(spec))
        return cls(tuple(rels))

    @classmethod
    def infer(cls, items: Iterable) -> "Schema":
        """Collect every relation symbol used by atoms, rules or structures."""
        found = {}
        for atom in _atoms_of(items):
            if found.setdefault(atom.relation, len(atom.args)) != len(atom.args):
                raise SchemaError(f"relation {atom.relation} used with different arities")
        return cls(tuple(found.items()))

    @property
    def names(self) -> tuple:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise SchemaError(f"unknown relation {name}") from None

    @property
    def max_arity(self) -> int:
        return max((a for _, a in self.relations), default=0)

    def position(self, name: str) -> int:
        return self.names.index(name)

    def check_atom(self, atom: Atom) -> None:
        if self.arity(atom.relation) != len(atom.args):
            raise SchemaError(
                f"{atom.relation} has arity {self.arity(atom.relation)}, used with {len(atom.args)}")

    def union(self, other: "Schema") -> "Schema":
        merged = dict(self.relations)
        for name, arity in other.relations:
            if merged.setdefault(name, arity) != arity:
                raise SchemaMismatch(f"relation {name} has conflicting arities")
        return Schema(tuple(merged.items()))

    def __contains__(self, name):
        return name in self._arity

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def __eq__(self, other):
        return isinstance(other, Schema) and self._arity == other._arity

    def __hash__(self):
        return hash(frozenset(self._arity.items()))

    def __repr__(self):
        return "Schema(" + " ".join(f"{n}/{a}" for n, a in self.relations) + ")"


class Structure:
    """A finite relational structure: a domain of constants plus a fact set.

    The domain defaults to the active domain; a wider domain may be given
    explicitly, in which case the extra elements occur in no fact.
    """

    __slots__ = ("schema", "domain", "_relations", "_facts")

    def __init__(self, schema: Schema, facts: Iterable[Atom] = (), domain=None):
        rels = {name: set() for name in schema.names}
        fact_set = set()
        for fact in facts:
            if fact.relation not in schema:
                raise SchemaError(f"unknown relation {fact.relation}")
            schema.check_atom(fact)
            if not fact.is_ground():
                raise SchemaError(f"fact {fact} mentions a variable")
            rels[fact.relation].add(fact.args)
            fact_set.add(fact)
        adom = {c for f in fact_set for c in f.args}
        if domain is None:
            dom = frozenset(adom)
        else:
            dom = frozenset(domain)
            if not adom <= dom:
                raise DomainNotSubset(f"constants {sorted(adom - dom)} missing from domain")
        self.schema = schema
        self.domain = dom
        self._relations = {name: frozenset(ts) for name, ts in rels.items()}
        self._facts = frozenset(fact_set)

    @property
    def facts(self) -> frozenset:
        return self._facts

    def relation(self, name: str) -> frozenset:
        return self._relations[name]

    def tuples(self, name: str) -> list:
        return sorted(self._relations[name], key=lambda t: tuple(map(const_key, t)))

    def sorted_facts(self) -> list:
        return [Atom(name, t) for name in self.schema.names for t in self.tuples(name)]

    def active_domain(self) -> frozenset:
        return frozenset(c for f in self._facts for c in f.args)

    def sorted_domain(self) -> list:
        return sorted(self.domain, key=const_key)

    def extend(self, facts: Iterable[Atom] = (), domain: Iterable[str] = ()) -> "Structure":
        return Structure(self.schema, self._facts | set(facts), self.domain | set(domain))

    def __contains__(self, fact):
        return fact in self._facts

    def __len__(self):
        return len(self._facts)

    def __eq__(self, other):
        return (isinstance(other, Structure) and self.schema == other.schema
                and self.domain == other.domain and self._facts == other._facts)

    def __hash__(self):
        return hash((self.domain, self._facts))

    def __repr__(self):
        facts = ", ".join(map(str, self.sorted_facts()))
        extra = self.domain - self.active_domain()
        if extra:
            return f"Structure({{{facts}}}, domain+={sorted(extra, key=const_key)})"
        return f"Structure({{{facts}}})"


@dataclass(frozen=True)
class Disjunct:
    """One head disjunct: existential variables plus a non-empty conjunction."""

    existentials: frozenset
    atoms: tuple

    def __post_init__(self):
        atoms = _dedup(tuple(self.atoms))
        used = {v for a in atoms for v in a.variables}
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "existentials", frozenset(v for v in self.existentials if v in used))

    @property
    def variables(self) -> tuple:
        return _dedup(v for a in self.atoms for v in a.variables)

    @property
    def frontier(self) -> tuple:
        return tuple(v for v in self.variables if v not in self.existentials)

    def rename(self, mapping) -> "Disjunct":
        return Disjunct(frozenset(mapping.get(v, v) for v in self.existentials),
                        tuple(a.substitute(mapping) for a in self.atoms))

    def key(self):
        return _disjunct_key(self)

    def __repr__(self):
        body = ", ".join(map(str, self.atoms))
        if self.existentials:
            ex = " ".join(map(str, sorted(self.existentials, key=term_key)))
            return f"exists {ex}. {body}"
        return body


@dataclass(frozen=True)
class Equality:
    left: object
    right: object

    def rename(self, mapping) -> "Equality":
        return Equality(mapping.get(self.left, self.left), mapping.get(self.right, self.right))

    def key(self):
        return ("=", tuple(sorted((term_key(self.left), term_key(self.right)))))

    def __repr__(self):
        return f"{self.left} = {self.right}"


def _disjunct_key(d: Disjunct):
    ex = sorted(d.existentials, key=term_key)
    best = None
    for perm in itertools.permutations(range(len(ex))):
        ren = {v: Var(f"?e{perm[i]}") for i, v in enumerate(ex)}
        key = tuple(sorted(a.substitute(ren).sort_key() for a in d.atoms))
        if best is None or key < best:
            best = key
    return ("E", best)


def _body_variables(body) -> tuple:
    return _dedup(v for a in body for v in a.variables)


def _check_constant_free(atoms, what):
    for a in atoms:
        if not all(isinstance(t, Var) for t in a.args):
            raise RuleError(f"{what} must be constant-free, found {a}")


def _check_existential(d: Disjunct, bvars: set):
    if not d.atoms:
        raise RuleError("a head disjunct must contain at least one atom")
    _check_constant_free(d.atoms, "rule heads")
    if d.existentials & bvars:
        raise RuleError(f"existential variables {sorted(map(str, d.existentials & bvars))} occur in the body")
    loose = [v for v in d.frontier if v not in bvars]
    if loose:
        raise RuleError(f"head variables {[str(v) for v in loose]} are neither body nor existential variables")


def _dedup_disjuncts(disjuncts) -> tuple:
    seen = set()
    out = []
    for d in disjuncts:
        k = d.key()
        if k not in seen:
            seen.add(k)
            out.append(d)
    return tuple(out)


@dataclass(frozen=True)
class Dexr:
    """``body -> d1 | ... | dk`` with ``k >= 1``; an empty body means ``true``.

    Head disjuncts that coincide up to renaming of their existential variables
    are collapsed at construction time.
    """

    body: tuple
    disjuncts: tuple

    def __post_init__(self):
        body = _dedup(tuple(self.body))
        disjuncts = _dedup_disjuncts(tuple(self.disjuncts))
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "disjuncts", disjuncts)
        if not disjuncts:
            raise RuleError("a dexr needs at least one head disjunct")
        _check_constant_free(body, "rule bodies")
        bvars = set(_body_variables(body))
        for d in disjuncts:
            if not isinstance(d, Disjunct):
                raise RuleError(f"dexr disjuncts must be existential conjunctions, got {d!r}")
            _check_existential(d, bvars)

    @property
    def body_variables(self) -> tuple:
        return _body_variables(self.body)

    @property
    def frontier(self) -> tuple:
        head = {v for d in self.disjuncts for v in d.frontier}
        return tuple(v for v in self.body_variables if v in head)

    @property
    def relations(self) -> set:
        return {a.relation for a in _atoms_of([self])}

    def is_linear(self) -> bool:
        return len(self.body) <= 1

    def is_guarded(self) -> bool:
        if not self.body:
            return True
        bvars = set(self.body_variables)
        return any(set(a.variables) == bvars for a in self.body)

    def __repr__(self):
        return f"Dexr({_rule_text(self)})"


@dataclass(frozen=True)
class DisjunctiveDependency:
    """``body -> d1 | ... | dk`` with ``k >= 0`` where each ``di`` is an
    :class:`Equality` between body variables or an existential :class:`Disjunct`.

    ``k = 0`` reads as ``false``: with an empty body the dependency is a
    contradiction, otherwise it forbids any match of the body.
    """

    body: tuple
    disjuncts: tuple = ()

    def __post_init__(self):
        body = _dedup(tuple(self.body))
        disjuncts = _dedup_disjuncts(tuple(self.disjuncts))
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "disjuncts", disjuncts)
        _check_constant_free(body, "dependency bodies")
        bvars = set(_body_variables(body))
        for d in disjuncts:
            if isinstance(d, Equality):
                if not (isinstance(d.left, Var) and isinstance(d.right, Var)):
                    raise RuleError(f"equality {d} must relate variables")
                if d.left not in bvars or d.right not in bvars:
                    raise RuleError(f"equality {d} mentions variables outside the body")
            elif isinstance(d, Disjunct):
                _check_existential(d, bvars)
            else:
                raise RuleError(f"unsupported disjunct {d!r}")

    @property
    def body_variables(self) -> tuple:
        return _body_variables(self.body)

    @property
    def equalities(self) -> tuple:
        return tuple(d for d in self.disjuncts if isinstance(d, Equality))

    @property
    def existential_disjuncts(self) -> tuple:
        return tuple(d for d in self.disjuncts if isinstance(d, Disjunct))

    def is_deqr(self) -> bool:
        return bool(self.disjuncts) and all(isinstance(d, Equality) for d in self.disjuncts)

    def is_falsity(self) -> bool:
        return not self.body and not self.disjuncts

    def as_dexr(self) -> Dexr | None:
        """The same sentence as a dexr, when it has no equality and ``k > 0``."""
        if self.disjuncts and not self.equalities:
            return Dexr(self.body, self.disjuncts)
        return None

    def __repr__(self):
        return f"DD({_rule_text(self)})"


def embed(rule: Dexr) -> DisjunctiveDependency:
    """View a dexr as a disjunctive dependency without equality disjuncts."""
    return DisjunctiveDependency(rule.body, rule.disjuncts)


@dataclass(frozen=True)
class RuleProfile:
    n: int
    m: int
    l: int

    def __post_init__(self):
        if min(self.n, self.m, self.l) < 0:
            raise InvalidProfile(f"profile entries must be non-negative: {self}")

    def require_dexr_bounds(self) -> "RuleProfile":
        if self.n + self.m <= 0 or self.l <= 0:
            raise InvalidProfile(f"dexr profiles need n+m > 0 and l > 0, got {self.as_tuple()}")
        return self

    def within(self, other: "RuleProfile") -> bool:
        return self.n <= other.n and self.m <= other.m and self.l <= other.l

    def join(self, other: "RuleProfile") -> "RuleProfile":
        return RuleProfile(max(self.n, other.n), max(self.m, other.m), max(self.l, other.l))

    def as_tuple(self) -> tuple:
        return (self.n, self.m, self.l)


def profile_of(rule) -> RuleProfile:
    """Smallest ``(n, m, l)`` bounding the rule; for dependencies ``l`` counts
    only the non-equality disjuncts."""
    n = len(rule.body_variables)
    existential = [d for d in rule.disjuncts if isinstance(d, Disjunct)]
    m = max((len(d.existentials) for d in existential), default=0)
    return RuleProfile(n, m, len(existential))


def profile_of_set(rules) -> RuleProfile | None:
    profile = None
    for r in rules:
        p = profile_of(r)
        profile = p if profile is None else profile.join(p)
    return profile


# ---------------------------------------------------------------- structures


def active_domain(s: Structure) -> frozenset:
    return s.active_domain()


def induced_substructure(s: Structure, constants: Iterable[str]) -> Structure:
    dom = frozenset(constants)
    if not dom <= s.domain:
        raise DomainNotSubset(f"{sorted(dom - s.domain, key=const_key)} not in the domain")
    facts = [f for f in s.facts if all(c in dom for c in f.args)]
    return Structure(s.schema, facts, dom)


def _same_schema(a: Structure, b: Structure):
    if a.schema != b.schema:
        raise SchemaMismatch(f"{a.schema} vs {b.schema}")


def is_subset(j: Structure, i: Structure) -> bool:
    """``J ⊆ I``: every fact of J is a fact of I (domains are ignored)."""
    _same_schema(j, i)
    return j.facts <= i.facts


def is_induced_substructure(j: Structure, i: Structure) -> bool:
    """``J ⪯ I``: dom(J) ⊆ dom(I) and J holds exactly I's facts over dom(J)."""
    _same_schema(j, i)
    return j.domain <= i.domain and j == induced_substructure(i, j.domain)


def critical_structure(schema: Schema, kappa: int, prefix: str = "c") -> Structure:
    if kappa < 1:
        raise ValueError("kappa must be positive")
    dom = [f"{prefix}{i}" for i in range(1, kappa + 1)]
    facts = [Atom(name, args) for name, arity in schema
             for args in itertools.product(dom, repeat=arity)]
    return Structure(schema, facts, dom)


def is_guarded_structure(s: Structure) -> bool:
    if not s.facts:
        return True
    adom = s.active_domain()
    return any(set(f.args) == adom for f in s.facts)


# ------------------------------------------------------------ canonical forms


def canonicalize(rule):
    """Rename body variables to X1, X2, ... in order of first occurrence and the
    existential variables of each disjunct to Z1, Z2, ..."""
    ren = {v: Var(f"X{i}") for i, v in enumerate(rule.body_variables, 1)}
    disjuncts = []
    for d in rule.disjuncts:
        if isinstance(d, Equality):
            disjuncts.append(d.rename(ren))
            continue
        local = dict(ren)
        exs = [v for v in d.variables if v in d.existentials]
        local.update({v: Var(f"Z{i}") for i, v in enumerate(exs, 1)})
        disjuncts.append(d.rename(local))
    body = tuple(a.substitute(ren) for a in rule.body)
    return type(rule)(body, tuple(disjuncts))


def rule_key(rule):
    """A key equal for two rules iff they coincide up to variable renaming and
    the order of body atoms and head disjuncts."""
    bvars = rule.body_variables
    best = None
    for perm in itertools.permutations(range(len(bvars))):
        ren = {v: Var(f"?u{perm[i]}") for i, v in enumerate(bvars)}
        body = tuple(sorted(a.substitute(ren).sort_key() for a in rule.body))
        head = tuple(sorted(d.rename(ren).key() for d in rule.disjuncts))
        key = (type(rule).__name__, body, head)
        if best is None or key < best:
            best = key
    return best


def _atoms_of(items):
    for item in items:
        if isinstance(item, Atom):
            yield item
        elif isinstance(item, Structure):
            yield from item.facts
        elif isinstance(item, (Dexr, DisjunctiveDependency)):
            yield from item.body
            for d in item.disjuncts:
                if isinstance(d, Disjunct):
                    yield from d.atoms
        else:
            yield from _atoms_of(item)


def _rule_text(rule) -> str:
    body = ", ".join(map(str, rule.body)) or "true"
    head = " | ".join(map(repr, rule.disjuncts)) or "false"
    return f"{body} -> {head}"

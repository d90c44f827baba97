"""Relative diagrams of a small substructure K of I, their conversion into
disjunctive dependencies, and compatibility checks of a rule set against I.

Constants of a diagram name themselves: a structure J satisfies a diagram when
K's facts are facts of J and no negated conjunction has a match in J that keeps
the constants fixed.  Distinct names are distinct elements, so the inequality
part always holds.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .chase import ChaseBudget, chase
from .core import (Atom, Disjunct, DisjunctiveDependency, Equality, RuleProfile, Structure,
                   Var, const_key, induced_substructure, is_guarded_structure, term_key)
from .errors import DomainNotSubset, GNotNegative, NotSubset, SchemaMismatch
from .homs import find_homomorphism
from .satisfaction import is_model

ATOM_LIMIT = 24


@dataclass(frozen=True)
class NegConjunction:
    """A conjunction over K's constants and variables Y1..Ym, kept in canonical
    form: equal objects iff equal atom sets up to renaming the variables."""

    atoms: tuple

    @classmethod
    def of(cls, atoms) -> "NegConjunction":
        atoms = tuple(set(atoms))
        if not atoms:
            raise ValueError("a negated conjunction needs at least one atom")
        variables = sorted({v for a in atoms for v in a.variables}, key=term_key)
        best = None
        for perm in itertools.permutations(range(len(variables))):
            ren = {v: Var(f"?y{perm[i]}") for i, v in enumerate(variables)}
            key = tuple(sorted(a.substitute(ren) for a in atoms))
            if best is None or [a.sort_key() for a in key] < [a.sort_key() for a in best]:
                best = key
        order = []
        for a in best:
            for v in a.variables:
                if v not in order:
                    order.append(v)
        final = {v: Var(f"Y{i}") for i, v in enumerate(order, 1)}
        return cls(tuple(a.substitute(final) for a in best))

    @property
    def variables(self) -> tuple:
        out = []
        for a in self.atoms:
            for v in a.variables:
                if v not in out:
                    out.append(v)
        return tuple(out)

    @property
    def constants(self) -> set:
        return {c for a in self.atoms for c in a.constants}

    def holds_in(self, structure: Structure) -> bool:
        """``structure ⊨ ∃ȳ γ(ȳ)`` with the constants fixed to themselves."""
        if not self.constants <= structure.domain:
            return False
        return find_homomorphism(self.atoms, structure) is not None

    def sort_key(self):
        return (len(self.atoms), [a.sort_key() for a in self.atoms])

    def to_text(self) -> str:
        from .syntax import format_atom
        body = " & ".join(format_atom(a) for a in self.atoms)
        if self.variables:
            return f"exists {' '.join(v.name for v in self.variables)}.({body})"
        return f"({body})"

    def __repr__(self):
        return self.to_text()


def _check_sub(k: Structure, i: Structure):
    if k.schema != i.schema:
        raise SchemaMismatch(f"{k.schema} vs {i.schema}")
    if not k.facts <= i.facts or not k.domain <= i.domain:
        raise NotSubset("K is not contained in I")
    if k.domain != k.active_domain():
        raise DomainNotSubset("K must have dom(K) = adom(K)")


def atom_candidates(k: Structure, m: int) -> list:
    """``A_{K,m}``: every atom over K's constants and the variables Y1..Ym."""
    terms = k.sorted_domain() + [Var(f"Y{i}") for i in range(1, m + 1)]
    return [Atom(name, args) for name, arity in k.schema
            for args in itertools.product(terms, repeat=arity)]


def conjunctions(k: Structure, m: int, limit: int = ATOM_LIMIT) -> list:
    """``C_{K,m}`` as canonical representatives, smallest first."""
    atoms = atom_candidates(k, m)
    if len(atoms) > limit:
        raise ValueError(f"A_(K,m) has {len(atoms)} atoms; full enumeration is capped at {limit}")
    seen = set()
    for size in range(1, len(atoms) + 1):
        for combo in itertools.combinations(atoms, size):
            seen.add(NegConjunction.of(combo))
    return sorted(seen, key=NegConjunction.sort_key)


def neg_candidates(k: Structure, i: Structure, m: int, limit: int = ATOM_LIMIT) -> list:
    """``N^I_{K,m}``: the conjunctions of ``C_{K,m}`` whose closure fails in I."""
    _check_sub(k, i)
    return [g for g in conjunctions(k, m, limit) if not g.holds_in(i)]


def minimal_neg_candidates(k: Structure, i: Structure, m: int) -> list:
    """The ⊆-minimal members of ``N^I_{K,m}``, found level by level.

    Any diagram built from other members is implied by one built from these,
    so they are all a compatibility check needs.
    """
    _check_sub(k, i)
    atoms = atom_candidates(k, m)
    if not atoms or NegConjunction.of(atoms).holds_in(i):
        return []  # every conjunction is satisfiable in I
    minimal = set()
    level = set()
    for a in atoms:
        g = frozenset([a])
        if NegConjunction.of(g).holds_in(i):
            level.add(g)
        else:
            minimal.add(NegConjunction.of(g))
    size = 1
    while level:
        size += 1
        nxt = set()
        ordered = sorted(level, key=lambda s: sorted(x.sort_key() for x in s))
        for base in ordered:
            for a in atoms:
                if a in base:
                    continue
                cand = base | {a}
                if cand in nxt or any(cand - {b} not in level for b in cand):
                    continue
                g = NegConjunction.of(cand)
                if g.holds_in(i):
                    nxt.add(cand)
                else:
                    minimal.add(g)
        level = nxt
    # a canonical class may have been met through a non-minimal representative
    out = []
    for g in sorted(minimal, key=NegConjunction.sort_key):
        if not any(h != g and _embeds(h, g) for h in minimal):
            out.append(g)
    return out


def _embeds(small: NegConjunction, big: NegConjunction) -> bool:
    """Some renaming of ``small``'s variables sends its atoms into ``big``'s."""
    big_vars = list(big.variables)
    small_vars = list(small.variables)
    for image in itertools.permutations(big_vars + [None] * len(small_vars), len(small_vars)):
        if None in image:
            continue
        ren = dict(zip(small_vars, image))
        if {a.substitute(ren) for a in small.atoms} <= set(big.atoms):
            return True
    return False


@dataclass(frozen=True)
class Diagram:
    """``Δ^I_{K,G}``: K's facts, pairwise inequalities of its constants and the
    negated closures of the conjunctions in G."""

    schema: object
    facts: tuple
    constants: tuple
    negated: tuple

    @property
    def inequalities(self) -> list:
        return list(itertools.combinations(self.constants, 2))

    def is_tautology(self) -> bool:
        return not self.facts and not self.constants and not self.negated

    @property
    def width(self) -> int:
        return max((len(g.variables) for g in self.negated), default=0)

    def holds_in(self, structure: Structure) -> bool:
        return satisfies_diagram(structure, self)

    def to_text(self) -> str:
        from .syntax import format_atom, format_constant
        parts = [format_atom(f) for f in self.facts]
        parts += [f"{format_constant(c)} != {format_constant(d)}" for c, d in self.inequalities]
        parts += ["!" + g.to_text() for g in self.negated]
        return " & ".join(parts) or "true"

    def __repr__(self):
        return f"Diagram({self.to_text()})"


def build_diagram(k: Structure, i: Structure, g) -> Diagram:
    if k.schema != i.schema:
        raise SchemaMismatch(f"{k.schema} vs {i.schema}")
    g = sorted({x if isinstance(x, NegConjunction) else NegConjunction.of(x) for x in g},
               key=NegConjunction.sort_key)
    for gamma in g:
        if not gamma.constants <= k.domain:
            raise GNotNegative(f"{gamma} mentions constants outside K")
        if gamma.holds_in(i):
            raise GNotNegative(f"{gamma} is satisfied in I")
    return Diagram(k.schema, tuple(k.sorted_facts()), tuple(k.sorted_domain()), tuple(g))


def satisfies_diagram(j: Structure, d: Diagram) -> bool:
    if j.schema != d.schema:
        raise SchemaMismatch(f"{j.schema} vs {d.schema}")
    if not all(f in j for f in d.facts):
        return False
    return not any(g.holds_in(j) for g in d.negated)


# ------------------------------------------------------------ variablization


@dataclass(frozen=True)
class Variablized:
    """``∃x̄ Φ(x̄)``: the diagram with each constant replaced by its own variable.

    :meth:`holds_in` evaluates the formula by plain enumeration of assignments,
    independently of the homomorphism search used elsewhere.
    """

    variables: tuple
    positive: tuple
    inequalities: tuple
    negated: tuple  # ((y-variables, atoms), ...)

    def is_tautology(self) -> bool:
        return not self.positive and not self.inequalities and not self.negated

    def holds_in(self, structure: Structure) -> bool:
        dom = structure.sorted_domain()
        facts = structure.facts
        for image in itertools.product(dom, repeat=len(self.variables)):
            h = dict(zip(self.variables, image))
            if any(h[x] == h[y] for x, y in self.inequalities):
                continue
            if not all(a.substitute(h) in facts for a in self.positive):
                continue
            if any(_closure_holds(ys, atoms, h, dom, facts) for ys, atoms in self.negated):
                continue
            return True
        return False

    def to_text(self) -> str:
        parts = [str(a) for a in self.positive]
        parts += [f"{x} != {y}" for x, y in self.inequalities]
        for ys, atoms in self.negated:
            inner = " & ".join(map(str, atoms))
            parts.append(f"!exists {' '.join(map(str, ys))}.({inner})" if ys else f"!({inner})")
        body = " & ".join(parts) or "true"
        if self.variables:
            return f"exists {' '.join(map(str, self.variables))}.({body})"
        return body


def _closure_holds(ys, atoms, h, dom, facts) -> bool:
    for image in itertools.product(dom, repeat=len(ys)):
        ext = dict(h)
        ext.update(zip(ys, image))
        if all(a.substitute(ext) in facts for a in atoms):
            return True
    return False


def _renaming(d: Diagram) -> dict:
    return {c: Var(f"X{i}") for i, c in enumerate(d.constants, 1)}


def variablize(d: Diagram) -> Variablized:
    rho = _renaming(d)
    neg = []
    for g in d.negated:
        ren = dict(rho)
        ys = tuple(Var(f"Z{i}") for i in range(1, len(g.variables) + 1))
        ren.update(zip(g.variables, ys))
        neg.append((ys, tuple(a.substitute(ren) for a in g.atoms)))
    return Variablized(tuple(rho.values()),
                       tuple(f.substitute(rho) for f in d.facts),
                       tuple((rho[c], rho[e]) for c, e in d.inequalities),
                       tuple(neg))


def diagram_to_dd(d: Diagram) -> DisjunctiveDependency:
    """The dependency equivalent to ``¬∃x̄ Φ(x̄)``."""
    v = variablize(d)
    if not v.positive and not v.inequalities and not v.negated:
        return DisjunctiveDependency((), ())
    if not v.inequalities and not v.negated:
        return DisjunctiveDependency(v.positive, ())
    head = [Equality(x, y) for x, y in v.inequalities]
    head += [Disjunct(frozenset(ys), atoms) for ys, atoms in v.negated]
    return DisjunctiveDependency(v.positive, tuple(head))


def dd_in_class(dd: DisjunctiveDependency, profile: RuleProfile) -> bool:
    """Membership in the class of dependencies bounded by ``(n, m, l)``."""
    bvars = set(dd.body_variables)
    for e in dd.disjuncts:
        if isinstance(e, Equality):
            if e.left not in bvars or e.right not in bvars:
                return False
        elif not set(e.frontier) <= bvars:
            return False
    n = len(bvars)
    m = max((len(e.existentials) for e in dd.existential_disjuncts), default=0)
    return n <= profile.n and m <= profile.m and len(dd.existential_disjuncts) <= profile.l


# ------------------------------------------------------------- compatibility


class Compat(str, enum.Enum):
    COMPATIBLE = "CompatibleWithI"
    NOT_COMPATIBLE = "NotCompatibleWithI"
    UNKNOWN = "Unknown"


@dataclass
class CompatVerdict:
    status: Compat
    witness: Diagram | None = None           # the unsatisfiable diagram
    witnesses: list = field(default_factory=list)  # (diagram, model) pairs
    unresolved: list = field(default_factory=list)
    diagrams_checked: int = 0

    def verify(self, rules) -> bool:
        """Re-check every positive witness against the rules and its diagram."""
        return all(is_model(j, rules) and satisfies_diagram(j, d) for d, j in self.witnesses)


def candidate_substructures(i: Structure, n: int, variant: str = "plain") -> list:
    """The K's to inspect: induced (plain), single-fact (linear) or guarded
    induced substructures with dom(K) = adom(K) and at most ``n`` elements."""
    if variant == "linear":
        out = [Structure(i.schema)]
        for f in i.sorted_facts():
            if len(set(f.args)) <= n:
                out.append(Structure(i.schema, [f]))
        return out
    if variant not in ("plain", "guarded"):
        raise ValueError(f"unknown variant {variant!r}")
    adom = sorted(i.active_domain(), key=const_key)
    out = []
    for size in range(0, min(n, len(adom)) + 1):
        for consts in itertools.combinations(adom, size):
            k = induced_substructure(i, consts)
            if k.active_domain() != k.domain:
                continue
            if variant == "guarded" and not is_guarded_structure(k):
                continue
            out.append(k)
    return out


def g_subsets(candidates, l: int):
    for size in range(0, min(l, len(candidates)) + 1):
        yield from itertools.combinations(candidates, size)


def diagram_model(d: Diagram, rules, budget: ChaseBudget):
    """Search a model of the rules that satisfies ``d``.

    Returns ``(structure, complete)``: the first saturated chase result of K's
    facts in which no negated conjunction holds, or ``None``; ``complete`` is
    False when some branch was cut by the budget before it could be ruled out.
    """
    start = Structure(d.schema, d.facts, d.constants)
    outcome = chase(start, rules, budget, stop=lambda s: any(g.holds_in(s) for g in d.negated))
    if outcome.saturated:
        return outcome.saturated[0], True
    return None, outcome.complete


def check_compat_with(i: Structure, rules, profile: RuleProfile, variant: str = "plain",
                      budget: ChaseBudget | None = None, exhaustive: bool = False) -> CompatVerdict:
    budget = budget or ChaseBudget()
    rules = list(rules)
    verdict = CompatVerdict(Compat.COMPATIBLE)
    for k in candidate_substructures(i, profile.n, variant):
        negs = neg_candidates(k, i, profile.m) if exhaustive else minimal_neg_candidates(k, i, profile.m)
        for g in g_subsets(negs, profile.l):
            d = build_diagram(k, i, g)
            verdict.diagrams_checked += 1
            model, complete = diagram_model(d, rules, budget)
            if model is not None:
                verdict.witnesses.append((d, model))
            elif complete:
                verdict.status = Compat.NOT_COMPATIBLE
                verdict.witness = d
                return verdict
            else:
                verdict.unresolved.append(d)
    if verdict.unresolved:
        verdict.status = Compat.UNKNOWN
    return verdict

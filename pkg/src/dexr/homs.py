"""Homomorphism and isomorphism search.

A source is either a :class:`Structure` (every domain element may be moved)
or a collection of atoms (variables may be moved, constants stay fixed unless
``fixed`` says otherwise).  The search is plain backtracking with
most-constrained-first variable choice and forward checking per atom.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Mapping

from .core import Atom, Structure, Var, const_key
from .errors import SchemaMismatch


def _prepare(source, target: Structure, fixed: Mapping | None):
    fixed = dict(fixed or {})
    if isinstance(source, Structure):
        if source.schema != target.schema:
            raise SchemaMismatch(f"{source.schema} vs {target.schema}")
        atoms = [(f.relation, f.args) for f in source.sorted_facts()]
        keys = source.sorted_domain()
        free = [k for k in keys if k not in fixed]
    else:
        atoms = []
        free = []
        for atom in source:
            if atom.relation not in target.schema or \
                    target.schema.arity(atom.relation) != len(atom.args):
                raise SchemaMismatch(f"atom {atom} does not fit {target.schema}")
            atoms.append((atom.relation, atom.args))
            for t in atom.args:
                if isinstance(t, Var):
                    if t not in fixed and t not in free:
                        free.append(t)
                else:
                    fixed.setdefault(t, t)
    return atoms, free, fixed


class _Search:
    def __init__(self, atoms, free, assignment, target: Structure, injective: bool):
        self.atoms = atoms
        self.free = free
        self.order = {k: i for i, k in enumerate(free)}
        self.assignment = assignment
        self.target = target
        self.injective = injective
        self.tuples = {rel: target.tuples(rel) for rel in {r for r, _ in atoms}}
        self.atoms_of = {k: [] for k in free}
        for idx, (_, args) in enumerate(atoms):
            for k in set(args):
                if k in self.atoms_of:
                    self.atoms_of[k].append(idx)

    def _matching(self, idx):
        rel, args = self.atoms[idx]
        a = self.assignment
        for t in self.tuples[rel]:
            seen = {}
            for k, v in zip(args, t):
                if k in a:
                    if a[k] != v:
                        break
                elif seen.setdefault(k, v) != v:
                    break
            else:
                yield t

    def _narrow(self, cand, idxs):
        """Restrict candidate sets through the atoms ``idxs``; None on wipe-out."""
        for idx in idxs:
            _, args = self.atoms[idx]
            open_keys = {k for k in args if k not in self.assignment}
            if not open_keys:
                if next(self._matching(idx), None) is None:
                    return None
                continue
            support = {k: set() for k in open_keys}
            for t in self._matching(idx):
                for k, v in zip(args, t):
                    if k in support:
                        support[k].add(v)
            for k, vals in support.items():
                cand[k] = cand[k] & vals
                if not cand[k]:
                    return None
        return cand

    def run(self) -> Iterator[dict]:
        if self.injective:
            used = list(self.assignment.values())
            if len(set(used)) != len(used):
                return
        cand = {k: set(self.target.domain) for k in self.free}
        if self.injective:
            taken = set(self.assignment.values())
            cand = {k: v - taken for k, v in cand.items()}
        if any(not v for v in cand.values()):
            return
        cand = self._narrow(cand, range(len(self.atoms)))
        if cand is None:
            return
        yield from self._extend(cand)

    def _extend(self, cand) -> Iterator[dict]:
        open_keys = [k for k in self.free if k not in self.assignment]
        if not open_keys:
            yield dict(self.assignment)
            return
        key = min(open_keys, key=lambda k: (len(cand[k]), self.order[k]))
        for value in sorted(cand[key], key=const_key):
            self.assignment[key] = value
            nxt = {k: set(v) for k, v in cand.items() if k not in self.assignment}
            if self.injective:
                for k in nxt:
                    nxt[k].discard(value)
                    if not nxt[k]:
                        nxt = None
                        break
            if nxt is not None:
                nxt = self._narrow(nxt, self.atoms_of[key])
            if nxt is not None:
                yield from self._extend(nxt)
            del self.assignment[key]


def all_homomorphisms(source, target: Structure, fixed: Mapping | None = None,
                      injective: bool = False) -> Iterator[dict]:
    """Every homomorphism from ``source`` into ``target`` extending ``fixed``.

    Assignments are returned as dicts over the moved elements (variables for an
    atom source, domain elements for a structure source) together with the
    entries of ``fixed``; constants of an atom source are not included unless
    they were in ``fixed``.
    """
    given = dict(fixed or {})
    atoms, free, assignment = _prepare(source, target, given)
    search = _Search(atoms, free, dict(assignment), target, injective)
    keep = set(given) | set(free)
    for h in search.run():
        yield {k: v for k, v in h.items() if k in keep}


def find_homomorphism(source, target: Structure, fixed: Mapping | None = None,
                      injective: bool = False) -> dict | None:
    return next(all_homomorphisms(source, target, fixed, injective), None)


def is_homomorphism(h: Mapping, source, target: Structure) -> bool:
    """Check a given map directly, without search."""
    if isinstance(source, Structure):
        if not all(c in h and h[c] in target.domain for c in source.domain):
            return False
        atoms = source.facts
    else:
        atoms = list(source)
    for atom in atoms:
        image = Atom(atom.relation, tuple(h.get(t, t) for t in atom.args))
        if image not in target:
            return False
    return True


def compose(g: Mapping, h: Mapping) -> dict:
    """``g ∘ h``."""
    return {k: g[v] for k, v in h.items()}


def _profile(s: Structure):
    per_element = {c: Counter() for c in s.domain}
    for f in s.facts:
        for pos, c in enumerate(f.args):
            per_element[c][(f.relation, pos)] += 1
    return sorted(tuple(sorted(c.items())) for c in per_element.values())


def are_isomorphic(i: Structure, j: Structure) -> bool:
    if i.schema != j.schema:
        raise SchemaMismatch(f"{i.schema} vs {j.schema}")
    if len(i.domain) != len(j.domain):
        return False
    if any(len(i.relation(r)) != len(j.relation(r)) for r in i.schema.names):
        return False
    if _profile(i) != _profile(j):
        return False
    # an injective homomorphism between equal-size domains and equal-size
    # relations is onto on facts, so its inverse is a homomorphism as well
    return find_homomorphism(i, j, injective=True) is not None


def image_order(assignment: Mapping, variables: Iterable) -> tuple:
    return tuple(const_key(assignment[v]) for v in variables)


def sort_assignments(assignments, variables) -> list:
    variables = list(variables)
    return sorted(assignments, key=lambda h: image_order(h, variables))


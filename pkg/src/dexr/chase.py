"""Restricted disjunctive chase with budgets.

Only active triggers are ever applied.  Every node keeps the triggers that were
already pending at its parent, oldest first, and always applies the oldest one
that is still active; newly active triggers join the back of the queue in the
canonical order (rule index, then match image).  Nodes are expanded breadth
first, so the order of leaves is deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import Dexr, Structure, const_key
from .errors import NotATrigger
from .homs import all_homomorphisms, sort_assignments
from .satisfaction import disjunct_holds

NULL_PREFIX = "_n"


@dataclass(frozen=True)
class Trigger:
    rule_index: int
    rule: Dexr = field(compare=False)
    match: tuple  # ((var, const), ...) in body-variable order; () is the empty match

    @property
    def assignment(self) -> dict:
        return dict(self.match)

    def is_empty(self) -> bool:
        return not self.rule.body

    def __repr__(self):
        if not self.match:
            return f"Trigger(#{self.rule_index}, ε)"
        inner = ", ".join(f"{v}->{c}" for v, c in self.match)
        return f"Trigger(#{self.rule_index}, {inner})"


def make_trigger(rule_index: int, rule: Dexr, assignment: dict) -> Trigger:
    return Trigger(rule_index, rule, tuple((v, assignment[v]) for v in rule.body_variables))


class FreshNames:
    """Issues ``_n1, _n2, ...``; names already used by a structure are skipped."""

    def __init__(self, start: int = 1, prefix: str = NULL_PREFIX):
        self.next = start
        self.prefix = prefix

    def take(self, avoid=()) -> str:
        while True:
            name = f"{self.prefix}{self.next}"
            self.next += 1
            if name not in avoid:
                return name

    def copy(self) -> "FreshNames":
        return FreshNames(self.next, self.prefix)


def is_trigger(structure: Structure, t: Trigger) -> bool:
    h = t.assignment
    if set(h) != set(t.rule.body_variables):
        return False
    return all(a.substitute(h) in structure for a in t.rule.body)


def is_active(structure: Structure, t: Trigger) -> bool:
    h = t.assignment
    return not any(disjunct_holds(structure, d, h) for d in t.rule.disjuncts)


def active_triggers(structure: Structure, rules) -> list:
    out = []
    for idx, rule in enumerate(rules):
        if not rule.body:
            if is_active(structure, Trigger(idx, rule, ())):
                out.append(Trigger(idx, rule, ()))
            continue
        bvars = rule.body_variables
        for h in sort_assignments(all_homomorphisms(rule.body, structure), bvars):
            if not any(disjunct_holds(structure, d, h) for d in rule.disjuncts):
                out.append(make_trigger(idx, rule, h))
    return out


def _child_facts(structure: Structure, t: Trigger, disjunct, fresh: FreshNames):
    h = t.assignment
    ext = dict(h)
    taken = set(structure.domain)
    for v in disjunct.variables:
        if v in disjunct.existentials:
            name = fresh.take(taken)
            taken.add(name)
            ext[v] = name
    return [a.substitute(ext) for a in disjunct.atoms]


def apply_trigger(structure: Structure, t: Trigger, fresh: FreshNames | None = None) -> list:
    """One child structure per head disjunct.

    Every child gets its own pairwise-distinct fresh constants; sibling children
    may reuse the same names since they live on different branches.
    """
    if not is_trigger(structure, t):
        raise NotATrigger(f"{t} does not match the body of its rule in the structure")
    fresh = fresh or FreshNames()
    start = fresh.next
    children = []
    high = start
    for d in t.rule.disjuncts:
        local = FreshNames(start, fresh.prefix)
        facts = _child_facts(structure, t, d, local)
        high = max(high, local.next)
        new_consts = {c for f in facts for c in f.args}
        children.append(structure.extend(facts, new_consts))
    fresh.next = high
    return children


@dataclass(frozen=True)
class ChaseBudget:
    max_depth: int = 20
    max_nodes: int = 2000
    max_domain: int = 64

    def __post_init__(self):
        if min(self.max_depth, self.max_nodes, self.max_domain) < 1:
            raise ValueError("chase budgets must be positive")


@dataclass
class ChaseNode:
    structure: Structure
    depth: int
    trigger: Optional[Trigger] = None
    disjunct: Optional[int] = None
    added: tuple = ()
    children: list = field(default_factory=list)
    status: str = "open"  # open | expanded | saturated | truncated | stopped
    pending: tuple = field(default=(), repr=False)
    fresh: int = field(default=1, repr=False)


@dataclass
class ChaseOutcome:
    saturated: list = field(default_factory=list)
    saturated_depths: list = field(default_factory=list)
    stopped: list = field(default_factory=list)
    stopped_depths: list = field(default_factory=list)
    truncated: int = 0
    truncated_results: list = field(default_factory=list)
    nodes: int = 0
    tree: Optional[ChaseNode] = None

    @property
    def complete(self) -> bool:
        """True when no branch was cut by the budget."""
        return self.truncated == 0

    @property
    def max_depth(self) -> int:
        return max(self.saturated_depths + self.stopped_depths, default=0)


def _schedule(node_pending, structure, rules):
    """Keep the still-active pending triggers in order, then add new ones."""
    current = active_triggers(structure, rules)
    active = set(current)
    kept = [t for t in node_pending if t in active]
    seen = set(kept)
    kept.extend(t for t in current if t not in seen)
    return tuple(kept)


def chase(structure: Structure, rules, budget: ChaseBudget | None = None,
          stop: Callable[[Structure], bool] | None = None, keep_tree: bool = False) -> ChaseOutcome:
    """Breadth-first restricted chase of ``structure`` under ``rules``.

    A branch ends as *stopped* when ``stop`` holds on its structure, as
    *saturated* when no trigger is active, and as *truncated* when the budget
    forbids expanding it further.
    """
    rules = list(rules)
    budget = budget or ChaseBudget()
    out = ChaseOutcome()
    start = 1 + max((int(c[len(NULL_PREFIX):]) for c in structure.domain
                     if c.startswith(NULL_PREFIX) and c[len(NULL_PREFIX):].isdigit()), default=0)
    root = ChaseNode(structure, 0, fresh=start)
    out.nodes = 1
    queue = deque([root])
    while queue:
        node = queue.popleft()
        s = node.structure
        if stop is not None and stop(s):
            node.status = "stopped"
            out.stopped.append(s)
            out.stopped_depths.append(node.depth)
            continue
        pending = _schedule(node.pending, s, rules)
        if not pending:
            node.status = "saturated"
            out.saturated.append(s)
            out.saturated_depths.append(node.depth)
            continue
        t = pending[0]
        k = len(t.rule.disjuncts)
        width = max(len(d.existentials) for d in t.rule.disjuncts)
        if (node.depth >= budget.max_depth or out.nodes + k > budget.max_nodes
                or len(s.domain) + width > budget.max_domain):
            node.status = "truncated"
            out.truncated += 1
            out.truncated_results.append(s)
            continue
        fresh = FreshNames(node.fresh)
        children = apply_trigger(s, t, fresh)
        node.status = "expanded"
        for i, child in enumerate(children):
            added = tuple(f for f in child.sorted_facts() if f not in s)
            c = ChaseNode(child, node.depth + 1, t, i, added, pending=pending[1:], fresh=fresh.next)
            if keep_tree:
                node.children.append(c)
            queue.append(c)
        out.nodes += k
        if not keep_tree:
            node.pending = ()
    if keep_tree:
        out.tree = root
    return out


def dump_tree(root: ChaseNode) -> str:
    """One line per node: ``depth  rule#  disjunct#  +added-facts``."""
    lines = []

    def walk(node):
        rule = "-" if node.trigger is None else str(node.trigger.rule_index)
        disj = "-" if node.disjunct is None else str(node.disjunct)
        facts = node.added if node.trigger is not None else tuple(node.structure.sorted_facts())
        text = " ".join(map(str, facts))
        status = "" if node.status == "expanded" else f"  [{node.status}]"
        lines.append(f"{'  ' * node.depth}{node.depth}  {rule}  {disj}  +{text}{status}")
        for c in node.children:
            walk(c)

    walk(root)
    return "\n".join(lines)


def null_constants(structure: Structure) -> list:
    return sorted((c for c in structure.domain if c.startswith(NULL_PREFIX)), key=const_key)


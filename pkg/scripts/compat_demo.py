"""Diagrams of {R(a)} against the models of R(X) -> S(X) | T(X)."""
from dexr.core import RuleProfile, Schema
from dexr.diagrams import build_diagram, check_compat_with, diagram_to_dd, g_subsets, neg_candidates
from dexr.syntax import parse_rule, parse_structure, to_text

schema = Schema.of("R/1", "S/1", "T/1")
rule = parse_rule("R(X) -> S(X) | T(X).", schema)
i = parse_structure("R(a).", schema)

negs = neg_candidates(i, i, 0)
print("negative conjunctions:")
for g in negs:
    print("  " + g.to_text())
for k, g in enumerate(g_subsets(negs, 1), 1):
    d = build_diagram(i, i, g)
    print(f"G{k}: {d.to_text():40} {to_text(diagram_to_dd(d))}")

for l in (1, 2):
    v = check_compat_with(i, [rule], RuleProfile(1, 0, l))
    line = f"(1,0,{l}): {v.status.value}"
    if v.witness is not None:
        line += f"  witness {v.witness.to_text()}"
    print(line)

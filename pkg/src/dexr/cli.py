"""Command-line front end.

Exit codes: 0 positive answer, 1 definitive negative answer, 2 unknown
(some budget ran out), 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chase import ChaseBudget, chase, dump_tree
from .core import (RuleProfile, canonicalize, Schema, Structure, critical_structure, induced_substructure,
                   is_guarded_structure, profile_of, profile_of_set)
from .diagrams import (Compat, build_diagram, check_compat_with, diagram_to_dd, g_subsets,
                       neg_candidates)
from .entailment import Entailment, entails
from .errors import ChaseExhausted, DexrError
from .products import (direct_product, projective_homomorphism, repair_homomorphism,
                       repairable_direct_product)
from .rewrite import Rewrite, RewriteConfig, rewrite_guarded_to_linear
from .satisfaction import satisfies, violations
from .syntax import format_atom, format_constant, format_term, parse, parse_constant, parse_rule, to_text

EXIT = {Entailment.ENTAILED: 0, Entailment.NOT_ENTAILED: 1, Entailment.UNKNOWN: 2,
        Compat.COMPATIBLE: 0, Compat.NOT_COMPATIBLE: 1, Compat.UNKNOWN: 2,
        Rewrite.REWRITTEN: 0, Rewrite.FAIL: 1, Rewrite.UNKNOWN: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _natural(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-depth", type=_positive, default=20)
    common.add_argument("--max-nodes", type=_positive, default=2000)
    common.add_argument("--max-domain", type=_positive, default=64)
    common.add_argument("--countermodel-bound", type=_positive, default=2)

    p = _Parser(prog="dexr", description="Reasoning about disjunctive existential rules.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="parse and validate a file")
    s.add_argument("file")

    s = sub.add_parser("model", parents=[common], help="satisfaction report per rule")
    s.add_argument("file")
    s.add_argument("--structure", required=True)

    s = sub.add_parser("chase", parents=[common], help="run the disjunctive chase")
    s.add_argument("file")
    s.add_argument("--structure", required=True)
    s.add_argument("--tree", action="store_true", help="print the chase tree")

    s = sub.add_parser("product", parents=[common], help="direct or repairable product")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--repair", metavar="RULES")

    s = sub.add_parser("critical", parents=[common], help="emit the k-critical structure")
    s.add_argument("file")
    s.add_argument("--k", type=_positive, required=True)

    s = sub.add_parser("diagram", parents=[common], help="list negative conjunctions and diagrams")
    s.add_argument("file")
    s.add_argument("--structure", required=True)
    s.add_argument("--k-sub", required=True, metavar="SPEC",
                   help="constants 'a,b' (induced substructure) or a single fact 'R(a,b)'")
    s.add_argument("--m", type=_natural, default=0)
    s.add_argument("--l", type=_natural, default=1)
    s.add_argument("--variant", choices=("plain", "linear", "guarded"), default="plain")

    s = sub.add_parser("compat", parents=[common], help="compatibility of the rules with a structure")
    s.add_argument("file")
    s.add_argument("--structure", required=True)
    s.add_argument("--n", type=_natural, required=True)
    s.add_argument("--m", type=_natural, required=True)
    s.add_argument("--l", type=_natural, required=True)
    s.add_argument("--variant", choices=("plain", "linear", "guarded"), default="plain")
    s.add_argument("--exhaustive", action="store_true",
                   help="use every negative conjunction, not only the minimal ones")

    s = sub.add_parser("entail", parents=[common], help="three-valued entailment")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--rule", help="a single rule in the rule syntax")
    g.add_argument("--rules", help="a file of rules; checks each of them")

    s = sub.add_parser("rewrite", parents=[common], help="guarded-to-linear rewriting")
    s.add_argument("file")
    s.add_argument("--n", type=_natural)
    s.add_argument("--m", type=_natural)
    s.add_argument("--l", type=_natural)
    s.add_argument("--lp", type=_positive)
    s.add_argument("--p", type=_positive)
    s.add_argument("--alg1-bound", action="store_true")
    s.add_argument("--candidate-cap", type=_positive, default=100_000)
    s.add_argument("--no-minimize", action="store_true")
    return p


# ------------------------------------------------------------------ helpers


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None


def _load(path: str, schema=None):
    try:
        return parse(_read(path), schema)
    except DexrError as exc:
        raise UsageError(f"{path}:{exc}") from None


def _budget(args) -> ChaseBudget:
    return ChaseBudget(args.max_depth, args.max_nodes, args.max_domain)


def _facts(s: Structure) -> list:
    return [format_atom(f) + "." for f in s.sorted_facts()]


def _structure_json(s: Structure) -> dict:
    return {"domain": [format_constant(c) for c in s.sorted_domain()], "facts": _facts(s)}


def _one_line(s: Structure) -> str:
    text = " ".join(_facts(s)) or "(no facts)"
    extra = s.domain - s.active_domain()
    if extra:
        text += "  domain { " + " ".join(format_constant(c) for c in s.sorted_domain()) + " }"
    return text


def _rule_text(r) -> str:
    return to_text(r)


def _map_text(h: dict) -> str:
    return ", ".join(f"{format_term(k)} -> {format_constant(v)}"
                     for k, v in sorted(h.items(), key=lambda kv: str(kv[0])))


# ----------------------------------------------------------------- commands


def cmd_check(args):
    doc = _load(args.file)
    rules = []
    for r in doc.statements:
        p = profile_of(r)
        rules.append({"rule": _rule_text(r), "kind": type(r).__name__,
                      "profile": list(p.as_tuple()),
                      "linear": len(r.body) <= 1, "guarded": _guarded(r)})
    lines = [to_text(doc.schema), f"facts: {len(doc.facts)}", f"rules: {len(rules)}"]
    for r in rules:
        flags = ",".join(k for k in ("linear", "guarded") if r[k]) or "-"
        lines.append(f"  {r['rule']}  profile={tuple(r['profile'])}  {flags}")
    return 0, "ok", {"schema": to_text(doc.schema), "facts": len(doc.facts), "rules": rules}, lines


def _guarded(r) -> bool:
    if not r.body:
        return True
    bvars = set(r.body_variables)
    return any(set(a.variables) == bvars for a in r.body)


def _rules_and_structure(args):
    doc = _load(args.file)
    s = _load(args.structure, doc.schema)
    if s.statements:
        raise UsageError(f"{args.structure}: structure files may not contain rules")
    return doc, s.structure


def cmd_model(args):
    doc, s = _rules_and_structure(args)
    rows, lines = [], []
    for r in doc.statements:
        # report the violating match in the variable names that are printed
        bad = next(violations(s, canonicalize(r)), None)
        row = {"rule": _rule_text(r), "satisfied": bad is None}
        text = f"{'yes' if bad is None else 'no '}  {row['rule']}"
        if bad is not None:
            row["violation"] = {str(k): v for k, v in bad.items()}
            text += f"   violated at {_map_text(bad) or 'the empty match'}"
        rows.append(row)
        lines.append(text)
    ok = all(r["satisfied"] for r in rows)
    status = "Model" if ok else "NotModel"
    return (0 if ok else 1), status, {"rules": rows}, lines + [status]


def cmd_chase(args):
    doc, s = _rules_and_structure(args)
    if doc.dependencies:
        raise UsageError("the chase only applies dexrs; remove dependencies with equalities or false")
    out = chase(s, doc.rules, _budget(args), keep_tree=args.tree)
    status = "Saturated" if out.complete else "Truncated"
    lines = [f"saturated: {len(out.saturated)}  truncated: {out.truncated}  nodes: {out.nodes}"]
    for i, (r, d) in enumerate(zip(out.saturated, out.saturated_depths), 1):
        lines.append(f"result {i} (depth {d}): {_one_line(r)}")
    if args.tree:
        lines.append(dump_tree(out.tree))
    result = {"saturated": [_structure_json(r) for r in out.saturated],
              "depths": out.saturated_depths, "truncated": out.truncated, "nodes": out.nodes}
    if args.tree:
        result["tree"] = dump_tree(out.tree).splitlines()
    return (0 if out.complete else 2), status, result, lines


def cmd_product(args):
    schema = _load(args.repair).schema if args.repair else None
    left = _load(args.left, schema)
    right = _load(args.right, schema)
    if schema is None:
        schema = left.schema.union(right.schema)
        left, right = _load(args.left, schema), _load(args.right, schema)
    i, j = left.structure, right.structure
    k = direct_product(i, j)
    pi = projective_homomorphism(k, i)
    result = {"product": _structure_json(k), "projection": {format_constant(a): b for a, b in pi.items()}}
    lines = ["product: " + _one_line(k)]
    if not args.repair:
        return 0, "ok", result, lines
    rules = _load(args.repair).rules
    try:
        repaired = repairable_direct_product(i, j, rules, _budget(args))
    except ChaseExhausted as exc:
        lines.append(f"repair: exhausted ({exc})")
        return 2, "Exhausted", result, lines
    h = repair_homomorphism(i, k, repaired)
    result["repaired"] = _structure_json(repaired)
    result["homomorphism"] = {format_constant(a): b for a, b in h.items()}
    lines.append("repaired: " + _one_line(repaired))
    lines.append("homomorphism to left factor: " + _map_text(h))
    return 0, "ok", result, lines


def cmd_critical(args):
    doc = _load(args.file)
    s = critical_structure(doc.schema, args.k)
    rows = [{"rule": _rule_text(r), "satisfied": satisfies(s, r)} for r in doc.statements]
    ok = all(r["satisfied"] for r in rows)
    lines = [to_text(s)] + [f"{'yes' if r['satisfied'] else 'no '}  {r['rule']}" for r in rows]
    status = "Model" if ok else "NotModel"
    return (0 if ok else 1), status, {"structure": _structure_json(s), "rules": rows}, lines + [status]


def _select_k(spec: str, i: Structure, variant: str) -> Structure:
    spec = spec.strip()
    if "(" in spec:
        try:
            fact = parse(spec.rstrip(".") + ".", i.schema).facts
        except DexrError as exc:
            raise UsageError(f"--k-sub: {exc}") from None
        if len(fact) != 1 or fact[0] not in i:
            raise UsageError(f"--k-sub: {spec} is not a fact of the structure")
        return Structure(i.schema, fact)
    try:
        consts = [parse_constant(c.strip()) for c in spec.split(",") if c.strip()]
    except DexrError as exc:
        raise UsageError(f"--k-sub: {exc}") from None
    if not set(consts) <= i.domain:
        raise UsageError("--k-sub: constants outside the structure's domain")
    k = induced_substructure(i, consts)
    if k.domain != k.active_domain():
        raise UsageError("--k-sub: every selected constant must occur in a fact of the substructure")
    if variant == "guarded" and not is_guarded_structure(k):
        raise UsageError("--k-sub: the substructure is not guarded")
    if variant == "linear" and len(k) > 1:
        raise UsageError("--k-sub: a linear substructure has at most one fact; give a single fact")
    return k


def cmd_diagram(args):
    doc, i = _rules_and_structure(args)
    k = _select_k(args.k_sub, i, args.variant)
    negs = neg_candidates(k, i, args.m)
    lines = [f"K: {_one_line(k)}", f"N (m={args.m}): {len(negs)}"]
    lines += [f"  {g.to_text()}" for g in negs]
    diagrams = []
    for g in g_subsets(negs, args.l):
        d = build_diagram(k, i, g)
        dd = diagram_to_dd(d)
        diagrams.append({"diagram": d.to_text(), "dd": to_text(dd)})
        lines.append(f"{d.to_text()}    =>    {to_text(dd)}")
    result = {"k": _structure_json(k), "negative": [g.to_text() for g in negs], "diagrams": diagrams}
    return 0, "ok", result, lines


def cmd_compat(args):
    doc, i = _rules_and_structure(args)
    if doc.dependencies:
        raise UsageError("compatibility is checked against dexrs only")
    profile = RuleProfile(args.n, args.m, args.l)
    v = check_compat_with(i, doc.rules, profile, args.variant, _budget(args), args.exhaustive)
    lines = [f"{v.status.value}  ({v.diagrams_checked} diagrams checked)"]
    result = {"diagrams_checked": v.diagrams_checked}
    if v.witness is not None:
        lines.append(f"unsatisfiable diagram: {v.witness.to_text()}")
        result["witness"] = v.witness.to_text()
    if v.status is Compat.COMPATIBLE:
        result["witnesses"] = [{"diagram": d.to_text(), "model": _structure_json(j)} for d, j in v.witnesses]
        lines += [f"  {d.to_text()}    satisfied by    {_one_line(j)}" for d, j in v.witnesses]
    if v.unresolved:
        result["unresolved"] = [d.to_text() for d in v.unresolved]
        lines += [f"  unresolved: {d.to_text()}" for d in v.unresolved]
    return EXIT[v.status], v.status.value, result, lines


def _verdict_json(v) -> dict:
    out = {"status": v.status.value}
    if v.rule is not None:
        out["rule"] = _rule_text(v.rule)
    if v.countermodel is not None:
        out["countermodel"] = _structure_json(v.countermodel)
        out["source"] = v.source
    if v.depth is not None:
        out["depth"] = v.depth
    return out


def cmd_entail(args):
    doc = _load(args.file)
    if doc.dependencies:
        raise UsageError("premises must be dexrs")
    if args.rule:
        try:
            target = [parse_rule(args.rule)]
        except DexrError as exc:
            raise UsageError(f"--rule: {exc}") from None
    else:
        target = _load(args.rules).statements
    schema = doc.schema.union(Schema.infer(target))
    verdicts = [entails(doc.rules, r, schema, _budget(args), args.countermodel_bound) for r in target]
    statuses = {v.status for v in verdicts}
    if Entailment.NOT_ENTAILED in statuses:
        overall = Entailment.NOT_ENTAILED
    elif Entailment.UNKNOWN in statuses:
        overall = Entailment.UNKNOWN
    else:
        overall = Entailment.ENTAILED
    lines = []
    for v in verdicts:
        lines.append(f"{v.status.value}  {_rule_text(v.rule)}")
        if v.countermodel is not None:
            lines.append(f"  countermodel: {_one_line(v.countermodel)}")
        elif v.depth is not None:
            lines.append(f"  all branches satisfy the head by depth {v.depth}")
    if len(verdicts) > 1:
        lines.append(overall.value)
    return EXIT[overall], overall.value, {"verdicts": [_verdict_json(v) for v in verdicts]}, lines


def cmd_rewrite(args):
    doc = _load(args.file)
    if doc.dependencies:
        raise UsageError("rewriting applies to dexrs only")
    profile = None
    if any(x is not None for x in (args.n, args.m, args.l)):
        base = _profile_or_default(doc.rules)
        profile = RuleProfile(base.n if args.n is None else args.n,
                              base.m if args.m is None else args.m,
                              base.l if args.l is None else args.l)
    cfg = RewriteConfig(profile=profile, lp=args.lp, p=args.p, alg1_bound=args.alg1_bound,
                        budget=_budget(args), countermodel_bound=args.countermodel_bound,
                        candidate_cap=args.candidate_cap, minimize=not args.no_minimize)
    res = rewrite_guarded_to_linear(doc.rules, doc.schema, cfg)
    report = dict(res.report)
    lines = [res.status.value]
    if res.status is Rewrite.REWRITTEN:
        lines += [_rule_text(r) for r in res.rules]
        report["rules"] = [_rule_text(r) for r in res.rules]
    elif res.certificate is not None and res.certificate.countermodel is not None:
        cm = res.certificate.countermodel
        lines.append(f"not recovered: {_rule_text(res.certificate.rule)}")
        lines.append(f"countermodel: {_one_line(cm)}")
        report["certificate"] = _verdict_json(res.certificate)
    lines.append("report: " + json.dumps({k: report[k] for k in ("candidates", "entailed", "unknown")
                                          if k in report}, sort_keys=True))
    return EXIT[res.status], res.status.value, report, lines


def _profile_or_default(rules):
    return profile_of_set(rules) or RuleProfile(1, 0, 1)


COMMANDS = {"check": cmd_check, "model": cmd_model, "chase": cmd_chase, "product": cmd_product,
            "critical": cmd_critical, "diagram": cmd_diagram, "compat": cmd_compat,
            "entail": cmd_entail, "rewrite": cmd_rewrite}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        code, status, result, lines = COMMANDS[args.command](args)
    except (UsageError, DexrError, ValueError) as exc:
        if args.format == "json":
            out.write(json.dumps({"command": args.command, "status": "Error", "exit_code": 3,
                                  "error": str(exc)}, sort_keys=True) + "\n")
        err.write(f"dexr {args.command}: {exc}\n")
        return 3
    if args.format == "json":
        doc = {"command": args.command, "status": status, "exit_code": code, "result": result}
        out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main(argv=None):
    try:
        code = run(argv)
    except SystemExit as exc:  # argparse
        code = exc.code if isinstance(exc.code, int) else 3
    sys.exit(code)


if __name__ == "__main__":
    main()

"""Rewrite a linear set, then show why a guarded rule has no linear equivalent."""
import json

from dexr.rewrite import rewrite_guarded_to_linear
from dexr.syntax import format_structure, parse, to_text

for text in ("schema { R/1 S/1 T/1 }\nR(X) -> S(X) | T(X).\nS(X) -> T(X).",
             "R(X), P(X) -> S(X)."):
    doc = parse(text)
    res = rewrite_guarded_to_linear(doc.rules, doc.schema)
    print("input:", "  ".join(to_text(r) for r in doc.rules))
    print("status:", res.status.value)
    for r in res.rules:
        print("  " + to_text(r))
    if res.certificate is not None and res.certificate.countermodel is not None:
        print("model of every entailed linear rule that violates the input:")
        print("  " + format_structure(res.certificate.countermodel).replace("\n", " "))
    print("report:", json.dumps(res.report, sort_keys=True))
    print()

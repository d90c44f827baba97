"""Direct product of two models of R(X) -> S(X) | T(X), and its repair."""
from dexr.core import Schema
from dexr.products import direct_product, repair_homomorphism, repairable_direct_product
from dexr.satisfaction import satisfies
from dexr.syntax import format_structure, parse_rule, parse_structure

schema = Schema.of("R/1", "S/1", "T/1")
rule = parse_rule("R(X) -> S(X) | T(X).", schema)
i1 = parse_structure("R(a). S(a).", schema)
i2 = parse_structure("R(a). T(a).", schema)

k = direct_product(i1, i2)
print("product:\n" + format_structure(k))
print("product is a model:", satisfies(k, rule))
l = repairable_direct_product(i1, i2, [rule])
print("repaired:\n" + format_structure(l))
print("homomorphism to the left factor:", repair_homomorphism(i1, k, l))

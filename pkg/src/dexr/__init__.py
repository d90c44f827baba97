"""Reasoning toolkit for disjunctive existential rules over finite structures."""
from .chase import ChaseBudget, ChaseOutcome, Trigger, active_triggers, apply_trigger, chase
from .core import (Atom, Dexr, Disjunct, DisjunctiveDependency, Equality, RuleProfile, Schema,
                   Structure, Var, active_domain, canonicalize, critical_structure, embed,
                   induced_substructure, is_induced_substructure, is_subset, profile_of,
                   profile_of_set, rule_key)
from .diagrams import (Compat, CompatVerdict, Diagram, NegConjunction, build_diagram,
                       check_compat_with, diagram_to_dd, minimal_neg_candidates, neg_candidates,
                       satisfies_diagram, variablize)
from .entailment import Entailment, Verdict, entails, entails_dd, entails_set, freeze_body
from .homs import all_homomorphisms, are_isomorphic, find_homomorphism, is_homomorphism
from .products import (direct_product, pair, projective_homomorphism,
                       repairable_direct_product, split_pair)
from .rewrite import (Rewrite, RewriteConfig, RewriteResult, candidate_count_bound,
                      enumerate_linear_dexrs, linearization_bound, rewrite_guarded_to_linear)
from .satisfaction import is_model, satisfies, satisfies_dd, satisfies_dexr
from .syntax import SourceDocument, parse, parse_rule, parse_structure, to_text

__version__ = "0.1.0"

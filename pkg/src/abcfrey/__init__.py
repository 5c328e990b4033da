"""Good ABC triples and good Frey curves for the torsion families C2 x C2N."""

from .factor import FactorBudget, FactorCache, FactoredInteger, factor, radical
from .frey import WeierstrassModel, c4_cross_check, frey_model, is_good_curve, minimal_invariants
from .maps import TorsionFamily, apply_map, table, verify_lemma1
from .torsion import certify_torsion, universal_curve, verify_cov
from .triples import ABCTriple, is_good, iterate, make_triple, quality, validate_seed

__version__ = "0.1.0"

__all__ = [
    "ABCTriple", "FactorBudget", "FactorCache", "FactoredInteger", "TorsionFamily",
    "WeierstrassModel", "apply_map", "c4_cross_check", "certify_torsion", "factor",
    "frey_model", "is_good", "is_good_curve", "iterate", "make_triple", "minimal_invariants",
    "quality", "radical", "table", "universal_curve", "validate_seed", "verify_cov",
    "verify_lemma1",
]

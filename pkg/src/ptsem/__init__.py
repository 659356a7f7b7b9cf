"""Base-extension semantics for intuitionistic propositional logic, executable.

Atomic bases and derivability, Sandqvist support over finite universes of
bases, the Heyting algebra of up-sets with nuclei, the completeness pipeline
through the base N, a call-by-value CPS transform and continuation-based
proof search.
"""
from .bases import AtomicRule, Base, derivable_atoms, derive_tree, derives, parse_base, parse_rule
from .completeness import build_base_N, check_dagger, derivation_to_nd, flatten, prove_via_base
from .g4ip import g4ip_provable
from .natded import NDProof, nd_check
from .support import WorldUniverse, infers, parse_universe, supports, valid
from .syntax import Sequent, parse_formula, parse_sequent, print_formula

__version__ = "0.1.0"

__all__ = [
    "AtomicRule", "Base", "derivable_atoms", "derive_tree", "derives", "parse_base", "parse_rule",
    "build_base_N", "check_dagger", "derivation_to_nd", "flatten", "prove_via_base",
    "g4ip_provable", "NDProof", "nd_check",
    "WorldUniverse", "infers", "parse_universe", "supports", "valid",
    "Sequent", "parse_formula", "parse_sequent", "print_formula",
]

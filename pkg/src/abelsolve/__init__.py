"""Solving ``phi(x) = b`` for homomorphisms of finitely generated abelian groups."""

from .blocklift import solve_p_group_blockwise
from .decompose import solve_by_decomposition, sylow_split
from .groups import (
    FgAbelianGroup,
    GroupElement,
    GroupMismatch,
    Homomorphism,
    InvalidHomomorphism,
    SolutionSet,
    apply_hom,
    canonical_primary_form,
    validate_hom,
)
from .hensel import (
    EndoSystem,
    invert_automorphism,
    solve_endomorphic,
    solve_membership,
    solve_p_group_hom_hensel,
)
from .modsnf import StrategyInapplicable, modular_snf, solve_homocyclic
from .oracle import BudgetExceeded, EnumerationBudget, brute_force_solve
from .problem import ProblemFile, ProblemParseError, parse_problem_file
from .snf import smith_normal_form, solve_diophantine, solve_fg_via_snf
from .strategies import STRATEGIES, solve

__all__ = [
    "BudgetExceeded", "EndoSystem", "EnumerationBudget", "FgAbelianGroup", "GroupElement",
    "GroupMismatch", "Homomorphism", "InvalidHomomorphism", "ProblemFile", "ProblemParseError",
    "STRATEGIES", "SolutionSet", "StrategyInapplicable", "apply_hom", "brute_force_solve",
    "canonical_primary_form", "invert_automorphism", "modular_snf", "parse_problem_file",
    "smith_normal_form", "solve", "solve_by_decomposition", "solve_diophantine",
    "solve_endomorphic", "solve_fg_via_snf", "solve_homocyclic", "solve_membership",
    "solve_p_group_blockwise", "solve_p_group_hom_hensel", "sylow_split", "validate_hom",
]

__version__ = "0.1.0"

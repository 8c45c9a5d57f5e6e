"""Unitary-process discrimination with an error margin.

Closed-form solutions for two arbitrary unitaries and for process sets
forming a projective representation of a finite group, plus an independent
numerical-optimization oracle that certifies every analytic value.
"""

from ._ascent import BACKEND as kernel_backend
from .core import DiscriminationReport, InputState, Povm, ProcessSet, evaluate, margin_satisfied
from .group_disc import (
    CovariantPovm,
    KappaSummary,
    MarginResult,
    ancilla_extend,
    kappa,
    kappa_from_signature,
    minimal_perfect_ancilla,
    optimal_strategy,
    p_max,
    solve_group,
    symmetrize,
    unambiguous_perfect_ancilla,
    verify_key_inequality,
)
from .groups import FactorSet, FiniteGroup, ProjectiveRep, infer_factor_set, validate_rep
from .isotypic import IrrepDecomposition, commutant_basis, decompose, multiplicity_signature
from .oracle import OracleConfig, OracleReport, concavity_scan, optimize_fixed_input, optimize_full
from .two_unitary import UnitaryPair, ancilla_invariance_check, critical_margins, p_max_pure, s_min, solve

__version__ = "0.1.0"

__all__ = [
    "CovariantPovm",
    "DiscriminationReport",
    "FactorSet",
    "FiniteGroup",
    "InputState",
    "IrrepDecomposition",
    "KappaSummary",
    "MarginResult",
    "OracleConfig",
    "OracleReport",
    "Povm",
    "ProcessSet",
    "ProjectiveRep",
    "UnitaryPair",
    "ancilla_extend",
    "ancilla_invariance_check",
    "commutant_basis",
    "concavity_scan",
    "critical_margins",
    "decompose",
    "evaluate",
    "infer_factor_set",
    "kappa",
    "kappa_from_signature",
    "kernel_backend",
    "margin_satisfied",
    "minimal_perfect_ancilla",
    "multiplicity_signature",
    "optimal_strategy",
    "optimize_fixed_input",
    "optimize_full",
    "p_max",
    "p_max_pure",
    "s_min",
    "solve",
    "solve_group",
    "symmetrize",
    "unambiguous_perfect_ancilla",
    "validate_rep",
    "verify_key_inequality",
]

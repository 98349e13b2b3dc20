"""Gram-determinant 2-inner products and numerical checks of reverse
Cauchy-Bunyakovsky-Schwarz inequalities."""

from .errors import ConsistencyError, DimensionError, ModeError, PreconditionError, TwoInnerError
from .linalg import COMPLEX, DEFAULT_TOL, REAL, WeightedInnerSpace, inner, norm
from .reverses import (
    TARGET_CONSTANT,
    BoundsPair,
    Form,
    InequalityReport,
    Verdict,
    cond_ball,
    cond_quadratic,
    evaluate,
    implied_constant,
)
from .sharpness import ConstantEstimate, ExtremalWitness, epsilon_family_thm31, estimate_constant, extremal_thm21
from .two_inner import TwoInnerSpace, audit_axioms, cbs_gap, tip, tip_sq, tnorm

__all__ = [
    "COMPLEX", "DEFAULT_TOL", "REAL", "TARGET_CONSTANT",
    "BoundsPair", "ConsistencyError", "ConstantEstimate", "DimensionError", "ExtremalWitness",
    "Form", "InequalityReport", "ModeError", "PreconditionError", "TwoInnerError",
    "TwoInnerSpace", "Verdict", "WeightedInnerSpace",
    "audit_axioms", "cbs_gap", "cond_ball", "cond_quadratic", "epsilon_family_thm31",
    "estimate_constant", "evaluate", "extremal_thm21", "implied_constant", "inner", "norm",
    "tip", "tip_sq", "tnorm",
]

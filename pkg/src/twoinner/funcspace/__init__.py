"""Expressions in one variable and the integral 2-inner product built from them."""

from .expr import EvaluationError, Expr, ParseError, evaluate, parse_expr, to_text, tokenize
from .integral import (
    Prop,
    SyncReport,
    WeightedL2,
    check_synchronous,
    evaluate_prop,
    integrate,
    synchronicity_pair,
    tip_double,
    tip_gram,
)
from .quadrature import QuadratureDomain

__all__ = [
    "EvaluationError", "Expr", "ParseError", "Prop", "QuadratureDomain", "SyncReport",
    "WeightedL2", "check_synchronous", "evaluate", "evaluate_prop", "integrate",
    "parse_expr", "synchronicity_pair", "tip_double", "tip_gram", "to_text", "tokenize",
]

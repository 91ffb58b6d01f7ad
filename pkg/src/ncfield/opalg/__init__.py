"""Exact operator algebra over ``x, p, a, pa`` with Gaussian-rational parametric coefficients."""

from .operators import (
    GENERATORS,
    Generator,
    OperatorExpr,
    canonicalize,
    commutator,
    gen,
    substitute,
)
from .params import (
    BUILTIN_SYMBOLS,
    ParamExpr,
    ParamSymbol,
    RationalParamExpr,
    is_registered,
    param,
    register_symbol,
    registered_symbols,
)
from .quadratic import DegreeTooHigh, NoncommutingCoefficient, QuadraticForm, collect_quadratic
from .scalars import I, GaussianRational

__all__ = [
    "BUILTIN_SYMBOLS",
    "DegreeTooHigh",
    "GENERATORS",
    "GaussianRational",
    "Generator",
    "I",
    "NoncommutingCoefficient",
    "OperatorExpr",
    "ParamExpr",
    "ParamSymbol",
    "QuadraticForm",
    "RationalParamExpr",
    "canonicalize",
    "collect_quadratic",
    "commutator",
    "gen",
    "is_registered",
    "param",
    "register_symbol",
    "registered_symbols",
    "substitute",
]

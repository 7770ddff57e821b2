"""Exact arithmetic core: constants, rational functions, truncated series and matrices."""

from .constants import ConstantsField, constants_field, rationals
from .matrix import ConstMatrix, RatMatrix, as_ratmatrix, invert_matrix
from .ratfunc import RatFunc, normalize_ratfunc
from .series import PuiseuxSeriesTrunc, SeriesMatrix, expand_series, substitute_series

__all__ = [
    "ConstantsField",
    "constants_field",
    "rationals",
    "RatFunc",
    "normalize_ratfunc",
    "PuiseuxSeriesTrunc",
    "SeriesMatrix",
    "expand_series",
    "substitute_series",
    "ConstMatrix",
    "RatMatrix",
    "as_ratmatrix",
    "invert_matrix",
]

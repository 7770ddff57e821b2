"""Operator cases, scalar skew operators and their actions."""

from .apply import apply_operator, multiply_by_ratfunc
from .cases import (
    CommutationWitness,
    OperatorCase,
    check_commutation,
    delta_of,
    delta_series,
    sigma_inverse_of,
    sigma_of,
    sigma_power_of,
    sigma_series,
)
from .closed_form import ClosedFormSolution, ClosedFormTerm
from .scalar import ScalarOperator, homogenize, strip_trailing_sigma

__all__ = [
    "OperatorCase",
    "CommutationWitness",
    "check_commutation",
    "sigma_of",
    "sigma_power_of",
    "sigma_inverse_of",
    "delta_of",
    "sigma_series",
    "delta_series",
    "ScalarOperator",
    "homogenize",
    "strip_trailing_sigma",
    "ClosedFormSolution",
    "ClosedFormTerm",
    "apply_operator",
    "multiply_by_ratfunc",
]

"""Systems from annihilator pairs, and annihilator pairs from closed forms."""

from .annihilators import annihilators_of_closed_form
from .basis import ModuleBasis
from .construct import build_dd_system, build_ss_system

__all__ = [
    "ModuleBasis",
    "build_dd_system",
    "build_ss_system",
    "annihilators_of_closed_form",
]

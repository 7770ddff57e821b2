"""Series extension, Pade reconstruction, rational solving and instance generation."""

from .constant_systems import solve_constant_system
from .extend import extend_series_by_operator
from .instances import default_constants, gen_instance, random_gauge
from .pade import pade_reconstruct
from .rational import RationalSolution, denominator_candidates, solve_rational

__all__ = [
    "extend_series_by_operator",
    "pade_reconstruct",
    "solve_rational",
    "RationalSolution",
    "denominator_candidates",
    "solve_constant_system",
    "gen_instance",
    "default_constants",
    "random_gauge",
]

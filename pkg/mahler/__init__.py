"""Mahler engine: fixed-point gauges, series solutions and reduction of Mahler pairs."""

from .fixed_point import anchor_matrix, fixed_point_gauge, rational_fixed_point_gauge
from .nilpotent import LogGauge, log_normalize, nilpotent_normalize
from .polar import polar_split_remove, principal_part
from .reduction import reduce_2m_constants
from .regular_singular import is_anchored, regular_singular_reduce
from .series_solve import mahler_series_solve
from .triangular import BlockShape, block_triangularize, normalize_diagonal, primary_sigma

__all__ = [
    "anchor_matrix",
    "fixed_point_gauge",
    "rational_fixed_point_gauge",
    "mahler_series_solve",
    "BlockShape",
    "block_triangularize",
    "normalize_diagonal",
    "primary_sigma",
    "polar_split_remove",
    "principal_part",
    "is_anchored",
    "regular_singular_reduce",
    "reduce_2m_constants",
    "nilpotent_normalize",
    "log_normalize",
    "LogGauge",
]

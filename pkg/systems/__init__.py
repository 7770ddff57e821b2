"""First-order system pairs, consistency, gauge calculus and singularity inventories."""

from .consistency import (
    ConsistencyReport,
    ReducedFormReport,
    check_consistency,
    check_consistency_dd,
    check_consistency_ss,
    require_consistent,
    verify_reduced_form,
)
from .gauge import (
    GaugeCertificate,
    compose_certificates,
    gauge,
    gauge_dd,
    gauge_ss,
    identity_certificate,
    lift_system,
    sigma_shift_system,
)
from .singular import SingularFactor, SingularInventory, singular_points
from .systems import DDSystem, SigmaSigmaSystem, System, delta_matrix, sigma_matrix

__all__ = [
    "DDSystem",
    "SigmaSigmaSystem",
    "System",
    "sigma_matrix",
    "delta_matrix",
    "ConsistencyReport",
    "ReducedFormReport",
    "check_consistency",
    "check_consistency_dd",
    "check_consistency_ss",
    "require_consistent",
    "verify_reduced_form",
    "GaugeCertificate",
    "gauge",
    "gauge_dd",
    "gauge_ss",
    "identity_certificate",
    "lift_system",
    "compose_certificates",
    "sigma_shift_system",
    "SingularFactor",
    "SingularInventory",
    "singular_points",
]

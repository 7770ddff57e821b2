"""Gauge transformations Z = G Y and their re-verifiable certificates.

For a delta/sigma pair the gauge acts by A~ = delta(G) G^-1 + G A G^-1 and B~ = sigma(G) B G^-1;
for two sigmas by B~_j = sigma_j(G) B_j G^-1. Gauges with fractional powers of x live in a
rescaled variable t with x = t**N (Mahler cases only); the certificate records N.
"""

from dataclasses import dataclass

from config.logging_config import get_logger
from core.exceptions import (
    InconsistentSystemError,
    InputError,
    InternalConsistencyError,
    NotInvertibleError,
    SystemsError,
)
from exact.matrix import RatMatrix, invert_matrix

from .consistency import check_consistency
from .systems import (
    DDSystem,
    SigmaSigmaSystem,
    System,
    delta_matrix,
    sigma_matrix,
    sigma_power_matrix,
)

logger = get_logger(__name__)


def lift_system(system: System, ramification: int) -> System:
    """Rewrite a Mahler system in t with x = t**ramification.

    sigma(t) = t**q keeps its form; the Euler derivation rescales as t d/dt = N x d/dx, so a
    delta/sigma pair (A, B) becomes (N A(t**N), B(t**N)).
    """
    if ramification < 1:
        raise InputError(f"ramification must be positive, got {ramification}")
    if ramification == 1:
        return system
    if not system.case.is_mahler:
        raise SystemsError(f"ramified variables are only supported in Mahler cases, not {system.case.kind.value}")
    if isinstance(system, DDSystem):
        return DDSystem(
            system.case,
            system.A.substitute_power(ramification) * ramification,
            system.B.substitute_power(ramification),
        )
    return SigmaSigmaSystem(
        system.case,
        system.B1.substitute_power(ramification),
        system.B2.substitute_power(ramification),
    )


def _transform(system: System, G: RatMatrix, G_inv: RatMatrix) -> System:
    case = system.case
    if isinstance(system, DDSystem):
        A = delta_matrix(G, case) * G_inv + G * system.A * G_inv
        B = sigma_matrix(G, case) * system.B * G_inv
        return DDSystem(case, A, B)
    B1 = sigma_matrix(G, case, 1) * system.B1 * G_inv
    B2 = sigma_matrix(G, case, 2) * system.B2 * G_inv
    return SigmaSigmaSystem(case, B1, B2)


def _relations_hold(system: System, G: RatMatrix, target: System) -> bool:
    """Inverse-free form of the gauge relations: A~ G = delta(G) + G A, B~ G = sigma(G) B."""
    case = system.case
    if isinstance(system, DDSystem):
        if not isinstance(target, DDSystem):
            return False
        return (
            target.A * G == delta_matrix(G, case) + G * system.A
            and target.B * G == sigma_matrix(G, case) * system.B
        )
    if not isinstance(target, SigmaSigmaSystem):
        return False
    return (
        target.B1 * G == sigma_matrix(G, case, 1) * system.B1
        and target.B2 * G == sigma_matrix(G, case, 2) * system.B2
    )


@dataclass(frozen=True)
class GaugeCertificate:
    """Witness that ``gauge`` sends ``source`` (in x) to ``target`` (in t, x = t**ramification)."""

    gauge: RatMatrix
    ramification: int
    source: System
    target: System

    def verify(self) -> bool:
        """Re-check the defining relations exactly."""
        if not self.gauge.is_invertible():
            return False
        lifted = lift_system(self.source, self.ramification)
        return _relations_hold(lifted, self.gauge, self.target)

    def require(self) -> "GaugeCertificate":
        if not self.verify():
            logger.error("Gauge certificate failed re-verification")
            raise InternalConsistencyError("gauge certificate does not verify")
        return self


def identity_certificate(system: System) -> GaugeCertificate:
    return GaugeCertificate(RatMatrix.identity(system.field, system.n), 1, system, system)


def _gauge(system: System, G: RatMatrix, ramification: int) -> tuple[System, GaugeCertificate]:
    lifted = lift_system(system, ramification)
    if G.shape != (system.n, system.n):
        raise InputError(f"gauge must be {system.n}x{system.n}, got {G.shape}", field="G")
    try:
        G_inv = invert_matrix(G)
    except NotInvertibleError:
        logger.error("Gauge transformation with a singular matrix")
        raise
    target = _transform(lifted, G, G_inv)
    if check_consistency(lifted).consistent and not check_consistency(target).consistent:
        raise InternalConsistencyError("gauge transformation broke consistency")
    return target, GaugeCertificate(G, ramification, system, target)


def gauge_dd(system: DDSystem, G: RatMatrix, ramification: int = 1) -> tuple[DDSystem, GaugeCertificate]:
    """Transform a delta/sigma pair by Z = G Y.

    Args:
        system: Source system in x.
        G: Invertible gauge matrix (in t when ramification > 1).
        ramification: N with x = t**N; Mahler case only when > 1.

    Returns:
        The transformed system and its certificate.
    """
    if not isinstance(system, DDSystem):
        raise InputError("gauge_dd needs a delta/sigma system")
    return _gauge(system, G, ramification)


def gauge_ss(
    system: SigmaSigmaSystem, G: RatMatrix, ramification: int = 1
) -> tuple[SigmaSigmaSystem, GaugeCertificate]:
    """Transform a two-sigma pair by Z = G Y."""
    if not isinstance(system, SigmaSigmaSystem):
        raise InputError("gauge_ss needs a two-sigma system")
    return _gauge(system, G, ramification)


def gauge(system: System, G: RatMatrix, ramification: int = 1) -> tuple[System, GaugeCertificate]:
    return _gauge(system, G, ramification)


def compose_certificates(first: GaugeCertificate, second: GaugeCertificate) -> GaugeCertificate:
    """Chain source -(G1)-> middle -(G2)-> target into one certificate.

    With x = t1**N1 and t1 = t2**N2 the composite gauge is G2(t2) G1(t2**N2) over x = t2**(N1 N2).
    """
    if second.source != first.target:
        raise SystemsError("certificates do not chain: middle systems differ")
    G1 = first.gauge.substitute_power(second.ramification) if second.ramification > 1 else first.gauge
    composite = GaugeCertificate(
        second.gauge * G1,
        first.ramification * second.ramification,
        first.source,
        second.target,
    )
    return composite.require()


def sigma_shift_system(system: System, N: int) -> tuple[System, GaugeCertificate]:
    """Gauge by the N-fold sigma product so that the system becomes its sigma**N image.

    For delta/sigma pairs G = sigma**(N-1)(B) ... sigma(B) B and the target is
    (mu**N sigma**N(A), sigma**N(B)); for two-sigma pairs the product uses B2 and the target is
    (sigma_2**N(B1), sigma_2**N(B2)).

    Raises:
        InconsistentSystemError: The input is not consistent.
    """
    if N < 1:
        raise InputError(f"shift count must be positive, got {N}", field="N")
    report = check_consistency(system)
    if not report.consistent:
        logger.error("sigma_shift_system called on an inconsistent system")
        raise InconsistentSystemError("sigma shift needs a consistent system", report.residual)

    case = system.case
    if isinstance(system, DDSystem):
        index, step = 1, system.B
    else:
        index, step = 2, system.B2
    G = step
    for k in range(1, N):
        G = sigma_power_matrix(step, case, index, k) * G

    target, certificate = _gauge(system, G, 1)
    if isinstance(system, DDSystem):
        expected = DDSystem(
            case,
            sigma_power_matrix(system.A, case, 1, N) * case.field.power(case.mu, N),
            sigma_power_matrix(system.B, case, 1, N),
        )
    else:
        expected = SigmaSigmaSystem(
            case,
            sigma_power_matrix(system.B1, case, 2, N),
            sigma_power_matrix(system.B2, case, 2, N),
        )
    if target != expected:
        raise InternalConsistencyError("sigma shift disagrees with the gauge by the sigma product")
    logger.info(f"Shifted {system.n}-dimensional system by sigma^{N}")
    return target, certificate

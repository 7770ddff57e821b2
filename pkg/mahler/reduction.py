"""Two commuting constant matrices for a consistent 2M pair."""

from config.logging_config import get_logger
from core.exceptions import InputError, InternalConsistencyError
from core.types import CaseKind
from exact.matrix import ConstMatrix
from systems.consistency import constant_pair
from systems.gauge import GaugeCertificate
from systems.systems import SigmaSigmaSystem

from .regular_singular import regular_singular_reduce

logger = get_logger(__name__)


def reduce_2m_constants(
    system: SigmaSigmaSystem, order: int | None = None, max_order: int | None = None
) -> tuple[ConstMatrix, ConstMatrix, GaugeCertificate]:
    """Constant commuting (B1, B2) gauge-equivalent to a consistent 2M pair.

    Args:
        system: Consistent pair over x.
        order: Starting series order of the fixed-point reconstructions.
        max_order: Cap for order doubling.

    Returns:
        The constant matrices and the certificate of the gauge (in t with x = t**N).
    """
    if not isinstance(system, SigmaSigmaSystem) or system.case.kind != CaseKind.TWO_M:
        raise InputError("constant reduction needs a 2M pair", field="case")
    reduced, certificate = regular_singular_reduce(system, order, max_order)
    B1, B2 = constant_pair(reduced)
    if not B1.commutes_with(B2):
        raise InternalConsistencyError("reduced constant matrices do not commute")
    logger.info(f"2M pair of dimension {system.n} reduced to commuting constants")
    return B1, B2, certificate

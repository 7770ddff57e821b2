"""Core package with shared models, types, and exceptions."""

from .exceptions import (
    BuilderError,
    ExactArithmeticError,
    InputError,
    InternalConsistencyError,
    MahlerEngineError,
    OperatorError,
    PairsError,
    ResourceCapError,
    SolverError,
    SystemsError,
)
from .models import (
    CaseModel,
    ConstantsHeader,
    DFAOFile,
    GaugeFile,
    GaugeSpec,
    OperatorFile,
    ReconstructionBudget,
    ResultEnvelope,
    SeriesFile,
    SystemFile,
)
from .types import CaseKind, ExitCode, OperatorKind, ReductionOutcome, SeriesPoint, Verdict

__all__ = [
    # Exceptions
    "PairsError",
    "ExactArithmeticError",
    "OperatorError",
    "SystemsError",
    "BuilderError",
    "MahlerEngineError",
    "SolverError",
    "InputError",
    "ResourceCapError",
    "InternalConsistencyError",
    # Models
    "ConstantsHeader",
    "CaseModel",
    "OperatorFile",
    "SystemFile",
    "SeriesFile",
    "GaugeFile",
    "DFAOFile",
    "ResultEnvelope",
    "ReconstructionBudget",
    "GaugeSpec",
    # Types
    "CaseKind",
    "OperatorKind",
    "SeriesPoint",
    "ReductionOutcome",
    "Verdict",
    "ExitCode",
]

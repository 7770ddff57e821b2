"""Custom exception hierarchy for the consistent-pairs toolkit."""

from typing import Any


class PairsError(Exception):
    """Base exception for all library errors."""

    def __init__(self, message: str, component: str = "Unknown"):
        self.component = component
        self.message = message
        super().__init__(f"[{component}] {message}")


class ExactArithmeticError(PairsError):
    """Exception raised by the exact arithmetic core."""

    def __init__(self, message: str):
        super().__init__(message, component="ExactCore")


class OperatorError(PairsError):
    """Exception raised by operator cases and scalar operators."""

    def __init__(self, message: str):
        super().__init__(message, component="Operators")


class SystemsError(PairsError):
    """Exception raised by first-order systems and gauge calculus."""

    def __init__(self, message: str):
        super().__init__(message, component="Systems")


class BuilderError(PairsError):
    """Exception raised while constructing systems or annihilators."""

    def __init__(self, message: str):
        super().__init__(message, component="Builder")


class MahlerEngineError(PairsError):
    """Exception raised by the Mahler reduction engine."""

    def __init__(self, message: str):
        super().__init__(message, component="MahlerEngine")


class SolverError(PairsError):
    """Exception raised by series extension and rational reconstruction."""

    def __init__(self, message: str):
        super().__init__(message, component="Solver")


class InputError(PairsError):
    """Exception raised when input validation fails."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(
            f"{message}" + (f" (field: {field})" if field else ""), component="Input"
        )


class ResourceCapError(PairsError):
    """Exception raised when a configured order or step cap is exhausted."""

    def __init__(self, message: str, limit: int = 0):
        self.limit = limit
        super().__init__(
            f"{message} (limit: {limit})" if limit else message, component="Resources"
        )


class InternalConsistencyError(PairsError):
    """Exception raised when a self-check of the library fails (a bug, not bad input)."""

    def __init__(self, message: str):
        super().__init__(message, component="Internal")


# Exact core

class ZeroDenominatorError(InputError):
    """Exception raised for a rational function with zero denominator."""

    def __init__(self, message: str = "zero denominator"):
        super().__init__(message, field="den")


class NotInvertibleError(ExactArithmeticError):
    """Exception raised when a matrix is singular."""

    def __init__(self, message: str, det: Any = None):
        self.det = det
        super().__init__(f"not invertible: {message}")


class SpectrumNotSplitError(ExactArithmeticError):
    """Exception raised when a characteristic polynomial has no complete set of roots."""

    def __init__(self, message: str, charpoly: Any = None):
        self.charpoly = charpoly
        super().__init__(f"spectrum does not split: {message}")


class InsufficientOrderError(ExactArithmeticError):
    """Exception raised when a truncation is too short to certify any coefficient."""

    def __init__(self, message: str, order: int | None = None):
        self.order = order
        super().__init__(f"insufficient order: {message}")


# Operators

class NoDerivationError(OperatorError):
    """Exception raised when a derivation is requested in a two-sigma case."""

    def __init__(self, case: str):
        self.case = case
        super().__init__(f"no derivation in case {case}")


class SigmaNotInvertibleError(OperatorError):
    """Exception raised when sigma inverse is requested in a Mahler case."""

    def __init__(self, case: str):
        self.case = case
        super().__init__(f"sigma is not invertible in case {case}")


class AlreadyHomogeneousError(OperatorError):
    """Exception raised when homogenizing with a zero right-hand side."""

    def __init__(self):
        super().__init__("already homogeneous")


class UndeclaredConstantError(OperatorError):
    """Exception raised when a transcendental constant is needed but not declared."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"undeclared transcendental constant {name}")


# Systems

class InconsistentSystemError(SystemsError):
    """Exception raised when an operation requires a consistent system."""

    def __init__(self, message: str, residual: Any = None):
        self.residual = residual
        super().__init__(f"inconsistent system: {message}")


# Builder

class DegenerateOperatorPairError(BuilderError):
    """Exception raised when the built sigma matrix is singular."""

    def __init__(self, message: str, kernel: Any = None):
        self.kernel = kernel
        super().__init__(f"degenerate operator pair: {message}")


class TrailingCoefficientError(BuilderError):
    """Exception raised for a vanishing trailing coefficient in a Mahler sigma-operator."""

    def __init__(self, message: str):
        super().__init__(message)


# Mahler engine

class SingularAnchorError(MahlerEngineError):
    """Exception raised when A(0) is singular or A has a pole at 0."""

    def __init__(self, message: str):
        super().__init__(message)


class InsufficientSeedError(MahlerEngineError):
    """Exception raised when a seed truncation is too short for the fixed point to contract."""

    def __init__(self, message: str, valuation: int | None = None):
        self.valuation = valuation
        super().__init__(f"increase seed truncation M: {message}")


class TriangularPreconditionError(MahlerEngineError):
    """Exception raised when the lower triangular preprocessing is unavailable."""

    def __init__(self, message: str):
        super().__init__(f"triangular preprocessing unavailable: {message}")


class PolarPartError(MahlerEngineError):
    """Exception raised when a polar part cannot be removed."""

    def __init__(self, message: str):
        super().__init__(message)


# Solver

class ResonanceError(SolverError):
    """Exception raised when a coefficient recurrence stalls."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(f"resonance at index {index}" + (f": {message}" if message else ""))


class InconsistentSeedError(SolverError):
    """Exception raised when a seed contradicts an operator."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(
            f"seed inconsistent with operator at index {index}"
            + (f": {message}" if message else "")
        )


class TruncationInsufficientError(SolverError):
    """Exception raised when doubling the order up to the cap did not certify a result."""

    def __init__(self, message: str, order: int = 0):
        self.order = order
        super().__init__(f"truncation insufficient: {message} (order: {order})")

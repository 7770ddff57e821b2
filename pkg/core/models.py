"""Pydantic models for input files, result envelopes and numeric budgets."""

import re
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from .types import CaseKind, OperatorKind, SeriesPoint

FORMAT_NAME = "mahlerpairs"
FORMAT_VERSION = 1
RESERVED_NAMES = ("x", "t", "xi")

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ConstantsHeader(BaseModel):
    """Versioned header shared by every file: format tag and declared constants."""

    format: Literal["mahlerpairs"] = Field(default=FORMAT_NAME, description="Format tag")
    version: Literal[1] = Field(default=FORMAT_VERSION, description="Format version")
    constants: List[str] = Field(
        default_factory=list, description="Names of transcendental generators of the constants field"
    )

    @field_validator("constants")
    @classmethod
    def _check_names(cls, names: List[str]) -> List[str]:
        for name in names:
            if not _IDENTIFIER.match(name):
                raise ValueError(f"constant name {name!r} is not an identifier")
            if name in RESERVED_NAMES:
                raise ValueError(f"constant name {name!r} is reserved for a variable")
        if len(set(names)) != len(names):
            raise ValueError("duplicate constant names")
        return names


class CaseModel(BaseModel):
    """Operator case with its parameters as constant expressions."""

    kind: CaseKind = Field(..., description="Case tag: S, Q, M, 2S, 2Q or 2M")
    q: Optional[str] = Field(None, description="Dilation (Q) or Mahler exponent (M)")
    q1: Optional[str] = Field(None, description="First parameter of 2Q or 2M")
    q2: Optional[str] = Field(None, description="Second parameter of 2Q or 2M")
    alpha: Optional[str] = Field(None, description="Second shift of 2S")
    irrational: bool = Field(default=False, description="Declare alpha irrational")

    class Config:
        json_schema_extra = {"example": {"kind": "2M", "q1": "2", "q2": "3"}}

    @model_validator(mode="after")
    def _check_parameters(self) -> "CaseModel":
        needed = {
            CaseKind.S: (),
            CaseKind.Q: ("q",),
            CaseKind.M: ("q",),
            CaseKind.TWO_S: ("alpha",),
            CaseKind.TWO_Q: ("q1", "q2"),
            CaseKind.TWO_M: ("q1", "q2"),
        }[self.kind]
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise ValueError(f"case {self.kind.value} needs {', '.join(missing)}")
        return self


class OperatorFile(ConstantsHeader):
    """A scalar operator sum_i coeffs[i] * op**i."""

    document: Literal["operator"] = "operator"
    case: CaseModel
    operator: OperatorKind = Field(..., description="delta, sigma1 or sigma2")
    coeffs: List[str] = Field(..., min_length=2, description="Rational-function coefficients, ascending")

    class Config:
        json_schema_extra = {
            "example": {
                "format": "mahlerpairs",
                "version": 1,
                "constants": [],
                "document": "operator",
                "case": {"kind": "M", "q": "2"},
                "operator": "sigma1",
                "coeffs": ["x", "-(1+x)", "1"],
            }
        }


class SystemFile(ConstantsHeader):
    """A first-order system pair: A and B, or B1 and B2."""

    document: Literal["system"] = "system"
    case: CaseModel
    matrices: Dict[str, List[List[str]]] = Field(..., description="Matrices by name")
    basis: Optional[List[Dict[str, Any]]] = Field(None, description="Generator manifest of built systems")

    @model_validator(mode="after")
    def _check_matrix_names(self) -> "SystemFile":
        names = set(self.matrices)
        expected = {"B1", "B2"} if self.case.kind.value.startswith("2") else {"A", "B"}
        if names != expected:
            raise ValueError(f"case {self.case.kind.value} needs matrices {sorted(expected)}")
        return self


class SeriesFile(ConstantsHeader):
    """A truncated series: coefficients for indices valuation..order in units of 1/ramification."""

    document: Literal["series"] = "series"
    point: SeriesPoint = Field(default=SeriesPoint.ZERO)
    valuation: int = 0
    order: int = Field(..., description="Largest exact index")
    ramification: int = Field(default=1, ge=1)
    coeffs: List[str] = Field(default_factory=list)


class GaugeFile(ConstantsHeader):
    """A gauge matrix in t with x = t**ramification."""

    document: Literal["gauge"] = "gauge"
    gauge: List[List[str]]
    ramification: int = Field(default=1, ge=1)


class DFAOFile(ConstantsHeader):
    """A deterministic finite automaton with binary output reading base-k digits."""

    document: Literal["dfao"] = "dfao"
    base: int = Field(..., ge=2, description="Digit base k")
    transitions: List[List[int]] = Field(..., min_length=1, description="state x digit -> state")
    outputs: List[int] = Field(..., description="Output bit per state")
    initial: int = Field(default=0, ge=0)
    lsd_first: bool = Field(default=True, description="Digits are read least significant first")

    class Config:
        json_schema_extra = {
            "example": {
                "document": "dfao",
                "base": 2,
                "transitions": [[0, 1], [1, 2], [2, 2]],
                "outputs": [0, 1, 0],
                "initial": 0,
                "lsd_first": True,
            }
        }

    @model_validator(mode="after")
    def _check_tables(self) -> "DFAOFile":
        states = len(self.transitions)
        for row in self.transitions:
            if len(row) != self.base:
                raise ValueError("every state needs one transition per digit")
            if any(s < 0 or s >= states for s in row):
                raise ValueError("transition to an unknown state")
        if len(self.outputs) != states:
            raise ValueError("one output per state required")
        if any(o not in (0, 1) for o in self.outputs):
            raise ValueError("outputs must be 0 or 1")
        if self.initial >= states:
            raise ValueError("initial state out of range")
        return self


class ResultEnvelope(ConstantsHeader):
    """Output document of a command."""

    document: Literal["result"] = "result"
    command: str = Field(..., description="Subcommand that produced the result")
    verdict: str = Field(..., description="User-visible verdict")
    exit_code: int = Field(..., ge=0, le=3)
    data: Dict[str, Any] = Field(default_factory=dict)


class ReconstructionBudget(BaseModel):
    """Series order, Pade degree bound and the doubling cap of a reconstruction."""

    order: int = Field(default=16, gt=0, description="Series order N")
    max_degree: int = Field(default=4, ge=0, description="Numerator/denominator degree bound D")
    max_order: int = Field(default=1024, gt=0, description="Cap for order doubling")

    @model_validator(mode="after")
    def _check_overdetermined(self) -> "ReconstructionBudget":
        if self.max_degree > self.order // 2 - 1:
            raise ValueError(
                f"degree bound {self.max_degree} needs order at least {2 * self.max_degree + 2}"
            )
        if self.max_order < self.order:
            raise ValueError("max_order must be at least order")
        return self

    def doubled(self) -> "ReconstructionBudget":
        """Next attempt: order and degree bound both doubled."""
        order = 2 * self.order
        degree = min(max(2 * self.max_degree, 1), order // 2 - 1)
        return ReconstructionBudget(order=order, max_degree=degree, max_order=max(self.max_order, order))


class GaugeSpec(BaseModel):
    """Distribution of random gauges for planted instances."""

    shape: Literal["identity", "lower", "general"] = Field(
        default="lower", description="Identity, lower unipotent or general unipotent products"
    )
    factors: int = Field(default=3, ge=0, description="Number of elementary factors")
    degree: int = Field(default=2, ge=0, description="Degree bound of factor entries")
    height: int = Field(default=3, ge=1, description="Bound on integer coefficients")
    monomial_diagonal: bool = Field(default=False, description="Append a diagonal of x powers")

"""Reading and writing the versioned JSON documents of the command line."""

import json
from pathlib import Path
from typing import Any, Sequence, TypeVar

from pydantic import BaseModel, ValidationError
from sympy import Float, Poly, Symbol, fraction, nan, oo, sympify, together, zoo

from config.logging_config import get_logger
from core.exceptions import InputError, NotInvertibleError, ZeroDenominatorError
from core.models import (
    CaseModel,
    ConstantsHeader,
    GaugeFile,
    OperatorFile,
    SeriesFile,
    SystemFile,
)
from core.types import CaseKind
from exact.constants import ConstantsField, constants_field
from exact.matrix import ConstMatrix, RatMatrix
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc
from operators.cases import OperatorCase
from operators.scalar import ScalarOperator
from systems.systems import DDSystem, SigmaSigmaSystem, System

logger = get_logger(__name__)

D = TypeVar("D", bound=BaseModel)

_X = Symbol("x")
_T = Symbol("t")


def read_document(path: Path | str, model: type[D]) -> D:
    """Parse and validate one JSON document.

    Raises:
        InputError: The file is missing, is not JSON, or violates the schema.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}", field="path")
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise InputError(f"{path} is not a valid {model.__name__}: {e.errors()[0]['msg']}", field="path")


def dumps(document: BaseModel | dict) -> str:
    """Canonical UTF-8 JSON: indent 2, sorted keys, trailing newline."""
    payload = document.model_dump(mode="json") if isinstance(document, BaseModel) else document
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text(path: Path | str | None, text: str) -> None:
    """Write to a file, or to stdout when no path is given."""
    if path is None:
        print(text, end="")
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def field_of(header: ConstantsHeader) -> ConstantsField:
    return constants_field(tuple(header.constants))


def common_field(headers: Sequence[ConstantsHeader]) -> ConstantsField:
    names = {tuple(h.constants) for h in headers}
    if len(names) != 1:
        raise InputError("input files declare different constants", field="constants")
    return field_of(headers[0])


# Rational functions


def parse_ratfunc(field: ConstantsField, text: str) -> RatFunc:
    """Parse a rational function of x (t is accepted for ramified gauges).

    Raises:
        ZeroDenominatorError: The expression divides by zero.
        InputError: The expression is malformed or not rational in x over the field.
    """
    names = {name: symbol for name, symbol in zip(field.names, field.symbols)}
    names.update({"x": _X, "t": _X})
    try:
        expr = sympify(text, locals=names, rational=True)
    except Exception as e:
        raise InputError(f"malformed rational function {text!r}: {e}")
    if expr.has(zoo, nan, oo, -oo):
        raise ZeroDenominatorError(f"zero denominator in {text!r}")
    if expr.has(Float):
        raise InputError(f"floating-point coefficient in {text!r}")
    num, den = fraction(together(expr))
    try:
        coeffs = [
            [field.domain.from_sympy(c) for c in reversed(Poly(part, _X).all_coeffs())]
            for part in (num, den)
        ]
    except Exception as e:
        raise InputError(f"{text!r} is not a rational function of x over the declared constants: {e}")
    if not any(coeffs[1]):
        raise ZeroDenominatorError(f"zero denominator in {text!r}")
    return RatFunc.from_coefficients(field, coeffs[0], coeffs[1])


def format_ratfunc(f: RatFunc, variable: str = "x") -> str:
    """Canonical text of a rational function, optionally in the ramified variable t."""
    text = str(f)
    if variable == "x":
        return text
    num = f.num.as_expr().subs(_X, _T)
    if f.is_polynomial():
        return str(num)
    return f"({num})/({f.den.as_expr().subs(_X, _T)})"


def parse_matrix(field: ConstantsField, rows: Sequence[Sequence[str]]) -> RatMatrix:
    if not rows or len({len(row) for row in rows}) != 1:
        raise InputError("matrix rows must be nonempty and of equal length", field="matrices")
    return RatMatrix(field, [[parse_ratfunc(field, e) for e in row] for row in rows])


def format_matrix(matrix: RatMatrix | ConstMatrix, variable: str = "x") -> list[list[str]]:
    if isinstance(matrix, ConstMatrix):
        return [[matrix.field.format(e) for e in row] for row in matrix.rows]
    return [[format_ratfunc(e, variable) for e in row] for row in matrix.rows]


# Cases, operators and systems


def _integer(field: ConstantsField, text: str, name: str) -> int:
    value = field.as_integer(field.parse(text))
    if value is None:
        raise InputError(f"{name} must be an integer, got {text!r}", field=name)
    return value


def case_from_model(model: CaseModel, field: ConstantsField) -> OperatorCase:
    kind = model.kind
    if kind == CaseKind.S:
        return OperatorCase.shift(field)
    if kind == CaseKind.Q:
        return OperatorCase.q_dilation(field, field.parse(model.q))
    if kind == CaseKind.M:
        return OperatorCase.mahler(field, _integer(field, model.q, "q"))
    if kind == CaseKind.TWO_S:
        return OperatorCase.two_shift(field, field.parse(model.alpha), model.irrational)
    if kind == CaseKind.TWO_Q:
        return OperatorCase.two_q(field, field.parse(model.q1), field.parse(model.q2))
    return OperatorCase.two_mahler(field, _integer(field, model.q1, "q1"), _integer(field, model.q2, "q2"))


def case_to_model(case: OperatorCase) -> CaseModel:
    fmt = case.field.format
    kind = case.kind
    if kind == CaseKind.Q:
        return CaseModel(kind=kind, q=fmt(case.q))
    if kind == CaseKind.M:
        return CaseModel(kind=kind, q=str(case.q))
    if kind == CaseKind.TWO_S:
        return CaseModel(kind=kind, alpha=fmt(case.alpha), irrational=case.irrational)
    if kind == CaseKind.TWO_Q:
        return CaseModel(kind=kind, q1=fmt(case.q1), q2=fmt(case.q2))
    if kind == CaseKind.TWO_M:
        return CaseModel(kind=kind, q1=str(case.q1), q2=str(case.q2))
    return CaseModel(kind=kind)


def operator_from_file(document: OperatorFile, field: ConstantsField | None = None) -> ScalarOperator:
    field = field or field_of(document)
    case = case_from_model(document.case, field)
    coeffs = [parse_ratfunc(field, c) for c in document.coeffs]
    return ScalarOperator.build(case, document.operator, coeffs)


def operator_to_file(op: ScalarOperator) -> OperatorFile:
    return OperatorFile(
        constants=list(op.field.names),
        case=case_to_model(op.case),
        operator=op.kind,
        coeffs=[format_ratfunc(c) for c in op.coeffs],
    )


def system_from_file(document: SystemFile, field: ConstantsField | None = None) -> System:
    field = field or field_of(document)
    case = case_from_model(document.case, field)
    mats = {name: parse_matrix(field, rows) for name, rows in document.matrices.items()}
    try:
        if case.is_two_sigma:
            return SigmaSigmaSystem(case, mats["B1"], mats["B2"])
        return DDSystem(case, mats["A"], mats["B"])
    except NotInvertibleError as e:
        raise InputError(f"system file has a singular sigma-matrix: {e}", field="matrices")


def system_to_file(
    system: System, basis: list[dict[str, Any]] | None = None, variable: str = "x"
) -> SystemFile:
    return SystemFile(
        constants=list(system.field.names),
        case=case_to_model(system.case),
        matrices={name: format_matrix(m, variable) for name, m in system.matrices().items()},
        basis=basis,
    )


def series_from_file(document: SeriesFile, field: ConstantsField | None = None) -> PuiseuxSeriesTrunc:
    field = field or field_of(document)
    return PuiseuxSeriesTrunc(
        field,
        [field.parse(c) for c in document.coeffs],
        document.valuation,
        document.order,
        document.ramification,
        document.point,
    )


def series_to_file(s: PuiseuxSeriesTrunc) -> SeriesFile:
    field = s.field
    coeffs = [field.format(c) for c in s.coeffs] if s.coeffs else []
    valuation = s.valuation if s.coeffs else s.order + 1
    return SeriesFile(
        constants=list(field.names),
        point=s.point,
        valuation=valuation,
        order=s.order,
        ramification=s.ramification,
        coeffs=coeffs,
    )


def gauge_from_file(document: GaugeFile, field: ConstantsField | None = None) -> tuple[RatMatrix, int]:
    field = field or field_of(document)
    return parse_matrix(field, document.gauge), document.ramification


def gauge_to_file(matrix: RatMatrix, ramification: int) -> GaugeFile:
    return GaugeFile(
        constants=list(matrix.field.names),
        gauge=format_matrix(matrix, "t" if ramification > 1 else "x"),
        ramification=ramification,
    )

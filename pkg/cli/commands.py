"""Subcommand handlers and the exit-code contract.

Every handler returns a verdict, an exit code and a JSON-ready payload; ``run_command`` wraps
them in a ResultEnvelope and maps library errors onto exit codes:
0 success, 1 valid input with a negative answer, 2 input error, 3 resource cap.
"""

import argparse
from typing import Any, Callable

from pydantic import ValidationError

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import (
    InconsistentSystemError,
    InputError,
    PairsError,
    ResourceCapError,
    TruncationInsufficientError,
)
from core.models import (
    CaseModel,
    DFAOFile,
    GaugeFile,
    GaugeSpec,
    OperatorFile,
    ReconstructionBudget,
    ResultEnvelope,
    SeriesFile,
    SystemFile,
)
from core.types import CaseKind, ExitCode, OperatorKind, Verdict
from builder.construct import build_dd_system, build_ss_system
from exact.constants import constants_field
from mahler.nilpotent import log_normalize, nilpotent_normalize
from mahler.reduction import reduce_2m_constants
from mahler.regular_singular import regular_singular_reduce
from solver.instances import gen_instance
from solver.rational import solve_rational
from systems.consistency import check_consistency, verify_reduced_form
from systems.gauge import compose_certificates, gauge, sigma_shift_system
from systems.systems import DDSystem, SigmaSigmaSystem

from .automaton import DFAO, automaton_to_mahler
from .io import (
    case_from_model,
    common_field,
    field_of,
    format_matrix,
    gauge_from_file,
    gauge_to_file,
    operator_from_file,
    operator_to_file,
    read_document,
    series_from_file,
    system_from_file,
    system_to_file,
)

logger = get_logger(__name__)

Outcome = tuple[Verdict | str, ExitCode, dict[str, Any]]


def _variable(ramification: int) -> str:
    return "t" if ramification > 1 else "x"


def _dump(model) -> dict[str, Any]:
    return model.model_dump(mode="json")


def cmd_check(args: argparse.Namespace) -> Outcome:
    system = system_from_file(read_document(args.system, SystemFile))
    report = check_consistency(system)
    data: dict[str, Any] = {"dimension": system.n, "case": system.case.describe()}
    if not report.consistent:
        data["residual"] = format_matrix(report.residual)
        return Verdict.INCONSISTENT, ExitCode.NEGATIVE, data
    if args.reduced:
        if not isinstance(system, DDSystem):
            raise InputError("reduced-form checks apply to delta/sigma pairs", field="reduced")
        reduced = verify_reduced_form(system)
        data["violations"] = list(reduced.violations)
        code = ExitCode.SUCCESS if reduced.verified else ExitCode.NEGATIVE
        return reduced.verdict, code, data
    return Verdict.CONSISTENT, ExitCode.SUCCESS, data


def cmd_build(args: argparse.Namespace) -> Outcome:
    documents = [read_document(path, OperatorFile) for path in args.operators]
    field = common_field(documents)
    ops = sorted(
        (operator_from_file(d, field) for d in documents),
        key=lambda op: [OperatorKind.DELTA, OperatorKind.SIGMA1, OperatorKind.SIGMA2].index(op.kind),
    )
    if ops[0].case != ops[1].case:
        raise InputError("operators belong to different cases", field="case")
    if ops[0].case.is_two_sigma:
        system, basis = build_ss_system(ops[0], ops[1])
    else:
        system, basis = build_dd_system(ops[0], ops[1])
    data = {"dimension": system.n, "system": _dump(system_to_file(system, basis.manifest()))}
    return Verdict.CONSISTENT, ExitCode.SUCCESS, data


def cmd_gauge(args: argparse.Namespace) -> Outcome:
    system_doc = read_document(args.system, SystemFile)
    gauge_doc = read_document(args.gauge, GaugeFile)
    field = common_field([system_doc, gauge_doc])
    system = system_from_file(system_doc, field)
    G, ramification = gauge_from_file(gauge_doc, field)
    target, certificate = gauge(system, G, ramification)
    certificate.require()
    data = {
        "system": _dump(system_to_file(target, variable=_variable(ramification))),
        "gauge": _dump(gauge_to_file(G, ramification)),
    }
    return Verdict.VERIFIED, ExitCode.SUCCESS, data


def cmd_shift(args: argparse.Namespace) -> Outcome:
    system = system_from_file(read_document(args.system, SystemFile))
    target, certificate = sigma_shift_system(system, args.count)
    data = {
        "system": _dump(system_to_file(target)),
        "gauge": _dump(gauge_to_file(certificate.gauge, 1)),
    }
    return Verdict.VERIFIED, ExitCode.SUCCESS, data


def cmd_reduce(args: argparse.Namespace) -> Outcome:
    system = system_from_file(read_document(args.system, SystemFile))
    kind = system.case.kind
    if isinstance(system, SigmaSigmaSystem) and kind == CaseKind.TWO_M:
        B1, B2, certificate = reduce_2m_constants(system, args.order, args.max_order)
        constants = {"B1": format_matrix(B1), "B2": format_matrix(B2)}
        extra: dict[str, Any] = {}
    elif isinstance(system, DDSystem) and kind == CaseKind.M:
        reduced, certificate = regular_singular_reduce(system, args.order, args.max_order)
        A, B, normal = nilpotent_normalize(reduced)
        certificate = compose_certificates(certificate, normal)
        log_gauge = log_normalize(A, B, system.case.q)
        constants = {"A": format_matrix(A), "B": format_matrix(B)}
        extra = {"log_gauge": [format_matrix(c) for c in log_gauge.coefficients]}
    else:
        raise InputError(f"constant reduction is implemented for cases M and 2M, not {kind.value}", field="case")
    data = {
        "constants": constants,
        "gauge": _dump(gauge_to_file(certificate.gauge, certificate.ramification)),
        "ramification": certificate.ramification,
        **extra,
    }
    return Verdict.VERIFIED, ExitCode.SUCCESS, data


def cmd_solve_rational(args: argparse.Namespace) -> Outcome:
    documents = [read_document(path, OperatorFile) for path in args.operators]
    seed_doc = read_document(args.seed, SeriesFile)
    field = common_field([*documents, seed_doc])
    ops = [operator_from_file(d, field) for d in documents]
    seed = series_from_file(seed_doc, field)

    settings = get_settings()
    order = args.order or settings.default_order
    try:
        budget = ReconstructionBudget(
            order=order,
            max_degree=args.max_degree if args.max_degree is not None else min(settings.pade_start_degree, order // 2 - 1),
            max_order=args.max_order or max(settings.max_order, order),
        )
    except ValidationError as e:
        raise InputError(f"invalid reconstruction budget: {e.errors()[0]['msg']}", field="budget")
    result = solve_rational(ops, seed, budget, use_denominator_hint=args.denominator_hint)
    data = {"order": result.order, "degree": result.degree}
    if result.certified:
        data["value"] = str(result.value)
        return result.verdict, ExitCode.SUCCESS, data
    return result.verdict, ExitCode.NEGATIVE, data


def cmd_gen(args: argparse.Namespace) -> Outcome:
    field = constants_field(tuple(args.constants or ()))
    try:
        case_model = CaseModel(kind=args.case, q=args.q, q1=args.q1, q2=args.q2, alpha=args.alpha, irrational=args.irrational)
        spec = GaugeSpec(
            shape=args.gauge_shape,
            factors=args.factors,
            degree=args.degree,
            height=args.height,
            monomial_diagonal=args.monomial_diagonal,
        )
    except ValidationError as e:
        raise InputError(f"invalid generator flags: {e.errors()[0]['msg']}", field="case")
    case = case_from_model(case_model, field)
    system, certificate = gen_instance(case, args.n, gauge_spec=spec, seed=args.seed)
    data = {
        "system": _dump(system_to_file(system)),
        "planted": _dump(system_to_file(certificate.source)),
        "gauge": _dump(gauge_to_file(certificate.gauge, 1)),
        "seed": args.seed,
    }
    return Verdict.CONSISTENT, ExitCode.SUCCESS, data


def cmd_automaton(args: argparse.Namespace) -> Outcome:
    document = read_document(args.dfao, DFAOFile)
    relation = automaton_to_mahler(DFAO.from_file(document), field_of(document))
    data: dict[str, Any] = {
        "states": relation.automaton.size,
        "relation": format_matrix(relation.relation),
    }
    if relation.sigma_matrix is not None:
        data["sigma_matrix"] = format_matrix(relation.sigma_matrix)
    if relation.operator is not None:
        data["operator"] = _dump(operator_to_file(relation.operator))
    code = ExitCode.SUCCESS if relation.verdict == Verdict.VERIFIED else ExitCode.NEGATIVE
    return relation.verdict, code, data


HANDLERS: dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "check": cmd_check,
    "build": cmd_build,
    "gauge": cmd_gauge,
    "shift": cmd_shift,
    "reduce": cmd_reduce,
    "solve-rational": cmd_solve_rational,
    "gen": cmd_gen,
    "automaton": cmd_automaton,
}


def run_command(args: argparse.Namespace) -> tuple[ExitCode, ResultEnvelope]:
    """Dispatch a parsed invocation and build its result envelope.

    Args:
        args: Namespace from the argument parser; ``args.command`` names the handler.

    Returns:
        The exit code and the envelope to write.
    """
    handler = HANDLERS[args.command]
    try:
        verdict, code, data = handler(args)
    except InputError as e:
        logger.error(f"Input error in {args.command}: {e}")
        verdict, code, data = "input-error", ExitCode.INPUT_ERROR, {"error": str(e)}
    except ResourceCapError as e:
        logger.error(f"Resource cap hit in {args.command}: {e}")
        verdict, code, data = "resource-cap", ExitCode.RESOURCE_CAP, {"error": str(e), "limit": e.limit}
    except TruncationInsufficientError as e:
        logger.warning(f"{args.command} not certified: {e}")
        verdict, code, data = Verdict.NOT_CERTIFIED, ExitCode.NEGATIVE, {"error": str(e), "order": e.order}
    except InconsistentSystemError as e:
        logger.warning(f"{args.command} rejected an inconsistent system: {e}")
        data = {"error": str(e)}
        if e.residual is not None:
            data["residual"] = format_matrix(e.residual)
        verdict, code = Verdict.INCONSISTENT, ExitCode.NEGATIVE
    except PairsError as e:
        logger.error(f"{args.command} failed: {e}")
        verdict, code, data = "failed", ExitCode.NEGATIVE, {"error": str(e), "component": e.component}

    envelope = ResultEnvelope(
        command=args.command,
        verdict=verdict.value if isinstance(verdict, Verdict) else verdict,
        exit_code=int(code),
        data=data,
    )
    return code, envelope

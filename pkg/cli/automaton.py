"""Mahler relations of automatic sets.

The generating series F_s(x) = sum_n out(delta*(s, digits(n))) x**n of every state s of a DFAO
read least significant digit first obey the section identity

    F_s(x) = sum_{j < k} x**j F_{delta(s, j)}(x**k),

i.e. F = P(x) F(x**k) with P[s, s'] the sum of x**j over the digits j leading from s to s'.
"""

from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import InputError, InternalConsistencyError, NotInvertibleError
from core.models import DFAOFile
from core.types import OperatorKind, Verdict
from exact.constants import ConstantsField, rationals
from exact.matrix import RatMatrix, invert_matrix
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc
from operators.apply import apply_to_series
from operators.cases import OperatorCase
from operators.scalar import ScalarOperator
from systems.systems import sigma_matrix

logger = get_logger(__name__)


@dataclass(frozen=True)
class DFAO:
    """Deterministic finite automaton with binary output over base-k digits."""

    base: int
    transitions: tuple[tuple[int, ...], ...]
    outputs: tuple[int, ...]
    initial: int = 0
    lsd_first: bool = True

    @classmethod
    def from_file(cls, document: DFAOFile) -> "DFAO":
        return cls(
            document.base,
            tuple(tuple(row) for row in document.transitions),
            tuple(document.outputs),
            document.initial,
            document.lsd_first,
        )

    def to_file(self) -> DFAOFile:
        return DFAOFile(
            base=self.base,
            transitions=[list(row) for row in self.transitions],
            outputs=list(self.outputs),
            initial=self.initial,
            lsd_first=self.lsd_first,
        )

    @property
    def size(self) -> int:
        return len(self.transitions)

    def digits(self, n: int) -> list[int]:
        """Base-k digits of n in reading order (empty for 0)."""
        out = []
        while n:
            n, d = divmod(n, self.base)
            out.append(d)
        return out if self.lsd_first else out[::-1]

    def run(self, digits: Sequence[int], state: int | None = None) -> int:
        state = self.initial if state is None else state
        for d in digits:
            state = self.transitions[state][d]
        return state

    def output(self, n: int) -> int:
        return self.outputs[self.run(self.digits(n))]


def _crawl(
    base: int,
    initial: Hashable,
    output: Callable[[Hashable], int],
    follow: Callable[[Hashable, int], Hashable],
    lsd_first: bool,
) -> DFAO:
    """Enumerate the states reachable from initial, numbering them in discovery order."""
    states = [initial]
    index = {initial: 0}
    transitions = []
    i = 0
    while i < len(states):
        row = []
        for digit in range(base):
            target = follow(states[i], digit)
            if target not in index:
                index[target] = len(states)
                states.append(target)
            row.append(index[target])
        transitions.append(tuple(row))
        i += 1
    return DFAO(base, tuple(transitions), tuple(output(s) for s in states), 0, lsd_first)


def reverse_reading(dfao: DFAO) -> DFAO:
    """Equivalent automaton reading digits in the opposite order (subset construction)."""
    accepting = frozenset(s for s in range(dfao.size) if dfao.outputs[s])

    def follow(subset: frozenset, digit: int) -> frozenset:
        return frozenset(s for s in range(dfao.size) if dfao.transitions[s][digit] in subset)

    return _crawl(
        dfao.base,
        accepting,
        lambda subset: int(dfao.initial in subset),
        follow,
        not dfao.lsd_first,
    )


def minimize(dfao: DFAO) -> DFAO:
    """Moore minimization of the reachable part; states are renumbered from the initial one."""
    reachable = _crawl(
        dfao.base,
        dfao.initial,
        lambda s: dfao.outputs[s],
        lambda s, d: dfao.transitions[s][d],
        dfao.lsd_first,
    )
    block = list(reachable.outputs)
    while True:
        signatures = [
            (block[s], tuple(block[t] for t in reachable.transitions[s])) for s in range(reachable.size)
        ]
        numbering: dict[tuple, int] = {}
        refined = [numbering.setdefault(sig, len(numbering)) for sig in signatures]
        if len(numbering) == len(set(block)):
            break
        block = refined
    classes = {}
    for s in range(reachable.size):
        classes.setdefault(block[s], s)
    return _crawl(
        reachable.base,
        block[0],
        lambda b: reachable.outputs[classes[b]],
        lambda b, d: block[reachable.transitions[classes[b]][d]],
        reachable.lsd_first,
    )


def check_leading_zeros(dfao: DFAO, count: int | None = None) -> None:
    """Outputs must not change when a most significant zero digit is read.

    Raises:
        InputError: Some n below the check bound changes output.
    """
    count = get_settings().leading_zero_check if count is None else count
    for n in range(count):
        digits = dfao.digits(n)
        padded = digits + [0] if dfao.lsd_first else [0] + digits
        if dfao.outputs[dfao.run(digits)] != dfao.outputs[dfao.run(padded)]:
            logger.error(f"Automaton output of {n} depends on a leading zero")
            raise InputError(f"output of {n} changes under a leading zero", field="transitions")


def brute_force_series(dfao: DFAO, terms: int, field: ConstantsField | None = None) -> PuiseuxSeriesTrunc:
    """Generating series of the accepted set, computed by running the automaton on every n."""
    field = field or rationals()
    return PuiseuxSeriesTrunc(field, [dfao.output(n) for n in range(terms)], 0, terms - 1)


def kernel_relation(dfao: DFAO, field: ConstantsField | None = None) -> RatMatrix:
    """P(x) with F(x) = P(x) F(x**k) for the state series of an LSD-first automaton."""
    field = field or rationals()
    rows = [[RatFunc.zero(field) for _ in range(dfao.size)] for _ in range(dfao.size)]
    for s in range(dfao.size):
        for j, target in enumerate(dfao.transitions[s]):
            rows[s][target] = rows[s][target] + RatFunc.monomial(field, j)
    return RatMatrix(field, rows)


@dataclass(frozen=True)
class MahlerRelation:
    """Output of automaton_to_mahler.

    ``sigma_matrix`` is P(x)**-1 (so that F(x**k) = P**-1 F) or None when P is singular;
    ``operator`` annihilates the series of the initial state.
    """

    automaton: DFAO
    case: OperatorCase
    relation: RatMatrix
    sigma_matrix: RatMatrix | None
    operator: ScalarOperator | None
    verdict: Verdict


def _eliminate(case: OperatorCase, B: RatMatrix, start: int) -> ScalarOperator:
    """First linear dependency among e_start^T sigma**i, expressed through F(x)."""
    field = case.field
    n = B.n
    rows = [[RatFunc.one(field) if j == start else RatFunc.zero(field) for j in range(n)]]
    for order in range(1, n + 1):
        candidate = _iterate(case, B, order).row(start)
        basis = RatMatrix(field, rows).transpose()
        coeffs = basis.solve(candidate)
        if coeffs is not None:
            logger.info(f"Scalar relation of order {order} found by elimination")
            return ScalarOperator.build(
                case, OperatorKind.SIGMA1, [-c for c in coeffs] + [RatFunc.one(field)]
            ).primitive()
        rows.append(candidate)
    raise InternalConsistencyError("no linear dependency among sigma-iterates")


def _iterate(case: OperatorCase, B: RatMatrix, order: int) -> RatMatrix:
    """sigma**(order-1)(B) ... sigma(B) B."""
    M = B
    step = B
    for _ in range(1, order):
        step = sigma_matrix(step, case)
        M = step * M
    return M


def automaton_to_mahler(dfao: DFAO, field: ConstantsField | None = None) -> MahlerRelation:
    """Mahler relation and scalar annihilator of the set recognized by a DFAO.

    Most-significant-first automata are reversed first; the automaton is minimized, checked for
    leading-zero invariance, and the scalar operator is verified against the brute-force series.
    """
    field = field or rationals()
    settings = get_settings()
    if not dfao.lsd_first:
        logger.warning("Automaton reads most significant digit first; reversing it")
        dfao = reverse_reading(dfao)
    check_leading_zeros(dfao)
    dfao = minimize(dfao)
    case = OperatorCase.mahler(field, dfao.base)
    P = kernel_relation(dfao, field)
    logger.info(f"Kernel relation of size {dfao.size} in base {dfao.base}")

    if not any(dfao.outputs):
        logger.warning("Automaton accepts nothing; the relation is degenerate")
        return MahlerRelation(dfao, case, P, None, None, Verdict.DEGENERATE)
    try:
        B = invert_matrix(P)
    except NotInvertibleError:
        logger.warning("Kernel relation is singular; no sigma-system available")
        return MahlerRelation(dfao, case, P, None, None, Verdict.DEGENERATE)

    op = _eliminate(case, B, dfao.initial)
    series = brute_force_series(dfao, settings.automaton_check_terms, field)
    residual = apply_to_series(op, series)
    if not residual.is_zero():
        raise InternalConsistencyError(f"scalar relation fails at index {residual.valuation}")
    logger.info(f"Scalar relation of order {op.order} verified to {residual.order + 1} terms")
    return MahlerRelation(dfao, case, P, B, op, Verdict.VERIFIED)

import pytest

from cli.automaton import (
    DFAO,
    automaton_to_mahler,
    brute_force_series,
    check_leading_zeros,
    kernel_relation,
    minimize,
    reverse_reading,
)
from cli.catalogue import all_naturals_dfao, empty_set_dfao, powers_of_two_dfao
from core.exceptions import InputError
from core.types import Verdict
from operators.apply import apply_to_series


class TestDFAO:
    def test_digits_in_reading_order(self):
        dfao = powers_of_two_dfao()
        assert dfao.digits(6) == [0, 1, 1]
        assert DFAO(2, dfao.transitions, dfao.outputs, lsd_first=False).digits(6) == [1, 1, 0]
        assert dfao.digits(0) == []

    def test_powers_of_two(self):
        dfao = powers_of_two_dfao()
        assert [n for n in range(20) if dfao.output(n)] == [1, 2, 4, 8, 16]

    def test_round_trip_through_file(self):
        dfao = powers_of_two_dfao()
        assert DFAO.from_file(dfao.to_file()) == dfao


class TestReverseAndMinimize:
    def test_reverse_reading_accepts_the_same_set(self):
        dfao = powers_of_two_dfao()
        reversed_ = reverse_reading(dfao)
        assert not reversed_.lsd_first
        assert all(reversed_.output(n) == dfao.output(n) for n in range(64))

    def test_minimize_merges_equivalent_states(self):
        dfao = DFAO(2, ((1, 2), (1, 2), (1, 2)), (1, 1, 1))
        assert minimize(dfao).size == 1

    def test_minimize_drops_unreachable_states(self):
        dfao = DFAO(2, ((0, 0), (1, 1)), (1, 0))
        assert minimize(dfao) == all_naturals_dfao()

    def test_minimal_automaton_is_kept(self):
        assert minimize(powers_of_two_dfao()).size == 3


class TestLeadingZeros:
    def test_invariant_automaton(self):
        check_leading_zeros(powers_of_two_dfao())

    def test_output_depends_on_leading_zero(self):
        dfao = DFAO(2, ((1, 1), (1, 1)), (1, 0))
        with pytest.raises(InputError):
            check_leading_zeros(dfao, 4)


class TestKernelRelation:
    def test_all_naturals(self, mat):
        assert kernel_relation(all_naturals_dfao()) == mat([["1 + x"]])

    def test_section_identity(self, mat):
        assert kernel_relation(powers_of_two_dfao()) == mat(
            [["1", "x", "0"], ["0", "1", "x"], ["0", "0", "1 + x"]]
        )


class TestAutomatonToMahler:
    def test_powers_of_two(self):
        dfao = powers_of_two_dfao()
        relation = automaton_to_mahler(dfao)
        assert relation.verdict == Verdict.VERIFIED
        assert relation.case.describe() == "M(q=2)"
        assert apply_to_series(relation.operator, brute_force_series(dfao, 64)).is_zero()

    def test_all_naturals(self, rf):
        relation = automaton_to_mahler(all_naturals_dfao())
        assert relation.operator.order == 1
        assert relation.operator.annihilates(rf("1/(1 - x)"))

    def test_most_significant_first_is_reversed(self):
        dfao = powers_of_two_dfao()
        msd = reverse_reading(dfao)
        relation = automaton_to_mahler(msd)
        assert relation.verdict == Verdict.VERIFIED
        assert relation.automaton.lsd_first

    def test_empty_set_is_degenerate(self):
        relation = automaton_to_mahler(empty_set_dfao())
        assert relation.verdict == Verdict.DEGENERATE
        assert relation.operator is None
        assert relation.sigma_matrix is None

import pytest
from hypothesis import given, settings as hsettings

from cli.catalogue import unipotent_2m_pair
from core.exceptions import InconsistentSystemError, InputError, NotInvertibleError
from exact.constants import constants_field, rationals
from exact.matrix import RatMatrix
from exact.ratfunc import RatFunc
from operators.cases import OperatorCase
from systems.consistency import check_consistency, require_consistent, verify_reduced_form
from systems.gauge import compose_certificates, gauge, gauge_dd, gauge_ss, lift_system, sigma_shift_system
from systems.singular import singular_points
from systems.systems import DDSystem, SigmaSigmaSystem

from tests.conftest import unipotent_matrices


@pytest.fixture
def mahler_identity(QQ, mat):
    """f = x in case M, q = 2: delta f = f and sigma f = x f."""
    return DDSystem(OperatorCase.mahler(QQ, 2), mat([["1"]]), mat([["x"]]))


@pytest.fixture
def unipotent_pair(rf):
    return unipotent_2m_pair(rf("x"))


def _constant_q_system():
    QQ = rationals()
    case = OperatorCase.q_dilation(QQ, 2)
    A = RatMatrix(QQ, [[QQ.rational(1, 2), 0], [0, QQ.rational(1, 3)]])
    B = RatMatrix(QQ, [[2, 0], [0, 5]])
    return DDSystem(case, A, B)


class TestConsistency:
    def test_constant_scalars(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["3"]]), mat([["7"]]))
        assert check_consistency(system).consistent

    def test_mahler_identity(self, mahler_identity):
        assert check_consistency(mahler_identity).consistent

    def test_violation_carries_residual(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["0"]]), mat([["x"]]))
        report = check_consistency(system)
        assert not report.consistent
        assert report.residual == mat([["x"]])

    def test_unipotent_2m_pair(self, unipotent_pair, mat):
        assert unipotent_pair.B1 == mat([["1", "0"], ["x**2 - x", "1"]])
        assert unipotent_pair.B2 == mat([["1", "0"], ["x**3 - x", "1"]])
        assert check_consistency(unipotent_pair).consistent

    def test_two_shift_violation(self):
        field = constants_field(("a",))
        case = OperatorCase.two_shift(field, field.gen("a"))
        x = RatFunc.x(field)
        system = SigmaSigmaSystem(case, RatMatrix(field, [[x]]), RatMatrix(field, [[1]]))
        assert not check_consistency(system).consistent

    def test_require_consistent(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["0"]]), mat([["x"]]))
        with pytest.raises(InconsistentSystemError) as info:
            require_consistent(system, "test")
        assert info.value.residual == mat([["x"]])

    def test_singular_sigma_matrix_rejected(self, QQ, mat):
        with pytest.raises(NotInvertibleError):
            DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["0", "0"], ["0", "0"]]), mat([["1", "1"], ["1", "1"]]))


class TestGauge:
    def test_identity(self, QQ, mahler_identity):
        target, certificate = gauge(mahler_identity, RatMatrix.identity(QQ, 1))
        assert target == mahler_identity
        assert certificate.verify()

    def test_scalar_dilation(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["3"]]), mat([["5"]]))
        target, _ = gauge_dd(system, mat([["x"]]))
        assert target.A == mat([["4"]])
        assert target.B == mat([["10"]])

    def test_gauge_by_sigma_matrix(self, mahler_identity, mat):
        target, _ = gauge_dd(mahler_identity, mahler_identity.B)
        assert target.A == mat([["2"]])
        assert target.B == mat([["x**2"]])

    def test_unipotent_pair_becomes_constant(self, QQ, unipotent_pair, mat):
        target, certificate = gauge_ss(unipotent_pair, mat([["1", "0"], ["-x", "1"]]))
        assert target.B1 == RatMatrix.identity(QQ, 2)
        assert target.B2 == RatMatrix.identity(QQ, 2)
        assert certificate.verify()

    def test_singular_gauge(self, mahler_identity, mat):
        with pytest.raises(NotInvertibleError):
            gauge(mahler_identity, mat([["0"]]))

    def test_ramified_gauge_lifts_first(self, mahler_identity, mat):
        lifted = lift_system(mahler_identity, 2)
        assert lifted.A == mat([["2"]])
        assert lifted.B == mat([["x**2"]])
        target, certificate = gauge(mahler_identity, mat([["1/x"]]), 2)
        # t**-1 over x = t**2 removes one half of the exponent
        assert target.A == mat([["1"]])
        assert certificate.ramification == 2
        assert certificate.verify()

    @given(unipotent_matrices(), unipotent_matrices())
    @hsettings(max_examples=20, deadline=None)
    def test_group_action(self, G1, G2):
        system = _constant_q_system()
        middle, first = gauge(system, G1)
        once, second = gauge(middle, G2)
        direct, _ = gauge(system, G2 * G1)
        assert once == direct
        assert check_consistency(once).consistent
        assert compose_certificates(first, second).verify()


class TestSigmaShift:
    def test_mahler_twice(self, mahler_identity, mat):
        target, certificate = sigma_shift_system(mahler_identity, 2)
        assert target.A == mat([["4"]])
        assert target.B == mat([["x**4"]])
        assert certificate.gauge == mat([["x**3"]])

    def test_two_mahler_twice(self, unipotent_pair, mat):
        target, _ = sigma_shift_system(unipotent_pair, 2)
        assert target.B1 == mat([["1", "0"], ["x**18 - x**9", "1"]])

    def test_once_is_gauge_by_sigma_matrix(self, mahler_identity):
        shifted, _ = sigma_shift_system(mahler_identity, 1)
        assert shifted == gauge(mahler_identity, mahler_identity.B)[0]

    def test_composition(self, unipotent_pair):
        once, _ = sigma_shift_system(unipotent_pair, 1)
        twice, _ = sigma_shift_system(once, 1)
        assert twice == sigma_shift_system(unipotent_pair, 2)[0]

    def test_inconsistent_input(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["0"]]), mat([["x"]]))
        with pytest.raises(InconsistentSystemError):
            sigma_shift_system(system, 1)

    def test_count_must_be_positive(self, mahler_identity):
        with pytest.raises(InputError):
            sigma_shift_system(mahler_identity, 0)


class TestSingularPoints:
    def test_constant_system(self, QQ, mat):
        inventory = singular_points(DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["1"]]), mat([["2"]])))
        assert inventory.is_empty_away_from_zero_and_infinity()

    def test_pole_of_sigma_matrix_only(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["0"]]), mat([["1/(x - 1)"]]))
        inventory = singular_points(system)
        assert inventory.matrices_with_finite_poles() == ["B"]
        assert inventory.finite[0].root == 1

    def test_pole_at_zero_is_exempt(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["1/x"]]), mat([["1"]]))
        inventory = singular_points(system)
        assert inventory.at_zero == ["A"]
        assert inventory.zero_exempt


class TestReducedForm:
    def test_mahler_nilpotent_form(self, QQ, mat):
        system = DDSystem(OperatorCase.mahler(QQ, 2), mat([["0", "0"], ["1", "0"]]), mat([["1", "0"], ["0", "2"]]))
        # q A B = B A: 2 * [[0,0],[1,0]] = [[0,0],[2,0]]
        assert verify_reduced_form(system).verified

    def test_integer_spaced_spectrum(self, QQ, mat):
        system = DDSystem(OperatorCase.q_dilation(QQ, 2), mat([["0", "0"], ["0", "1"]]), mat([["1", "0"], ["0", "1"]]))
        report = verify_reduced_form(system)
        assert not report.verified
        assert any("differ by an integer" in v for v in report.violations)

    def test_non_constant(self, mahler_identity):
        assert not verify_reduced_form(mahler_identity).verified

from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings

from core.exceptions import InputError, InsufficientOrderError, NotInvertibleError, ZeroDenominatorError
from core.types import SeriesPoint
from exact.constants import constants_field
from exact.matrix import ConstMatrix, RatMatrix, invert_matrix
from exact.ratfunc import RatFunc, normalize_ratfunc
from exact.series import PuiseuxSeriesTrunc, expand_series, substitute_series

from tests.conftest import nonzero_ratfuncs, ratfuncs


class TestConstantsField:
    def test_parse_rational(self, QQ):
        assert QQ.as_rational(QQ.parse("3/4")) == Fraction(3, 4)

    def test_parse_rejects_floats(self, QQ):
        with pytest.raises(InputError):
            QQ.parse("0.5")

    def test_parse_rejects_undeclared_generator(self, QQ):
        with pytest.raises(InputError):
            QQ.parse("q + 1")

    def test_declared_generator_is_not_rational(self):
        field = constants_field(("q",))
        value = field.parse("q**2 - 1")
        assert field.as_rational(value) is None
        assert field.format(value) == "q**2 - 1"

    def test_invalid_generator_name(self):
        with pytest.raises(InputError):
            constants_field(("x",))


class TestNormalizeRatfunc:
    def test_cancels_common_factor(self, QQ, rf):
        assert normalize_ratfunc(QQ, [-1, 0, 1], [-1, 1]) == rf("x + 1")

    def test_zero_normal_form(self, QQ):
        f = normalize_ratfunc(QQ, [], [0, 0, 0, 1])
        assert f.is_zero
        assert f.den == QQ.poly_ring.one

    def test_monic_denominator(self, QQ):
        f = normalize_ratfunc(QQ, [0, 2], [4])
        assert f.den == QQ.poly_ring.one
        assert f.numerator_coefficients() == [0, QQ.rational(1, 2)]

    def test_zero_denominator(self, QQ):
        with pytest.raises(ZeroDenominatorError):
            normalize_ratfunc(QQ, [1], [0])


class TestRatFuncArithmetic:
    @given(ratfuncs(), ratfuncs(), ratfuncs())
    @hsettings(max_examples=50, deadline=None)
    def test_ring_laws(self, f, g, h):
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h

    @given(nonzero_ratfuncs())
    @hsettings(max_examples=50, deadline=None)
    def test_inverse(self, f):
        assert f * f.inverse() == RatFunc.one(f.field)

    def test_valuation_and_value_at_zero(self, rf):
        assert rf("1/x**2 + 1").valuation() == -2
        assert rf("(1 + x)/(1 - 2*x)").value_at_zero() == 1

    def test_substitute_power(self, rf):
        assert rf("x/(1 + x)").substitute_power(2) == rf("x**2/(1 + x**2)")


class TestInvertMatrix:
    def test_identity(self, QQ):
        I = RatMatrix.identity(QQ, 2)
        assert invert_matrix(I) == I

    def test_unipotent(self, mat):
        assert invert_matrix(mat([["1", "0"], ["x", "1"]])) == mat([["1", "0"], ["-x", "1"]])

    def test_adjugate(self, mat):
        M = mat([["x", "1"], ["1", "x"]])
        expected = mat([["x/(x**2 - 1)", "-1/(x**2 - 1)"], ["-1/(x**2 - 1)", "x/(x**2 - 1)"]])
        assert invert_matrix(M) == expected

    def test_singular_carries_determinant(self, mat):
        with pytest.raises(NotInvertibleError) as info:
            invert_matrix(mat([["x", "x"], ["1", "1"]]))
        assert info.value.det is not None
        assert info.value.det.is_zero

    @given(ratfuncs(2), ratfuncs(2), ratfuncs(2), ratfuncs(2))
    @hsettings(max_examples=30, deadline=None)
    def test_inverse_times_matrix(self, a, b, c, d):
        M = RatMatrix(a.field, [[a, b], [c, d]])
        if not M.is_invertible():
            return
        assert (invert_matrix(M) * M).is_identity()


class TestConstMatrix:
    def test_commutes(self, QQ):
        A = ConstMatrix.diagonal(QQ, [1, 2])
        assert A.commutes_with(ConstMatrix.diagonal(QQ, [3, 4]))
        assert not A.commutes_with(ConstMatrix(QQ, [[0, 1], [1, 0]]))

    def test_nilpotent(self, QQ):
        assert ConstMatrix(QQ, [[0, 1], [0, 0]]).is_nilpotent()
        assert not ConstMatrix.identity(QQ, 2).is_nilpotent()


class TestExpandSeries:
    def test_geometric(self, QQ, rf):
        s = expand_series(rf("1/(1 - x)"), SeriesPoint.ZERO, 4)
        assert s.dense(0, 4) == [QQ.one] * 5
        assert s.order == 4

    def test_pole(self, QQ, rf):
        s = expand_series(rf("1/x"), SeriesPoint.ZERO, 3)
        assert s.valuation == -1
        assert s.coefficient(-1) == QQ.one

    def test_long_division(self, QQ, rf):
        s = expand_series(rf("(1 + x)/(1 - 2*x)"), SeriesPoint.ZERO, 3)
        assert s.dense(0, 3) == [QQ.rational(c) for c in (1, 3, 6, 12)]

    def test_at_infinity(self, QQ, rf):
        # x/(x - 1) = 1/(1 - t) with t = 1/x
        s = expand_series(rf("x/(x - 1)"), SeriesPoint.INFINITY, 3)
        assert s.dense(0, 3) == [QQ.one] * 4

    def test_coefficient_beyond_order(self, rf):
        s = expand_series(rf("1/(1 - x)"), SeriesPoint.ZERO, 2)
        with pytest.raises(InsufficientOrderError):
            s.coefficient(3)

    @given(ratfuncs(2), ratfuncs(2))
    @hsettings(max_examples=30, deadline=None)
    def test_respects_products(self, f, g):
        if f.valuation() is None or g.valuation() is None or f.valuation() < 0 or g.valuation() < 0:
            return
        order = 8
        product = expand_series(f * g, SeriesPoint.ZERO, order)
        assert product.agrees_with(expand_series(f, SeriesPoint.ZERO, order) * expand_series(g, SeriesPoint.ZERO, order))


class TestSubstituteSeries:
    def test_power(self, QQ):
        s = PuiseuxSeriesTrunc(QQ, [0, 1, 1], 0, 2)
        out = substitute_series(s, power=2)
        assert out.dense(0, 4) == [0, 0, 1, 0, 1]
        assert out.order == 5

    def test_scale(self, QQ):
        q = QQ.rational(3)
        s = PuiseuxSeriesTrunc(QQ, [0, 1], 0, 1)
        assert substitute_series(s, scale=q).coefficient(1) == q

    def test_ramified_power(self, QQ):
        # x**(1/2) + x in units of 1/2
        s = PuiseuxSeriesTrunc(QQ, [1, 1], 1, 2, ramification=2)
        out = substitute_series(s, power=3)
        assert out.ramification == 2
        assert out.terms() == [(Fraction(3, 2), QQ.one), (Fraction(3), QQ.one)]

    def test_exactly_one_map(self, QQ):
        with pytest.raises(InputError):
            substitute_series(PuiseuxSeriesTrunc(QQ, [1]), power=2, scale=3)

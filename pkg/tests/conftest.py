"""Shared fixtures and strategies for the test suite."""

import pytest
from hypothesis import strategies as st

from cli.io import parse_matrix, parse_ratfunc
from config.settings import get_settings
from exact.constants import rationals
from exact.matrix import RatMatrix
from exact.ratfunc import RatFunc


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size acceptance runs")


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Every test sees settings built from its own environment."""
    monkeypatch.setenv("MAHLERPAIRS_ENVIRONMENT", "testing")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def QQ():
    return rationals()


@pytest.fixture
def rf(QQ):
    """Parse a rational function of x over the rationals."""
    return lambda text: parse_ratfunc(QQ, text)


@pytest.fixture
def mat(QQ):
    """Parse a RatMatrix from rows of strings."""
    return lambda rows: parse_matrix(QQ, rows)


# Strategies

small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def polynomials(draw, max_degree: int = 3, vanish_at_zero: bool = False):
    coeffs = draw(st.lists(small_ints, min_size=1, max_size=max_degree + 1))
    if vanish_at_zero:
        coeffs = [0] + coeffs[: max_degree]
    return RatFunc.from_coefficients(rationals(), coeffs)


@st.composite
def ratfuncs(draw, max_degree: int = 3):
    num = draw(st.lists(small_ints, min_size=1, max_size=max_degree + 1))
    den = draw(st.lists(small_ints, min_size=1, max_size=max_degree + 1).filter(any))
    return RatFunc.from_coefficients(rationals(), num, den)


@st.composite
def nonzero_ratfuncs(draw, max_degree: int = 3):
    return draw(ratfuncs(max_degree).filter(bool))


@st.composite
def unipotent_matrices(draw, n: int = 2, max_degree: int = 2):
    """Lower unipotent matrices with polynomial entries (always invertible)."""
    field = rationals()
    rows = [
        [
            RatFunc.one(field) if i == j else draw(polynomials(max_degree)) if i > j else RatFunc.zero(field)
            for j in range(n)
        ]
        for i in range(n)
    ]
    return RatMatrix(field, rows)

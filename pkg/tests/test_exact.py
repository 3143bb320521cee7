from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydiagrams.exact import (
    as_integer, bar, binomial, format_rational, odd_falling, parse_rational, tilde, tilde_sum,
)


@pytest.mark.parametrize("n,k,want", [(5, 3, 10), (-1, 0, 1), (4, 7, 0), (-1, 2, 0), (0, 0, 1)])
def test_binomial_values(n, k, want):
    assert binomial(n, k) == want


def test_binomial_rejects_out_of_domain():
    with pytest.raises(ValueError):
        binomial(-2, 0)
    with pytest.raises(ValueError):
        binomial(3, -1)


@given(st.integers(0, 60), st.integers(0, 60))
def test_binomial_symmetric(n, k):
    if k <= n:
        assert binomial(n, k) == binomial(n, n - k)


@given(st.integers(0, 80))
def test_central_binomial_halving(mu):
    # the factor 2 appears for positive mu; mu = 0 is covered by C(-1, 0) = 1
    assert binomial(2 * mu, mu) == 2 ** (mu != 0) * binomial(2 * mu - 1, mu)


@pytest.mark.parametrize("mu,a,want", [(3, 1, 15), (1, 1, -1), (0, 0, -1), (5, 3, 9 * 7 * 5 * 3)])
def test_odd_falling(mu, a, want):
    assert odd_falling(mu, a) == want


def test_odd_falling_rejects_negative_a():
    with pytest.raises(ValueError):
        odd_falling(2, -1)


def test_bar_and_tilde():
    assert [bar(0), bar(1), bar(5)] == [1, 1, 5]
    assert [tilde(4), tilde(3), tilde(0), tilde(-2)] == [4, 0, 0, 0]
    with pytest.raises(ValueError):
        bar(-1)


@given(st.integers(1, 500))
def test_tilde_adjacent_sum(n):
    # exactly one of n, n-1 is even; the even one survives unless it is 0
    assert tilde(n) + tilde(n - 1) == (n if n % 2 == 0 else n - 1)


def test_tilde_sum_examples():
    one = lambda i, x: Fraction(1)
    assert tilde_sum(3, one) == 3
    assert tilde_sum(-3, one) == -3
    assert tilde_sum(0, one) == 0


@given(st.integers(-30, 30))
def test_tilde_sum_antisymmetric(d):
    f = lambda i, x: Fraction(i * i + 3 * x + 1, i + 2)
    assert tilde_sum(d, f) == -tilde_sum(-d, f)


@given(st.fractions())
def test_rational_text_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_rational_text_form():
    assert format_rational(Fraction(1, 24)) == "1/24"
    assert format_rational(Fraction(8, 2)) == "4"
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    for bad in ["", "1 /2", "a", "1/0", "1/2/3"]:
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_as_integer():
    assert as_integer(Fraction(6, 3)) == 2
    with pytest.raises(ArithmeticError):
        as_integer(Fraction(1, 2))

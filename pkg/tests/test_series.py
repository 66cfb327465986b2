import pytest
from hypothesis import given, settings, strategies as st

from dtlab.series import mul, mul_schoolbook, power, scale_shift

coeffs = st.lists(st.integers(-(10**40), 10**40), min_size=1, max_size=40)


@settings(max_examples=200)
@given(coeffs, coeffs, st.integers(0, 60))
def test_kronecker_matches_schoolbook(a, b, n):
    assert mul(a, b, n) == mul_schoolbook(a, b, n)


def test_mul_zero_series_and_lengths():
    assert mul([0, 0], [1, 2, 3], 4) == [0, 0, 0, 0]
    assert mul([1, 1], [1, -1], 3) == [1, 0, -1]
    assert mul([], [1], 2) == [0, 0]


def test_power_matches_repeated_product():
    a = [1, -3, 0, 5, 2]
    expect = [1]
    for _ in range(5):
        expect = mul_schoolbook(expect, a, 12)
    assert power(a, 5, 12) == expect
    assert power(a, 0, 3) == [1, 0, 0]


def test_scale_shift():
    assert scale_shift([1, 2, 3], scalar=-2, shift=1) == [0, -2, -4, -6]
    assert scale_shift([1, 2, 3], shift=2, n=3) == [0, 0, 1]
    assert scale_shift([1], shift=1, n=4) == [0, 1, 0, 0]

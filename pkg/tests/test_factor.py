import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dtlab.factor import BigFactorizer, FactorizationError, brent_rho, is_probable_prime


def test_primality_small_range():
    for n in range(-5, 5000):
        assert is_probable_prime(n) == sympy.isprime(n)


def test_primality_hard_cases():
    # strong pseudoprimes to several small bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert not is_probable_prime(n)
    for p in (2**61 - 1, 2**89 - 1, 2**127 - 1, 10**30 + 57):
        assert is_probable_prime(p) == sympy.isprime(p)


def test_brent_rho_splits_semiprime():
    p, q = 1_000_000_007, 998_244_353
    d = brent_rho(p * q)
    assert d in (p, q)
    assert brent_rho(2 * 91) == 2


def test_factor_examples(factorizer):
    assert factorizer.factor(1) == []
    assert factorizer.factor(-24) == [(2, 3), (3, 1)]
    assert factorizer.factor(691) == [(691, 1)]
    with pytest.raises(ValueError):
        factorizer.factor(0)


def test_factor_large_primes_squares_and_products(factorizer):
    big = 1_000_003 * 2_000_029  # cofactor above the sieve with two large primes
    assert factorizer.factor(big) == sorted(sympy.factorint(big).items())
    sq = (10**12 + 39) ** 2
    assert factorizer.factor(sq) == [(10**12 + 39, 2)]
    n = 2**10 * 3**5 * 1_000_000_007 * (10**15 + 37)
    assert factorizer.factor(n) == sorted(sympy.factorint(n).items())


def test_tau_values_match_sympy(factorizer, tau_table):
    for p in (2, 3, 5, 7, 11, 13, 97, 691, 9973):
        a = tau_table[p]
        assert factorizer.factor(a) == sorted(sympy.factorint(abs(a)).items())


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=10**24))
def test_factor_reconstructs_and_matches_oracle(factorizer, n):
    fact = factorizer.factor(n)
    assert math.prod(p**e for p, e in fact) == n
    assert [p for p, _ in fact] == sorted(p for p, _ in fact)
    assert fact == sorted(sympy.factorint(n).items())


def test_budget_exhaustion_raises(sieve):
    tiny = BigFactorizer(sieve, rho_budget=10, max_constants=1)
    n = (10**20 + 39) * (10**20 + 129)
    with pytest.raises(FactorizationError) as info:
        tiny.factor(n)
    assert info.value.n == n


def test_divisor_count(factorizer):
    assert factorizer.divisor_count(-6048) == 48

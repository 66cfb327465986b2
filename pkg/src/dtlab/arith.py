"""Elementary multiplicative arithmetic backed by a smallest-prime-factor table.

Everything here works on integers up to the sieve limit.  Arbitrary-size
integers (Fourier coefficients) are factored in :mod:`dtlab.factor`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError

DEFAULT_SIEVE_LIMIT = 2_000_000
# int32 entries: 5e7 is ~200 MB
MAX_SIEVE_LIMIT = 50_000_000

Factorization = list[tuple[int, int]]


@dataclass(frozen=True)
class FactorSieve:
    """Smallest-prime-factor table for 0..limit.

    ``spf[n]`` is the least prime dividing ``n`` for ``n >= 2``; entries 0 and
    1 are zero.  Treat instances as read-only.
    """

    limit: int
    spf: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.spf.setflags(write=False)

    @property
    def primes(self) -> np.ndarray:
        cached = self.__dict__.get("_primes")
        if cached is None:
            idx = np.arange(self.limit + 1)
            cached = np.nonzero((self.spf == idx) & (idx >= 2))[0].astype(np.int64)
            cached.setflags(write=False)
            object.__setattr__(self, "_primes", cached)
        return cached

    def is_prime(self, n: int) -> bool:
        _check_range(self, n, low=0)
        return n >= 2 and int(self.spf[n]) == n


def build_factor_sieve(limit: int, max_limit: int = MAX_SIEVE_LIMIT) -> FactorSieve:
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    if limit > max_limit:
        raise CapacityError(f"sieve limit {limit} exceeds memory budget {max_limit}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            tail = spf[p * p :: p]
            tail[tail == 0] = p
    rest = np.nonzero(spf == 0)[0]
    rest = rest[rest >= 2]
    spf[rest] = rest
    return FactorSieve(limit, spf)


def _check_range(sieve: FactorSieve, n: int, low: int = 1) -> None:
    if not low <= n <= sieve.limit:
        raise ValueError(f"{n} outside sieve range [{low}, {sieve.limit}]")


def factorize(sieve: FactorSieve, n: int) -> Factorization:
    _check_range(sieve, n)
    spf = sieve.spf
    out: Factorization = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def factor_value(fact: Factorization) -> int:
    return math.prod(p**e for p, e in fact)


def divisor_count(fact: Factorization) -> int:
    return math.prod(e + 1 for _, e in fact)


def euler_phi(fact: Factorization) -> int:
    return math.prod(p ** (e - 1) * (p - 1) for p, e in fact)


def totient_trial(n: int) -> int:
    """phi(n) by trial division, for values outside any sieve."""
    out, p = n, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            out -= out // p
        p += 1
    if n > 1:
        out -= out // n
    return out


def lcm_many(values, width: int | None = None) -> int:
    """Least common multiple of a non-empty sequence of positive integers.

    With ``width`` set, emulate a signed fixed-width accumulator and raise
    ``OverflowError`` once the running lcm no longer fits.
    """
    values = list(values)
    if not values:
        raise ValueError("lcm_many needs at least one value")
    acc = 1
    bound = None if width is None else 1 << (width - 1)
    for v in values:
        if v < 1:
            raise ValueError(f"lcm_many expects positive integers, got {v}")
        acc = acc // math.gcd(acc, v) * v
        if bound is not None and acc >= bound:
            raise OverflowError(f"lcm exceeds {width}-bit range")
    return acc


def largest_prime_factor(sieve: FactorSieve, m: int) -> int:
    if m == 1:
        raise ValueError("largest prime factor of 1 is undefined")
    _check_range(sieve, m, low=2)
    return factorize(sieve, m)[-1][0]


def is_smooth(sieve: FactorSieve, m: int, bound: float) -> bool:
    """True when every prime factor of ``m`` is at most ``bound`` (1 is always smooth)."""
    _check_range(sieve, m)
    if m == 1:
        return True
    return largest_prime_factor(sieve, m) <= bound


def primes_up_to(sieve: FactorSieve, x: float) -> np.ndarray:
    if x > sieve.limit:
        raise ValueError(f"x={x} beyond sieve limit {sieve.limit}")
    primes = sieve.primes
    return primes[: np.searchsorted(primes, math.floor(x), side="right")]


def prime_pi(sieve: FactorSieve, x: float) -> int:
    return len(primes_up_to(sieve, x))


# Bulk tables.  These are what the summation code actually uses.


def divisor_count_table(n: int) -> np.ndarray:
    """d(k) for k = 0..n (d(0) set to 0)."""
    d = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        d[k::k] += 1
    return d


def totient_table(n: int) -> np.ndarray:
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def largest_prime_factor_table(n: int) -> np.ndarray:
    """q_k for k = 2..n; entries 0 and 1 are 1 so that 1 is smooth for any bound."""
    lpf = np.ones(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if lpf[p] == 1:
            lpf[p::p] = p
    return lpf


def mobius_table(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if not is_comp[p]:
            is_comp[2 * p :: p] = True
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu

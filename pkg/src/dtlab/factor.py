"""Complete factorization of large integers such as |a_f(p)|.

Small prime factors (up to the sieve limit) are found by walking a product
tree of the sieve primes with gcds, so each coefficient costs a handful of
big-integer reductions instead of ~1.5e5 trial divisions.  What is left has
only prime factors above the sieve limit and is split with Brent's variant of
Pollard rho under an iteration budget.  Everything is deterministic: fixed
starting points, fixed polynomial constants, fixed Miller-Rabin bases.
"""

from __future__ import annotations

import math
from collections import Counter

import gmpy2
from gmpy2 import mpz

from .arith import FactorSieve, Factorization, factorize
from .errors import DtlabError

# Jaeschke / Sorenson-Webster: the first 13 prime bases are a proof of
# primality below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981

DEFAULT_RHO_BUDGET = 50_000_000


class FactorizationError(DtlabError):
    """Pollard rho exhausted its budget on a composite cofactor."""

    def __init__(self, n, cofactor):
        super().__init__(f"could not split cofactor {cofactor} of {n}")
        self.n = n
        self.cofactor = cofactor


def is_probable_prime(n) -> bool:
    """Miller-Rabin; a proof below ~3.3e24, BPSW plus 13 bases above."""
    n = mpz(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if not all(gmpy2.is_strong_prp(n, a) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_BOUND:
        return True
    return bool(gmpy2.is_bpsw_prp(n))


def brent_rho(n, c: int = 1, budget: int = DEFAULT_RHO_BUDGET, batch: int = 128):
    """Return a non-trivial factor of composite ``n`` or None when the budget runs out."""
    n = mpz(n)
    if n % 2 == 0:
        return mpz(2)
    c = mpz(c)
    y = mpz(2)
    r = 1
    q = mpz(1)
    g = mpz(1)
    spent = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(batch, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gmpy2.gcd(q, n)
            k += batch
        spent += 2 * r
        r *= 2
        if g == 1 and spent > budget:
            return None
    if g == n:
        # batch overshot; replay one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = gmpy2.gcd(abs(x - ys), n)
            if g > 1:
                break
    if g == n:
        return None
    return g


class BigFactorizer:
    """Factor arbitrary integers using a :class:`FactorSieve` for the small primes."""

    def __init__(self, sieve: FactorSieve, rho_budget: int = DEFAULT_RHO_BUDGET, max_constants: int = 8):
        self.sieve = sieve
        self.rho_budget = rho_budget
        self.max_constants = max_constants
        # a cofactor with no prime factor <= limit and below limit**2 is prime
        self._prime_floor = mpz(sieve.limit + 1) ** 2
        levels = [[mpz(int(p)) for p in sieve.primes]]
        while len(levels[-1]) > 1:
            row = levels[-1]
            levels.append([row[i] * row[i + 1] if i + 1 < len(row) else row[i] for i in range(0, len(row), 2)])
        self._tree = levels

    def _small_primes_dividing(self, n: mpz) -> list[int]:
        tree = self._tree
        found: list[int] = []
        stack = [(len(tree) - 1, 0)]
        while stack:
            level, idx = stack.pop()
            node = tree[level][idx]
            if gmpy2.gcd(node % n if node > n else node, n) == 1:
                continue
            if level == 0:
                found.append(int(node))
                continue
            below = tree[level - 1]
            for child in (2 * idx + 1, 2 * idx):
                if child < len(below):
                    stack.append((level - 1, child))
        found.sort()
        return found

    def _split(self, m: mpz):
        for c in range(1, self.max_constants + 1):
            d = brent_rho(m, c=c, budget=self.rho_budget)
            if d is not None:
                return d
        return None

    def factor(self, n) -> Factorization:
        """Canonical factorization of ``|n|``; raises :class:`FactorizationError` on a stuck cofactor."""
        n = abs(mpz(n))
        if n == 0:
            raise ValueError("cannot factor 0")
        original = n
        counts: Counter[int] = Counter()
        if n <= self.sieve.limit:
            return factorize(self.sieve, int(n))
        for p in self._small_primes_dividing(n):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            counts[p] += e
        pending = [n] if n > 1 else []
        while pending:
            m = pending.pop()
            if m < self._prime_floor or is_probable_prime(m):
                counts[int(m)] += 1
                continue
            root = gmpy2.isqrt(m)
            if root * root == m:
                pending += [root, root]
                continue
            d = self._split(m)
            if d is None:
                raise FactorizationError(int(original), int(m))
            pending += [d, m // d]
        return sorted(counts.items())

    def divisor_count(self, n) -> int:
        return math.prod(e + 1 for _, e in self.factor(n))

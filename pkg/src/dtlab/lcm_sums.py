"""Sums of multiplicative functions of lcm(d_1, ..., d_r) over boxes of tuples.

Three summands are supported, all functions of m = lcm(d_1, ..., d_r):

    inv_phi_lcm       1 / phi(m)
    lcm_over_phi_sq   m / phi(m)^2
    inv_lcm           1 / m

Evaluation strategy (``lcm_sum``):

1. Build the distribution of lcm(d_1, ..., d_{r-1}) over the first r-1
   coordinates (distinct values, tuple counts, totients), vectorized with numpy.
2. Fold in the last coordinate.  F is multiplicative, so
   F(lcm(L, c)) = F(L) F(c) / F(gcd(L, c)).  Writing 1/F = h * 1 (Dirichlet
   convolution, h = (1/F) * mu) turns the gcd into a sum over common divisors:

       sum_c F(lcm(L, c)) = F(L) * sum_{e | L} h(e) * S_e,   S_e = sum_{c in B, e | c} F(c)

   and the whole sum becomes sum_e h(e) S_e T_e with
   T_e = sum_{L : e | L} W_L F(L).

Exact mode does the same fold with integers scaled by a common denominator.
``naive_lcm_sum`` and ``sorted_tuple_sum`` are plain enumerations kept as
oracles.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arith import (
    FactorSieve,
    factorize,
    largest_prime_factor_table,
    mobius_table,
    totient_trial,
    totient_table,
)
from .errors import CapacityError, ConfigError

KINDS = ("inv_phi_lcm", "lcm_over_phi_sq", "inv_lcm")

# Largest x per r for which a sum is evaluated at all.
ENUMERATION_BUDGET = {1: 10_000_000, 2: 1_000_000, 3: 1_500, 4: 300}
# Largest x evaluated in exact rational arithmetic by default.
EXACT_THRESHOLD = 2000

_DENSE_LIMIT = 60_000_000
_CHUNK = 4_000_000


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ConfigError(f"unknown sum kind {kind!r}; expected one of {KINDS}")


def summand(kind: str, m: int, phi_m: int) -> Fraction:
    if kind == "inv_phi_lcm":
        return Fraction(1, phi_m)
    if kind == "lcm_over_phi_sq":
        return Fraction(m, phi_m * phi_m)
    if kind == "inv_lcm":
        return Fraction(1, m)
    raise ConfigError(f"unknown sum kind {kind!r}")


def _summand_float(kind: str, m: np.ndarray, phi_m: np.ndarray) -> np.ndarray:
    m = m.astype(np.float64)
    phi_m = phi_m.astype(np.float64)
    if kind == "inv_phi_lcm":
        return 1.0 / phi_m
    if kind == "lcm_over_phi_sq":
        return m / (phi_m * phi_m)
    return 1.0 / m


def _numer_denom(kind: str, m: int, phi_m: int) -> tuple[int, int]:
    if kind == "inv_phi_lcm":
        return 1, phi_m
    if kind == "lcm_over_phi_sq":
        return m, phi_m * phi_m
    return 1, m


# Oracles ---------------------------------------------------------------------


def naive_lcm_sum(kind: str, x: float, r: int) -> Fraction:
    """Full enumeration of [1, x]^r; independent of the sieve code."""
    _check_kind(kind)
    counts = Counter(math.lcm(*t) for t in itertools.product(range(1, math.floor(x) + 1), repeat=r))
    return sum((c * summand(kind, m, totient_trial(m)) for m, c in counts.items()), Fraction(0))


def multinomial_weight(t: Sequence[int]) -> int:
    """Number of distinct orderings of the multiset ``t``."""
    w = math.factorial(len(t))
    for _, grp in itertools.groupby(t):
        w //= math.factorial(len(list(grp)))
    return w


def sorted_tuple_sum(kind: str, base: Iterable[int], r: int) -> Fraction:
    """Sum over ordered r-tuples from ``base`` using non-decreasing tuples and multinomial weights."""
    _check_kind(kind)
    base = sorted(set(int(b) for b in base))
    counts: Counter[int] = Counter()
    for t in itertools.combinations_with_replacement(base, r):
        counts[math.lcm(*t)] += multinomial_weight(t)
    return sum((c * summand(kind, m, totient_trial(m)) for m, c in counts.items()), Fraction(0))


# Distribution of lcm over r-tuples -------------------------------------------


@dataclass(frozen=True)
class LcmDistribution:
    """Distinct lcm values over ordered tuples from a base set, with tuple counts and totients."""

    values: np.ndarray
    counts: np.ndarray
    phis: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def lcm_distribution(base: np.ndarray, r: int, phi: np.ndarray) -> LcmDistribution:
    """lcm distribution of ordered r-tuples from ``base``.

    ``phi`` must be a totient table covering ``max(base)``; totients of larger
    lcm values are carried along via phi(lcm) = phi(L) phi(c) / phi(gcd).
    """
    base = np.unique(np.asarray(base, dtype=np.int64))
    if r < 1:
        raise ConfigError("r must be >= 1")
    vals = base
    cnts = np.ones(len(base), dtype=np.int64)
    phis = phi[base].astype(np.int64)
    base_phi = phi[base].astype(np.int64)
    for _ in range(r - 1):
        if len(vals) and float(vals[-1]) * float(base[-1]) > 2.0**62:
            raise CapacityError("lcm values exceed 64-bit range")
        rows = max(1, _CHUNK // max(1, len(base)))
        new_v, new_c, new_p = [], [], []
        for start in range(0, len(vals), rows):
            L = vals[start : start + rows, None]
            g = np.gcd(L, base[None, :])
            new_v.append((L // g * base[None, :]).ravel())
            new_p.append((phis[start : start + rows, None] * base_phi[None, :] // phi[g]).ravel())
            new_c.append(np.broadcast_to(cnts[start : start + rows, None], g.shape).ravel())
        v = np.concatenate(new_v)
        c = np.concatenate(new_c)
        p = np.concatenate(new_p)
        order = np.argsort(v, kind="stable")
        v, c, p = v[order], c[order], p[order]
        starts = np.flatnonzero(np.r_[True, v[1:] != v[:-1]])
        vals = v[starts]
        cnts = np.add.reduceat(c, starts)
        phis = p[starts]
    return LcmDistribution(vals, cnts, phis)


# Folding the last coordinate ------------------------------------------------


def _inverse_summand_convolution_float(kind: str, top: int, phi: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """h = (1/F) * mu on 1..top as floats (index 0 unused)."""
    n = np.arange(top + 1, dtype=np.float64)
    ph = phi[: top + 1].astype(np.float64)
    if kind == "inv_lcm":
        return ph.copy()
    if kind == "inv_phi_lcm":
        g = ph
    else:
        g = np.zeros(top + 1)
        g[1:] = ph[1:] ** 2 / n[1:]
    h = np.zeros(top + 1)
    for k in range(1, top + 1):
        if mu[k]:
            h[k::k] += mu[k] * g[1 : top // k + 1]
    return h


def _inverse_summand_convolution_exact(kind: str, top: int, phi: np.ndarray, mu: np.ndarray) -> list[Fraction]:
    if kind == "inv_lcm":
        return [Fraction(int(v)) for v in phi[: top + 1]]
    if kind == "inv_phi_lcm":
        g = [Fraction(int(v)) for v in phi[: top + 1]]
    else:
        g = [Fraction(0)] + [Fraction(int(phi[n]) ** 2, n) for n in range(1, top + 1)]
    h = [Fraction(0)] * (top + 1)
    for k in range(1, top + 1):
        mk = int(mu[k])
        if mk:
            for d in range(1, top // k + 1):
                h[d * k] += mk * g[d]
    return h


def _fold_float(kind, base, dist, phi, mu) -> float:
    top = int(base[-1])
    h = _inverse_summand_convolution_float(kind, top, phi, mu)
    fb = np.zeros(top + 1)
    fb[base] = _summand_float(kind, base, phi[base])
    fl = dist.counts.astype(np.float64) * _summand_float(kind, dist.values, dist.phis)
    vmax = int(dist.values[-1])
    dense = vmax <= _DENSE_LIMIT
    if dense:
        tl = np.zeros(vmax + 1)
        tl[dist.values] = fl
    terms = []
    for e in range(1, top + 1):
        if h[e] == 0.0:
            continue
        s_e = fb[e::e].sum()
        if s_e == 0.0:
            continue
        t_e = tl[e::e].sum() if dense else fl[dist.values % e == 0].sum()
        terms.append(h[e] * s_e * t_e)
    return math.fsum(terms)


def _fold_exact(kind, base, dist, phi, mu) -> Fraction:
    top = int(base[-1])
    h = _inverse_summand_convolution_exact(kind, top, phi, mu)

    def scaled(values, phis, counts):
        nd = [_numer_denom(kind, int(v), int(p)) for v, p in zip(values, phis)]
        den = 1
        for d in set(d for _, d in nd):
            den = math.lcm(den, d)
        return {int(v): int(c) * num * (den // d) for v, c, (num, d) in zip(values, counts, nd)}, den

    sb, den_b = scaled(base, phi[base], np.ones(len(base), dtype=np.int64))
    tl, den_l = scaled(dist.values, dist.phis, dist.counts)
    vmax = int(dist.values[-1])
    total = Fraction(0)
    for e in range(1, top + 1):
        if not h[e]:
            continue
        s_e = sum(sb.get(m, 0) for m in range(e, top + 1, e))
        if not s_e:
            continue
        t_e = sum(tl.get(m, 0) for m in range(e, vmax + 1, e))
        total += h[e] * (s_e * t_e)
    return total / (den_b * den_l)


@dataclass
class _Tables:
    """Totient and Mobius tables grown on demand."""

    size: int = 0
    phi: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.int64))
    mu: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.int64))

    def ensure(self, n: int) -> "_Tables":
        if n > self.size:
            n = max(n, 2 * self.size)
            self.phi = totient_table(n)
            self.mu = mobius_table(n)
            self.size = n
        return self


_TABLES = _Tables()


def base_lcm_sum(kind: str, base: Iterable[int], r: int, exact: bool) -> Fraction | float:
    """Sum of F(lcm) over all ordered r-tuples drawn from ``base``."""
    _check_kind(kind)
    base = np.unique(np.asarray(list(base), dtype=np.int64))
    if len(base) == 0:
        return Fraction(0) if exact else 0.0
    if base[0] < 1:
        raise ConfigError("base values must be positive")
    tables = _TABLES.ensure(int(base[-1]))
    phi, mu = tables.phi, tables.mu
    if r == 1:
        if exact:
            return sum((summand(kind, int(b), int(phi[b])) for b in base), Fraction(0))
        return math.fsum(_summand_float(kind, base, phi[base]))
    dist = lcm_distribution(base, r - 1, phi)
    if exact:
        return _fold_exact(kind, base, dist, phi, mu)
    return _fold_float(kind, base, dist, phi, mu)


@dataclass(frozen=True)
class LcmSumValue:
    x: float
    value: float
    exact: Fraction | None
    mode: str


def lcm_sum(kind: str, x: float, r: int, exact: bool | None = None, budget: dict | None = None) -> LcmSumValue:
    """Sum over all d_1..d_r <= x of F(lcm(d)).

    ``exact=None`` picks exact rational arithmetic when x is within
    :data:`EXACT_THRESHOLD`.
    """
    _check_kind(kind)
    if x < 1:
        raise ConfigError(f"x must be >= 1, got {x}")
    if r < 1:
        raise ConfigError(f"r must be >= 1, got {r}")
    budget = ENUMERATION_BUDGET if budget is None else budget
    n = math.floor(x)
    cap = budget.get(r)
    if cap is None or n > cap:
        raise CapacityError(f"x={x} exceeds enumeration budget {cap} for r={r}")
    if exact is None:
        exact = n <= EXACT_THRESHOLD
    base = np.arange(1, n + 1, dtype=np.int64)
    if exact:
        val = base_lcm_sum(kind, base, r, exact=True)
        return LcmSumValue(float(x), float(val), val, "exact")
    return LcmSumValue(float(x), base_lcm_sum(kind, base, r, exact=False), None, "float")


def inv_phi_lcm_sum(x: float, r: int, **kw) -> LcmSumValue:
    return lcm_sum("inv_phi_lcm", x, r, **kw)


def lcm_over_phi_sq_sum(x: float, r: int, **kw) -> LcmSumValue:
    return lcm_sum("lcm_over_phi_sq", x, r, **kw)


def inv_lcm_sum(x: float, r: int, **kw) -> LcmSumValue:
    return lcm_sum("inv_lcm", x, r, **kw)


# Reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class LcmSumRow:
    x: float
    value: float
    exact: Fraction | None
    ratio: float
    mode: str


@dataclass(frozen=True)
class LcmSumReport:
    kind: str
    r: int
    rows: list[LcmSumRow]

    @property
    def xs(self) -> list[float]:
        return [row.x for row in self.rows]


def log_power(x: float, r: int) -> float:
    return math.log(x) ** (2**r - 1)


def lcm_sum_report(kind: str, r: int, grid: Sequence[float], exact: bool | None = None) -> LcmSumReport:
    grid = list(grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("grid must be strictly increasing")
    rows = []
    for x in grid:
        if x <= 1:
            raise ConfigError("grid points must exceed 1 (log x normalization)")
        v = lcm_sum(kind, x, r, exact=exact)
        rows.append(LcmSumRow(v.x, v.value, v.exact, v.value / log_power(x, r), v.mode))
    return LcmSumReport(kind, r, rows)


@dataclass(frozen=True)
class GrowthDiagnostic:
    xs: list[float]
    ratios: list[float]
    changes: list[float]

    @property
    def changes_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.changes, self.changes[1:]))

    @property
    def constant_estimate(self) -> float:
        """Last-grid-point ratio; an estimate of the leading constant, nothing more."""
        return self.ratios[-1]


def growth_diagnostic(xs: Sequence[float], sums: Sequence[float], r: int) -> GrowthDiagnostic:
    """Normalized ratios sum/(log x)^(2^r-1) and their successive relative changes."""
    if len(xs) < 3:
        raise ConfigError("growth diagnostic needs at least 3 grid points")
    ratios = [s / log_power(x, r) for x, s in zip(xs, sums)]
    changes = [abs(b - a) / a for a, b in zip(ratios, ratios[1:])]
    return GrowthDiagnostic(list(xs), ratios, changes)


def report_growth(report: LcmSumReport) -> GrowthDiagnostic:
    return growth_diagnostic(report.xs, [row.value for row in report.rows], report.r)


# Phi_r counts and smooth restrictions ----------------------------------------


def phi_r_full(m: int, r: int, sieve: FactorSieve) -> int:
    """Number of r-tuples with lcm exactly m: prod over p^e || m of (e+1)^r - e^r."""
    return math.prod((e + 1) ** r - e**r for _, e in factorize(sieve, m))


@dataclass(frozen=True)
class PhiRQuery:
    m: int
    r: int
    upper: float
    lower: float = 1.0

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise ConfigError(f"need 1 <= lower <= upper, got lower={self.lower}, upper={self.upper}")
        if self.m < 1 or self.r < 1:
            raise ConfigError("m and r must be positive")


def divisors(sieve: FactorSieve, m: int) -> list[int]:
    divs = [1]
    for p, e in factorize(sieve, m):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


MAX_DIVISORS = 20_000


def phi_r_constrained(q: PhiRQuery, sieve: FactorSieve, max_divisors: int = MAX_DIVISORS) -> int:
    """#{(d_1..d_r): lcm = m, lower <= d_i <= upper}.

    Counted by inclusion-exclusion over divisors e of m: tuples of admissible
    divisors of e, signed by mu(m/e).
    """
    divs = divisors(sieve, q.m)
    if len(divs) > max_divisors:
        raise CapacityError(f"{q.m} has {len(divs)} divisors, over the budget {max_divisors}")
    allowed = [d for d in divs if q.lower <= d <= q.upper]
    if not allowed:
        return 0
    total = 0
    for e in divs:
        k = q.m // e
        mu = 1
        for _, exp in factorize(sieve, k):
            if exp > 1:
                mu = 0
                break
            mu = -mu
        if mu:
            total += mu * sum(1 for d in allowed if e % d == 0) ** q.r
    return total


def phi_r_bruteforce(q: PhiRQuery) -> int:
    divs = [d for d in range(1, q.m + 1) if q.m % d == 0 and q.lower <= d <= q.upper]
    return sum(1 for t in itertools.product(divs, repeat=q.r) if math.lcm(*t) == q.m)


def smooth_base(x: float, c: float, s: float) -> np.ndarray:
    """Integers d with x^(c/4) <= d <= x^c whose prime factors are all <= x^(1/s)."""
    if not 0 < c < 1:
        raise ConfigError(f"c must lie in (0, 1), got {c}")
    if s <= 0:
        raise ConfigError(f"s must be positive, got {s}")
    hi = math.floor(x**c + 1e-9)
    lo = x ** (c / 4)
    if hi < 1:
        return np.zeros(0, dtype=np.int64)
    lpf = largest_prime_factor_table(max(hi, 1))
    d = np.arange(1, hi + 1, dtype=np.int64)
    keep = (d >= lo - 1e-12) & (lpf[1:] <= x ** (1 / s) * (1 + 1e-12))
    return d[keep]


SMOOTH_BUDGET = {1: 10_000_000, 2: 30_000, 3: 1_500, 4: 300}


def smooth_restricted_inv_lcm(x: float, c: float, s: float, r: int, exact: bool = False) -> Fraction | float:
    """Sum of 1/lcm over r-tuples of x^(1/s)-smooth integers in [x^(c/4), x^c]."""
    if x**c > SMOOTH_BUDGET.get(r, 0):
        raise CapacityError(f"x^c = {x**c:.3g} exceeds enumeration budget for r={r}")
    return base_lcm_sum("inv_lcm", smooth_base(x, c, s), r, exact=exact)


def smooth_identity_rhs(x: float, c: float, s: float, r: int, sieve: FactorSieve) -> Fraction:
    """sum over smooth m >= x^(c/4) of Phi_r(m; x^c, x^(c/4)) / m, exactly.

    m runs over the smooth integers up to floor(x^c)^r; only lcms of admissible
    tuples contribute, so the dominant cost is the divisor counting.
    """
    base = smooth_base(x, c, s)
    if len(base) == 0:
        return Fraction(0)
    upper = math.floor(x**c + 1e-9)
    lower = x ** (c / 4)
    top = upper**r
    if top > sieve.limit:
        raise CapacityError(f"floor(x^c)^r = {top} beyond sieve limit {sieve.limit}")
    ybound = x ** (1 / s) * (1 + 1e-12)
    total = Fraction(0)
    for m in range(max(1, math.ceil(lower - 1e-12)), top + 1):
        fac = factorize(sieve, m)
        if fac and fac[-1][0] > ybound:
            continue
        cnt = phi_r_constrained(PhiRQuery(m, r, upper, max(1.0, lower)), sieve)
        if cnt:
            total += Fraction(cnt, m)
    return total


def smooth_decay_bound(x: float, c: float, s: float, r: int) -> float:
    """(log x)^(2^r - 1) * exp(-c s log s / 16), the comparison scale for the smooth sum."""
    return log_power(x, r) * math.exp(-c * s * math.log(s) / 16)

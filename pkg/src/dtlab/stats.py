"""Divisor moments, divisibility densities and Sato-Tate counts over primes.

The population at level x is A_x = {p <= x : a(p) != 0, theta(p) in I}.
Divisor counts of coefficients use |a(p)|.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import FactorSieve, Factorization, build_factor_sieve, divisor_count, divisor_count_table, factorize, totient_trial
from .factor import BigFactorizer, FactorizationError
from .modforms import AngleTable, Interval, NewformSpec, sato_tate_measure

log = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061


# Factoring the coefficients ---------------------------------------------------


@dataclass(frozen=True)
class CoefficientFactors:
    """Factorizations of |a(p)| aligned with an AngleTable (None where a(p)=0 or factoring failed)."""

    primes: np.ndarray = field(repr=False)
    factorizations: list[Factorization | None] = field(repr=False)
    failures: list[int]

    def __len__(self):
        return len(self.factorizations)

    def divisor_counts(self) -> list[int]:
        """d(|a(p)|), with 0 marking entries that have no factorization."""
        return [0 if f is None else divisor_count(f) for f in self.factorizations]


_WORKER_FACTORIZER: BigFactorizer | None = None


def _init_worker(sieve_limit: int, rho_budget: int) -> None:
    global _WORKER_FACTORIZER
    _WORKER_FACTORIZER = BigFactorizer(build_factor_sieve(sieve_limit), rho_budget=rho_budget)


def _factor_or_none(a: int) -> Factorization | None:
    try:
        return _WORKER_FACTORIZER.factor(a)
    except FactorizationError:
        return None


def factor_coefficients(
    angles: AngleTable,
    factorizer: BigFactorizer,
    x: float | None = None,
    progress=None,
    workers: int = 1,
) -> CoefficientFactors:
    """Factor |a(p)| for p <= x.

    With ``workers > 1`` the work is spread over processes; ``map`` keeps
    input order so the result does not depend on the worker count.
    """
    stop = len(angles) if x is None else angles.upto(x)
    facts: list[Factorization | None] = []
    failures: list[int] = []
    if workers > 1:
        with ProcessPoolExecutor(
            workers, initializer=_init_worker, initargs=(factorizer.sieve.limit, factorizer.rho_budget)
        ) as pool:
            nonzero = [a for a in angles.a_p[:stop] if a != 0]
            it = iter(pool.map(_factor_or_none, nonzero, chunksize=256))
            for i in range(stop):
                if angles.a_p[i] == 0:
                    facts.append(None)
                    continue
                f = next(it)
                if f is None:
                    p = int(angles.primes[i])
                    log.warning("could not factor a(%d); excluded", p)
                    failures.append(p)
                facts.append(f)
                if progress is not None and i % 1000 == 999:
                    progress(i + 1, stop)
        return CoefficientFactors(angles.primes[:stop], facts, failures)
    for i in range(stop):
        a = angles.a_p[i]
        if a == 0:
            facts.append(None)
            continue
        try:
            facts.append(factorizer.factor(a))
        except FactorizationError:
            p = int(angles.primes[i])
            log.warning("could not factor a(%d); excluded", p)
            failures.append(p)
            facts.append(None)
        if progress is not None and i % 1000 == 999:
            progress(i + 1, stop)
    return CoefficientFactors(angles.primes[:stop], facts, failures)


def _population_mask(angles: AngleTable, interval: Interval, stop: int) -> np.ndarray:
    nonzero = np.fromiter((a != 0 for a in angles.a_p[:stop]), dtype=bool, count=stop)
    return nonzero & interval.contains(angles.theta[:stop])


# Divisor moments --------------------------------------------------------------


@dataclass(frozen=True)
class MomentRow:
    x: float
    count: int
    numerator: int
    moment: float | None
    ratio: float | None


@dataclass(frozen=True)
class MomentReport:
    spec: NewformSpec
    interval: Interval
    r: int
    rows: list[MomentRow]
    failures: int = 0


def divisor_moment(
    angles: AngleTable,
    factors: CoefficientFactors,
    interval: Interval,
    r: int,
    x_grid: Sequence[float],
) -> MomentReport:
    """Mean of d(|a(p)|)^r over A_x for each x in the grid, with ratio to (log x)^(2^r - 1)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    grid = list(x_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("x grid must be strictly increasing")
    if grid and grid[-1] > angles.x_max:
        raise ValueError(f"grid reaches {grid[-1]} beyond angle table x_max={angles.x_max}")
    stop = angles.upto(grid[-1]) if grid else 0
    if len(factors) < stop:
        raise ValueError("coefficient factorizations do not cover the grid")
    mask = _population_mask(angles, interval, stop)
    dvals = factors.divisor_counts()[:stop]
    excluded = set(factors.failures)
    rows = []
    count = 0
    numer = 0
    i = 0
    for x in grid:
        end = angles.upto(x)
        for j in range(i, end):
            if mask[j] and int(angles.primes[j]) not in excluded:
                count += 1
                numer += dvals[j] ** r
        i = end
        if count:
            moment = numer / count
            ratio = moment / math.log(x) ** (2**r - 1) if x > 1 else None
        else:
            moment = ratio = None
        rows.append(MomentRow(float(x), count, numer, moment, ratio))
    return MomentReport(angles.spec, interval, r, rows, len([p for p in excluded if p <= (grid[-1] if grid else 0)]))


# Divisibility counts and the density model ------------------------------------


def pi_x_delta_I(angles: AngleTable, delta: int, interval: Interval, x: float) -> int:
    """#{p <= x : a(p) != 0, delta | a(p), theta(p) in I}."""
    if delta < 1:
        raise ValueError("delta must be positive")
    stop = angles.upto(x)
    mask = _population_mask(angles, interval, stop)
    return sum(1 for j in range(stop) if mask[j] and angles.a_p[j] % delta == 0)


def h_model(delta: int, exceptional_primes, sieve: FactorSieve) -> float | None:
    """Product of l^(2-m) / (l^2 - 1) over l^m || delta; None when an exceptional prime divides delta."""
    value = 1.0
    for ell, m in factorize(sieve, delta):
        if ell in exceptional_primes:
            return None
        value *= ell ** (2 - m) / (ell * ell - 1)
    return value


@dataclass(frozen=True)
class DensityRow:
    x: float
    count: int
    prime_count: int
    density: float
    model: float | None


@dataclass(frozen=True)
class DensityReport:
    spec: NewformSpec
    delta: int
    interval: Interval
    rows: list[DensityRow]


def density_report(angles: AngleTable, delta: int, interval: Interval, x_grid: Sequence[float], sieve: FactorSieve) -> DensityReport:
    h = h_model(delta, angles.spec.exceptional_primes, sieve)
    model = None if h is None else h * sato_tate_measure(interval)
    rows = []
    for x in x_grid:
        cnt = pi_x_delta_I(angles, delta, interval, x)
        n = angles.upto(x)
        rows.append(DensityRow(float(x), cnt, n, cnt / n if n else 0.0, model))
    return DensityReport(angles.spec, delta, interval, rows)


@dataclass(frozen=True)
class ConditionRow:
    delta: int
    count: int
    delta_ratio: float
    phi_ratio: float
    in_window: bool


def condition_diagnostics(angles: AngleTable, interval: Interval, x: float, delta_max: int) -> tuple[int, list[ConditionRow]]:
    """(#A_x, rows of delta * pi(x, delta) / #A_x and phi(delta) * pi(x, delta) / #A_x).

    ``in_window`` marks delta <= x^(1/25), the range where the density
    asymptotics are used; larger delta are still tabulated.
    """
    stop = angles.upto(x)
    mask = _population_mask(angles, interval, stop)
    pop = [angles.a_p[j] for j in range(stop) if mask[j]]
    size = len(pop)
    window = x ** (1 / 25)
    rows = []
    for delta in range(1, delta_max + 1):
        cnt = sum(1 for a in pop if a % delta == 0)
        phi = totient_trial(delta)
        rows.append(
            ConditionRow(
                delta,
                cnt,
                delta * cnt / size if size else 0.0,
                phi * cnt / size if size else 0.0,
                delta <= window,
            )
        )
    return size, rows


def coefficient_growth_exponent(angles: AngleTable, x: float) -> float:
    """max over p <= x of log|a(p)| / log x: the smallest beta with |a(p)| <= x^beta."""
    stop = angles.upto(x)
    logs = [math.log(abs(a)) for a in angles.a_p[:stop] if a]
    return max(logs, default=0.0) / math.log(x)


# Sato-Tate census ----------------------------------------------------------


@dataclass(frozen=True)
class SatoTateRow:
    x: float
    count: int
    prime_count: int
    frequency: float
    mass: float
    deviation: float


def sato_tate_census(angles: AngleTable, interval: Interval, x_grid: Sequence[float]) -> list[SatoTateRow]:
    mass = sato_tate_measure(interval)
    hits = interval.contains(angles.theta)
    csum = np.cumsum(hits)
    rows = []
    for x in x_grid:
        n = angles.upto(x)
        cnt = int(csum[n - 1]) if n else 0
        freq = cnt / n if n else 0.0
        rows.append(SatoTateRow(float(x), cnt, n, freq, mass, freq - mass))
    return rows


# Decomposition of the divisor sum ---------------------------------------------

CLASSES = ("sigma1", "S1", "S3", "S4")


@dataclass(frozen=True)
class DecompositionReport:
    x: float
    c: float
    beta: float
    r: int
    counts: dict[str, int]
    sums: dict[str, int]
    s_breakdown: dict[int, tuple[int, int]]
    classification: dict[int, str] = field(repr=False)
    failures: int = 0

    @property
    def total(self) -> int:
        return sum(self.sums.values())


def default_beta(weight: int, eps: float = 0.01) -> float:
    return (weight - 1) / 2 + eps


def classify_factorization(fact: Factorization, x: float, c: float, beta: float) -> tuple[str, int | None]:
    """Class of a(p) with prime factors p_1 <= ... <= p_J, plus the scale s for S3/S4.

    j is the largest index with p_1 ... p_j <= x^c.
    """
    primes = [p for p, e in fact for _ in range(e)]
    big_j = len(primes)
    xc = x**c
    prod = 1
    j = 0
    for q in primes:
        if prod * q > xc:
            break
        prod *= q
        j += 1
    if j == 0:
        return "sigma1", None
    if big_j - j < (2 * beta + 1) / c:
        return "S1", None
    pj = primes[j - 1]
    s = 1
    while pj ** (s + 1) < x:
        s += 1
    cutoff = math.log(x) / (2 * math.log(math.log(x)))
    return ("S3" if s < cutoff else "S4"), s


def decompose_divisor_sum(
    angles: AngleTable,
    factors: CoefficientFactors,
    x: float,
    r: int,
    c: float,
    beta: float | None = None,
    interval: Interval | None = None,
) -> DecompositionReport:
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    beta = default_beta(angles.spec.weight) if beta is None else beta
    interval = Interval.full() if interval is None else interval
    stop = angles.upto(x)
    if len(factors) < stop:
        raise ValueError("coefficient factorizations do not cover x")
    mask = _population_mask(angles, interval, stop)
    excluded = set(factors.failures)
    counts = dict.fromkeys(CLASSES, 0)
    sums = dict.fromkeys(CLASSES, 0)
    s_breakdown: dict[int, tuple[int, int]] = {}
    classification: dict[int, str] = {}
    for j in range(stop):
        p = int(angles.primes[j])
        if not mask[j] or p in excluded:
            continue
        fact = factors.factorizations[j]
        cls, s = classify_factorization(fact, x, c, beta)
        dr = divisor_count(fact) ** r
        counts[cls] += 1
        sums[cls] += dr
        classification[p] = cls
        if s is not None:
            n, t = s_breakdown.get(s, (0, 0))
            s_breakdown[s] = (n + 1, t + dr)
    return DecompositionReport(float(x), c, beta, r, counts, sums, dict(sorted(s_breakdown.items())), classification, len([p for p in excluded if p <= x]))


# Baselines over all integers -------------------------------------------------


def divisor_power_means(xs: Sequence[int], r: int) -> list[float]:
    """(1/x) * sum_{n <= x} d(n)^r for each x."""
    top = max(xs)
    d = divisor_count_table(top)
    csum = np.cumsum(d.astype(object) ** r if r > 3 else d**r)
    return [float(csum[x]) / x for x in xs]


def dirichlet_main_term(x: float) -> float:
    return math.log(x) + 2 * EULER_GAMMA - 1

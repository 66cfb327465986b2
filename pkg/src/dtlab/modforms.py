"""Fourier coefficients of the level-1 cusp eigenforms with one-dimensional spaces.

For weight k in {12, 16, 18, 20, 22, 26} the cusp space of level 1 is spanned by
``Delta * E_{k-12}`` (with ``E_0 = 1``), which is then automatically a normalized
Hecke eigenform with integer coefficients.

Two independent constructions are provided:

* :func:`expand_coefficients` computes ``Delta = q * J(q)**8`` with
  ``J = prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}`` using Kronecker
  products.  This is the production route.
* :func:`expand_coefficients_eisenstein` computes ``Delta = (E4^3 - E6^2) / 1728``
  with schoolbook products and is only meant for cross-checking.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import series
from .arith import FactorSieve, primes_up_to
from .errors import CacheFormatError, CapacityError, ConfigError

SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)

# E_w = 1 + EISENSTEIN_SCALE[w] * sum sigma_{w-1}(n) q^n, scale = -2w / B_w
EISENSTEIN_SCALE = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}

DEFAULT_SERIES_BUDGET = 200_000
STRETCH_SERIES_BUDGET = 1_000_000

# Primes for which the mod-l image is not the generic one.  Configuration data,
# not derived here; see Swinnerton-Dyer's tables for level 1.
EXCEPTIONAL_PRIMES = {
    12: frozenset({2, 3, 5, 7, 23, 691}),
    16: frozenset({2, 3, 5, 7, 11, 31, 59, 3617}),
    18: frozenset({2, 3, 5, 7, 11, 13, 43867}),
    20: frozenset({2, 3, 5, 7, 11, 13, 283, 617}),
    22: frozenset({2, 3, 5, 7, 13, 17, 131, 593}),
    26: frozenset({2, 3, 5, 7, 11, 17, 19, 657931}),
}

ROUNDING_SLACK = 1e-9
CACHE_MAGIC = "DTLAB-COEFF"
CACHE_VERSION = "v1"


@dataclass(frozen=True)
class NewformSpec:
    weight: int
    level: int = 1
    label: str = ""

    def __post_init__(self):
        if self.level != 1:
            raise ConfigError(f"only level 1 is supported, got {self.level}")
        if self.weight not in SUPPORTED_WEIGHTS:
            raise ConfigError(f"unsupported weight {self.weight}; choose one of {SUPPORTED_WEIGHTS}")
        if not self.label:
            object.__setattr__(self, "label", f"1.{self.weight}.a.a")

    @property
    def exceptional_primes(self) -> frozenset[int]:
        return EXCEPTIONAL_PRIMES[self.weight]


@dataclass(frozen=True)
class CoeffTable:
    """a(1..n_max); ``a[0]`` is an unused zero so that ``a[n]`` is the n-th coefficient."""

    spec: NewformSpec
    n_max: int
    a: list[int] = field(repr=False)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"coefficient index {n} outside 1..{self.n_max}")
        return self.a[n]

    def __len__(self):
        return self.n_max


@dataclass(frozen=True)
class Interval:
    """Closed angle interval [lo, hi] inside [0, pi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= math.pi):
            raise ConfigError(f"interval [{self.lo}, {self.hi}] is not inside [0, pi]")

    @classmethod
    def full(cls) -> "Interval":
        return cls(0.0, math.pi)

    def contains(self, theta):
        return (theta >= self.lo) & (theta <= self.hi)

    @property
    def mass(self) -> float:
        return sato_tate_measure(self)


def sato_tate_measure(interval: Interval) -> float:
    """(2/pi) * integral of sin^2 over the interval, in closed form."""
    lo, hi = interval.lo, interval.hi
    return ((hi - lo) - (math.sin(2 * hi) - math.sin(2 * lo)) / 2) / math.pi


def _check_budget(n_max: int, budget: int) -> None:
    if n_max < 1:
        raise ConfigError(f"n_max must be positive, got {n_max}")
    if n_max > budget:
        raise CapacityError(f"n_max={n_max} exceeds series budget {budget}")


def jacobi_cube(n: int) -> list[int]:
    """prod (1 - q^m)^3 to n terms, via Jacobi's identity."""
    out = [0] * n
    k = 0
    while k * (k + 1) // 2 < n:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def sigma_table(power: int, n: int) -> list[int]:
    """sigma_power(m) for m = 0..n-1 (index 0 is 0)."""
    sig = [0] * n
    for d in range(1, n):
        dp = d**power
        for m in range(d, n, d):
            sig[m] += dp
    return sig


def eisenstein(weight: int, n: int) -> list[int]:
    if weight == 0:
        return [1] + [0] * (n - 1)
    scale = EISENSTEIN_SCALE[weight]
    sig = sigma_table(weight - 1, n)
    out = [scale * s for s in sig]
    out[0] = 1
    return out


def delta_series(n: int) -> list[int]:
    """Delta = q * J^8 to n terms (index 0 .. n-1)."""
    j = jacobi_cube(n)
    j2 = series.mul(j, j, n)
    j4 = series.mul(j2, j2, n)
    j8 = series.mul(j4, j4, n)
    return [0] + j8[: n - 1]


def delta_series_eisenstein(n: int) -> list[int]:
    """Delta = (E4^3 - E6^2) / 1728 with schoolbook products."""
    e4 = eisenstein(4, n)
    e6 = eisenstein(6, n)
    e4_sq = series.mul_schoolbook(e4, e4, n)
    e4_cu = series.mul_schoolbook(e4_sq, e4, n)
    e6_sq = series.mul_schoolbook(e6, e6, n)
    out = []
    for u, v in zip(e4_cu, e6_sq):
        q, rem = divmod(u - v, 1728)
        if rem:
            raise ArithmeticError("E4^3 - E6^2 not divisible by 1728")
        out.append(q)
    return out


def expand_coefficients(spec: NewformSpec, n_max: int, budget: int = DEFAULT_SERIES_BUDGET) -> CoeffTable:
    _check_budget(n_max, budget)
    n = n_max + 1
    coeffs = delta_series(n)
    if spec.weight > 12:
        coeffs = series.mul(coeffs, eisenstein(spec.weight - 12, n), n)
    return CoeffTable(spec, n_max, coeffs)


def expand_coefficients_eisenstein(spec: NewformSpec, n_max: int, budget: int = 20_000) -> CoeffTable:
    """Cross-check route; quadratic time, so it carries its own smaller budget."""
    _check_budget(n_max, budget)
    n = n_max + 1
    coeffs = delta_series_eisenstein(n)
    if spec.weight > 12:
        coeffs = series.mul_schoolbook(coeffs, eisenstein(spec.weight - 12, n), n)
    return CoeffTable(spec, n_max, coeffs)


def coefficient_violations(table: CoeffTable, sieve: FactorSieve, limit: int | None = None) -> list[str]:
    """Check normalization, multiplicativity, Hecke recursion and the Ramanujan bound.

    Returns human-readable descriptions of every failure (empty when all hold).
    """
    n_max = table.n_max if limit is None else min(limit, table.n_max)
    a = table.a
    k = table.spec.weight
    bad: list[str] = []
    if a[1] != 1:
        bad.append(f"a[1] = {a[1]}")
    for m in range(2, n_max + 1):
        for n in range(m + 1, n_max // m + 1):
            if math.gcd(m, n) == 1 and a[m * n] != a[m] * a[n]:
                bad.append(f"a[{m}*{n}] != a[{m}]*a[{n}]")
    for p in primes_up_to(sieve, n_max):
        p = int(p)
        pk = p ** (k - 1)
        if a[p] * a[p] > 4 * pk:
            bad.append(f"|a[{p}]| exceeds 2 p^((k-1)/2)")
        prev, cur, q = 1, a[p], p
        while q * p <= n_max:
            nxt = a[p] * cur - pk * prev
            if a[q * p] != nxt:
                bad.append(f"Hecke recursion fails at {q * p}")
            prev, cur, q = cur, nxt, q * p
    return bad


@dataclass(frozen=True)
class AngleTable:
    """Per-prime (p, a_p, lambda, theta) in parallel arrays, sorted by p."""

    spec: NewformSpec
    x_max: float
    primes: np.ndarray = field(repr=False)
    a_p: list[int] = field(repr=False)
    lam: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.primes)

    @property
    def records(self):
        return list(zip(self.primes.tolist(), self.a_p, self.lam.tolist(), self.theta.tolist()))

    def upto(self, x: float) -> int:
        """Number of records with p <= x."""
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))


def normalized_coefficient(a_p: int, p: int, weight: int) -> float:
    """a_p / p^((k-1)/2) computed in log space so large weights cannot overflow."""
    if a_p == 0:
        return 0.0
    mag = math.exp(math.log(abs(a_p)) - (weight - 1) / 2 * math.log(p))
    return math.copysign(mag, a_p)


def angle_table(table: CoeffTable, sieve: FactorSieve, x_max: float) -> AngleTable:
    if x_max > table.n_max:
        raise ValueError(f"x_max={x_max} beyond coefficient table size {table.n_max}")
    ps = primes_up_to(sieve, x_max).copy()
    k = table.spec.weight
    a_p = [table.a[int(p)] for p in ps]
    lam = np.array([normalized_coefficient(a, int(p), k) for a, p in zip(a_p, ps)], dtype=np.float64)
    if lam.size and np.max(np.abs(lam)) > 2 + ROUNDING_SLACK:
        worst = int(ps[np.argmax(np.abs(lam))])
        raise ArithmeticError(f"normalized coefficient outside [-2, 2] at p={worst}")
    theta = np.arccos(np.clip(lam / 2, -1.0, 1.0))
    for arr in (ps, lam, theta):
        arr.setflags(write=False)
    return AngleTable(table.spec, float(x_max), ps, a_p, lam, theta)


def zero_coefficient_census(angles: AngleTable, x: float | None = None) -> int:
    stop = len(angles) if x is None else angles.upto(x)
    return sum(1 for a in angles.a_p[:stop] if a == 0)


# Coefficient cache: header line then one decimal per line.


def cache_header(spec: NewformSpec, n_max: int) -> str:
    return f"{CACHE_MAGIC} {CACHE_VERSION} weight={spec.weight} level={spec.level} nmax={n_max}"


def cache_path(cache_dir: str | os.PathLike, spec: NewformSpec, n_max: int) -> Path:
    return Path(cache_dir) / f"coeffs_w{spec.weight}_l{spec.level}_n{n_max}.txt"


def write_coeff_cache(path: str | os.PathLike, table: CoeffTable) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(cache_header(table.spec, table.n_max) + "\n")
        fh.write("\n".join(map(str, table.a[1 : table.n_max + 1])))
        fh.write("\n")
    os.replace(tmp, path)


def read_cache_header(path: str | os.PathLike) -> tuple[NewformSpec, int]:
    with open(path, encoding="ascii") as fh:
        return _parse_header(fh.readline())


def _parse_header(line: str) -> tuple[NewformSpec, int]:
    parts = line.split()
    if len(parts) != 5 or parts[0] != CACHE_MAGIC or parts[1] != CACHE_VERSION:
        raise CacheFormatError(f"bad cache header: {line.strip()!r}")
    try:
        fields = dict(p.split("=", 1) for p in parts[2:])
        spec = NewformSpec(int(fields["weight"]), int(fields["level"]))
        n_max = int(fields["nmax"])
    except (KeyError, ValueError) as exc:
        raise CacheFormatError(f"bad cache header: {line.strip()!r}") from exc
    return spec, n_max


def read_coeff_cache(path: str | os.PathLike) -> CoeffTable:
    with open(path, encoding="ascii") as fh:
        spec, n_max = _parse_header(fh.readline())
        try:
            values = [int(line) for line in fh if line.strip()]
        except ValueError as exc:
            raise CacheFormatError(f"non-integer line in {path}") from exc
    if len(values) != n_max:
        raise CacheFormatError(f"{path}: header says nmax={n_max}, found {len(values)} values")
    return CoeffTable(spec, n_max, [0] + values)

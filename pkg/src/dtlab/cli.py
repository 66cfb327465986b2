"""Command-line front end.

Each subcommand writes a CSV report (plus a JSON twin) to ``--out`` or prints
the CSV to stdout.  Progress goes to stderr.  Exit codes: 0 success,
2 configuration error, 3 budget exceeded, 4 I/O or cache error.
"""

from __future__ import annotations

import argparse
import logging
import math
import re
import sys
import time
from pathlib import Path

from . import lcm_sums as lcm
from . import stats
from .arith import DEFAULT_SIEVE_LIMIT, build_factor_sieve
from .config import RunConfig, parse_grid, parse_real, resolve_cache_dir
from .errors import CacheFormatError, CapacityError, ConfigError
from .factor import BigFactorizer
from .modforms import (
    CoeffTable,
    Interval,
    NewformSpec,
    angle_table,
    cache_path,
    expand_coefficients,
    read_cache_header,
    read_coeff_cache,
    write_coeff_cache,
    zero_coefficient_census,
)
from .report import write_report

log = logging.getLogger("dtlab")

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4


# Shared plumbing -----------------------------------------------------------


def _find_cache(cache_dir: Path, spec: NewformSpec, need: int) -> Path | None:
    """Smallest cached table for this form with nmax >= need."""
    exact = cache_path(cache_dir, spec, need)
    if exact.exists():
        return exact
    pattern = re.compile(rf"coeffs_w{spec.weight}_l{spec.level}_n(\d+)\.txt$")
    best = None
    if cache_dir.is_dir():
        for path in cache_dir.iterdir():
            m = pattern.match(path.name)
            if m and int(m.group(1)) >= need and (best is None or int(m.group(1)) < best[0]):
                best = (int(m.group(1)), path)
    return None if best is None else best[1]


def load_coefficients(cfg: RunConfig, need: int) -> CoeffTable:
    spec = NewformSpec(cfg.weight)
    path = _find_cache(cfg.cache_dir, spec, need)
    if path is not None:
        log.info("reading coefficients from %s", path)
        return read_coeff_cache(path)
    if not cfg.auto_build:
        raise FileNotFoundError(f"no coefficient cache for weight {cfg.weight} with nmax >= {need} in {cfg.cache_dir}")
    log.info("building coefficients for weight %d up to %d", cfg.weight, need)
    table = expand_coefficients(spec, need, budget=cfg.series_budget)
    path = cache_path(cfg.cache_dir, spec, need)
    write_coeff_cache(path, table)
    log.info("wrote %s", path)
    return table


def _sieve_for(x: float):
    return build_factor_sieve(max(DEFAULT_SIEVE_LIMIT, math.floor(x)))


def _angles(cfg: RunConfig, x_max: float):
    need = math.floor(x_max)
    table = load_coefficients(cfg, need)
    sieve = _sieve_for(x_max)
    return sieve, angle_table(table, sieve, x_max)


def _progress(label: str):
    start = time.monotonic()

    def report(done: int, total: int) -> None:
        log.info("%s: %d/%d (%.0fs)", label, done, total, time.monotonic() - start)

    return report


def _factors(cfg: RunConfig, sieve, angles, x_max: float):
    factorizer = BigFactorizer(sieve)
    factors = stats.factor_coefficients(angles, factorizer, x=x_max, progress=_progress("factoring"), workers=cfg.threads)
    if factors.failures:
        log.warning("%d coefficients could not be factored and are excluded", len(factors.failures))
    return factors


def _interval(cfg: RunConfig) -> Interval:
    return Interval(cfg.lo, cfg.hi)


def _base_params(cfg: RunConfig) -> dict:
    return {"weight": cfg.weight, "lo": cfg.lo, "hi": cfg.hi}


def _emit(cfg: RunConfig, schema: str, params: dict, columns, rows) -> None:
    written = write_report(cfg.out, schema, params, columns, rows, stream=sys.stdout)
    for path in written:
        log.info("wrote %s", path)


# Commands --------------------------------------------------------------------


def cmd_coeffs(cfg: RunConfig) -> None:
    spec = NewformSpec(cfg.weight)
    n_max = cfg.n_max
    if n_max is None or n_max < 1:
        raise ConfigError("coeffs needs --nmax >= 1")
    path = cache_path(cfg.cache_dir, spec, n_max)
    if path.exists():
        try:
            if read_cache_header(path) == (spec, n_max):
                log.info("cache %s is current; nothing to do", path)
                print(path)
                return
        except CacheFormatError:
            log.warning("replacing malformed cache %s", path)
    table = expand_coefficients(spec, n_max, budget=cfg.series_budget)
    write_coeff_cache(path, table)
    log.info("wrote %s", path)
    print(path)


def cmd_moments(cfg: RunConfig) -> None:
    x_max = cfg.grid[-1]
    sieve, angles = _angles(cfg, x_max)
    factors = _factors(cfg, sieve, angles, x_max)
    rep = stats.divisor_moment(angles, factors, _interval(cfg), cfg.r, cfg.grid)
    rows = [(row.x, row.count, row.moment, row.ratio, row.numerator) for row in rep.rows]
    params = {**_base_params(cfg), "r": cfg.r, "failures": rep.failures}
    _emit(cfg, "moments", params, ["x", "count", "moment", "ratio", "numerator"], rows)


def cmd_lcm_sums(cfg: RunConfig) -> None:
    rep = lcm.lcm_sum_report(cfg.kind, cfg.r, cfg.grid, exact=cfg.exact)
    rows = [(rep.kind, rep.r, row.x, row.value, row.ratio, row.mode, row.exact) for row in rep.rows]
    params = {"kind": cfg.kind, "r": cfg.r}
    if len(rep.rows) >= 3:
        growth = lcm.report_growth(rep)
        params["changes"] = growth.changes
        params["changes_decreasing"] = growth.changes_decreasing
    _emit(cfg, "lcm-sums", params, ["kind", "r", "x", "sum", "ratio", "mode", "exact_sum"], rows)


def cmd_density(cfg: RunConfig) -> None:
    if cfg.delta is None or cfg.delta < 1:
        raise ConfigError("density needs --delta >= 1")
    sieve, angles = _angles(cfg, cfg.grid[-1])
    rep = stats.density_report(angles, cfg.delta, _interval(cfg), cfg.grid, sieve)
    rows = [(row.x, row.count, row.prime_count, row.density, row.model) for row in rep.rows]
    params = {**_base_params(cfg), "delta": cfg.delta}
    _emit(cfg, "density", params, ["x", "count", "prime_count", "density", "model"], rows)


def cmd_decompose(cfg: RunConfig) -> None:
    x = cfg.grid[-1]
    sieve, angles = _angles(cfg, x)
    factors = _factors(cfg, sieve, angles, x)
    rep = stats.decompose_divisor_sum(angles, factors, x, cfg.r, cfg.c, beta=cfg.beta, interval=_interval(cfg))
    cutoff = math.log(x) / (2 * math.log(math.log(x)))
    rows = [(cls, None, rep.counts[cls], rep.sums[cls]) for cls in stats.CLASSES]
    for s, (n, total) in rep.s_breakdown.items():
        rows.append(("S3" if s < cutoff else "S4", s, n, total))
    rows.append(("total", None, sum(rep.counts.values()), rep.total))
    params = {**_base_params(cfg), "x": x, "c": cfg.c, "beta": rep.beta, "r": cfg.r, "failures": rep.failures}
    _emit(cfg, "decompose", params, ["class", "s", "count", "sum"], rows)


def cmd_sato_tate(cfg: RunConfig) -> None:
    _, angles = _angles(cfg, cfg.grid[-1])
    rows = [
        (row.x, row.count, row.prime_count, row.frequency, row.mass, row.deviation)
        for row in stats.sato_tate_census(angles, _interval(cfg), cfg.grid)
    ]
    params = {**_base_params(cfg), "zero_coefficients": zero_coefficient_census(angles)}
    _emit(cfg, "sato-tate", params, ["x", "count", "prime_count", "frequency", "mass", "deviation"], rows)


def cmd_diagnostics(cfg: RunConfig) -> None:
    if cfg.delta_max is None or cfg.delta_max < 1:
        raise ConfigError("diagnostics needs --delta-max >= 1")
    x = cfg.grid[-1]
    _, angles = _angles(cfg, x)
    size, cond = stats.condition_diagnostics(angles, _interval(cfg), x, cfg.delta_max)
    rows = [(row.delta, row.count, row.delta_ratio, row.phi_ratio, row.in_window) for row in cond]
    params = {
        **_base_params(cfg),
        "x": x,
        "population": size,
        "growth_exponent": stats.coefficient_growth_exponent(angles, x),
    }
    _emit(cfg, "diagnostics", params, ["delta", "count", "delta_ratio", "phi_ratio", "in_window"], rows)


def cmd_baseline(cfg: RunConfig) -> None:
    xs = [math.floor(x) for x in cfg.grid]
    means = stats.divisor_power_means(xs, cfg.r)
    rows = []
    for x, mean in zip(xs, means):
        main = stats.dirichlet_main_term(x) if cfg.r == 1 else None
        rows.append((x, mean, mean / lcm.log_power(x, cfg.r), main))
    params = {"r": cfg.r}
    if len(xs) >= 3:
        params["changes"] = lcm.growth_diagnostic(xs, means, cfg.r).changes
    _emit(cfg, "baseline", params, ["x", "mean", "ratio", "main_term"], rows)


COMMANDS = {
    "coeffs": cmd_coeffs,
    "moments": cmd_moments,
    "lcm-sums": cmd_lcm_sums,
    "density": cmd_density,
    "decompose": cmd_decompose,
    "sato-tate": cmd_sato_tate,
    "diagnostics": cmd_diagnostics,
    "baseline": cmd_baseline,
}


# Argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # logging flags work before or after the subcommand
    verbosity = argparse.ArgumentParser(add_help=False)
    verbosity.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="debug logging on stderr")
    verbosity.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS, help="warnings only on stderr")
    parser = argparse.ArgumentParser(
        prog="dtlab", description="Divisor statistics of modular form coefficients.", parents=[verbosity]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help):
        return sub.add_parser(name, help=help, parents=[verbosity])

    def common(p, form=True, interval=True):
        p.add_argument("--out", type=Path, help="CSV output path (JSON written alongside)")
        if form:
            p.add_argument("--weight", type=int, default=12)
            p.add_argument("--cache-dir", help="coefficient cache (default $DTLAB_CACHE_DIR or .dtlab_cache)")
            p.add_argument("--no-auto-build", action="store_true", help="fail instead of building a missing cache")
            p.add_argument("--series-budget", type=int, default=200_000)
            p.add_argument("--threads", type=int, default=1, help="worker processes for factoring")
        if interval:
            p.add_argument("--lo", default="0", help="interval start; accepts pi, pi/4, 3pi/4")
            p.add_argument("--hi", default="pi")

    def grid(p, required=True):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--grid", help="start:factor:count or a comma list")
        g.add_argument("--x", help="a single x")

    p = command("coeffs", help="build the coefficient cache")
    p.add_argument("--weight", type=int, default=12)
    p.add_argument("--nmax", type=float, required=True)
    p.add_argument("--cache-dir")
    p.add_argument("--series-budget", type=int, default=200_000)

    p = command("moments", help="divisor moments of |a(p)| over primes with angle in I")
    common(p)
    grid(p)
    p.add_argument("--r", type=int, default=1)

    p = command("lcm-sums", help="multivariable lcm sums and their log-power ratios")
    common(p, form=False, interval=False)
    grid(p)
    p.add_argument("--kind", choices=lcm.KINDS, required=True)
    p.add_argument("--r", type=int, default=2)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None)
    mode.add_argument("--float", dest="exact", action="store_false")

    p = command("density", help="density of primes with delta | a(p) and angle in I")
    common(p)
    grid(p)
    p.add_argument("--delta", type=int, required=True)

    p = command("decompose", help="split the divisor sum into factorization classes")
    common(p)
    grid(p)
    p.add_argument("--c", default="0.5")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--beta", default=None)

    p = command("sato-tate", help="angle frequencies against the Sato-Tate measure")
    common(p)
    grid(p)

    p = command("diagnostics", help="divisibility ratios behind the moment conditions")
    common(p)
    grid(p)
    p.add_argument("--delta-max", type=int, required=True)

    p = command("baseline", help="means of d(n)^r over all integers")
    common(p, form=False, interval=False)
    grid(p)
    p.add_argument("--r", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    if get("grid"):
        xs = parse_grid(args.grid)
    elif get("x"):
        xs = [parse_real(args.x)]
    else:
        xs = []
    n_max = get("nmax")
    if n_max is not None:
        if n_max != int(n_max):
            raise ConfigError(f"--nmax must be an integer, got {n_max}")
        n_max = int(n_max)
    beta = get("beta")
    return RunConfig(
        command=args.command,
        weight=get("weight", 12),
        n_max=n_max,
        lo=parse_real(get("lo", "0")),
        hi=parse_real(get("hi", "pi")),
        r=get("r", 1),
        delta=get("delta"),
        delta_max=get("delta_max"),
        grid=xs,
        kind=get("kind"),
        c=parse_real(get("c", "0.5")),
        beta=None if beta is None else parse_real(beta),
        out=get("out"),
        cache_dir=resolve_cache_dir(get("cache_dir")),
        threads=get("threads", 1),
        auto_build=not get("no_auto_build", False),
        series_budget=get("series_budget", 200_000),
        exact=get("exact"),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    verbose, quiet = getattr(args, "verbose", False), getattr(args, "quiet", False)
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        cfg = config_from_args(args)
        COMMANDS[cfg.command](cfg)
    except CapacityError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ValueError as exc:  # ConfigError and argument-range checks in the library
        log.error("%s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

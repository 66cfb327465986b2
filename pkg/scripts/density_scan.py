"""Empirical density of primes p with l | a(p), for every prime l up to a bound.

Each row sets the empirical density beside the model value, with the
binomial standard error and a z-score.  Rows for exceptional primes carry no
model value.

    python scripts/density_scan.py --weight 12 --x 1e5 --ell-max 60
"""

import argparse
import logging
import math
from pathlib import Path

from dtlab.arith import build_factor_sieve, primes_up_to
from dtlab.config import parse_real
from dtlab.modforms import Interval, NewformSpec, angle_table, expand_coefficients
from dtlab.report import write_report
from dtlab.stats import density_report

log = logging.getLogger("density_scan")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weight", type=int, default=12)
    ap.add_argument("--x", default="1e5")
    ap.add_argument("--ell-max", type=int, default=60)
    ap.add_argument("--powers", action="store_true", help="also scan l^2")
    ap.add_argument("--out", type=Path, default=Path("results/density_scan.csv"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    x = parse_real(args.x)
    sieve = build_factor_sieve(max(2_000_000, math.floor(x)))
    spec = NewformSpec(args.weight)
    angles = angle_table(expand_coefficients(spec, math.floor(x)), sieve, x)
    deltas = [int(ell) for ell in primes_up_to(sieve, args.ell_max)]
    if args.powers:
        deltas += [d * d for d in deltas]
    rows = []
    for delta in sorted(deltas):
        row = density_report(angles, delta, Interval.full(), [x], sieve).rows[0]
        if row.model is None:
            rows.append((delta, row.count, row.prime_count, row.density, None, None))
            continue
        se = math.sqrt(row.model * (1 - row.model) / row.prime_count)
        rows.append((delta, row.count, row.prime_count, row.density, row.model, (row.density - row.model) / se))
    write_report(args.out, "density-scan", {"weight": args.weight, "x": x}, ["delta", "count", "prime_count", "density", "model", "z"], rows)
    worst = max((abs(r[5]) for r in rows if r[5] is not None), default=0.0)
    log.info("wrote %s; largest |z| among modeled deltas: %.2f", args.out, worst)


if __name__ == "__main__":
    main()

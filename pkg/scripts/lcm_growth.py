"""Normalized growth of the three lcm sums: sum / (log x)^(2^r - 1) on a grid.

    python scripts/lcm_growth.py --r 2 --grid 500:4:4
    python scripts/lcm_growth.py --r 3 --grid 20:2:6
"""

import argparse
import logging
from pathlib import Path

from dtlab.config import parse_grid
from dtlab.lcm_sums import KINDS, lcm_sum_report, report_growth
from dtlab.report import write_report

log = logging.getLogger("lcm_growth")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--grid", default="500:4:4")
    ap.add_argument("--kinds", nargs="+", choices=KINDS, default=list(KINDS))
    ap.add_argument("--out", type=Path, default=Path("results/lcm_growth.csv"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    grid = parse_grid(args.grid)
    rows, params = [], {"r": args.r, "grid": grid}
    for kind in args.kinds:
        rep = lcm_sum_report(kind, args.r, grid)
        changes = [None] + (report_growth(rep).changes if len(grid) >= 3 else [None] * (len(grid) - 1))
        for row, change in zip(rep.rows, changes):
            rows.append((kind, args.r, row.x, row.value, row.ratio, change, row.mode))
        last = rep.rows[-1]
        log.info("%-16s r=%d  ratio at x=%g: %.6f (estimate of the leading constant)", kind, args.r, last.x, last.ratio)
    write_report(args.out, "lcm-growth", params, ["kind", "r", "x", "sum", "ratio", "change", "mode"], rows)
    log.info("wrote %s", args.out)


if __name__ == "__main__":
    main()

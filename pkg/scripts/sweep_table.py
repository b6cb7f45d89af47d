"""Write a truncation sweep as CSV (level, sup, min_l1_norm, decimals)."""

import argparse
import csv
import sys
from fractions import Fraction

from polarfloor.config import SweepConfig
from polarfloor.examples import DENSITY_RULES


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("kind", choices=("example1", "example2", "example3"))
    ap.add_argument("--levels", type=int, nargs=2, default=(1, 10), metavar=("L1", "L2"))
    ap.add_argument("--f", choices=sorted(DENSITY_RULES), default="ones-odd")
    ap.add_argument("--quantity", choices=("min_l1_norm", "sup"), default="min_l1_norm")
    ap.add_argument("--threshold", type=Fraction)
    args = ap.parse_args(argv)
    lo, hi = args.levels
    cfg = SweepConfig(args.kind, tuple(range(lo, hi + 1)), args.f, None, args.threshold, args.quantity)
    res = cfg.run()
    w = csv.writer(sys.stdout)
    w.writerow(["level", "sup", "min_l1_norm", "sup_float", "min_l1_norm_float"])
    for r in res.rows:
        w.writerow([r.level, r.sup, r.min_l1_norm, float(r.sup), float(r.min_l1_norm)])
    print(f"# {res.quantity}: {'diverging' if res.diverging else 'not diverging'} (heuristic verdict)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

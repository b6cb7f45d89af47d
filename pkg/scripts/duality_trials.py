"""Randomized check that sup over C_1 is finite exactly when a dominating density exists."""

import argparse
import time

from polarfloor.config import DualityTrialConfig, run_duality_trials


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-atoms", type=int, default=6)
    ap.add_argument("--max-generators", type=int, default=3)
    args = ap.parse_args(argv)
    cfg = DualityTrialConfig(args.trials, args.seed, args.max_atoms, args.max_generators)
    t0 = time.perf_counter()
    s = run_duality_trials(cfg)
    dt = time.perf_counter() - t0
    print(f"{s.agreed}/{s.trials} agree ({s.with_density} with a dominating density) in {dt:.2f}s")
    for mode, (agreed, total) in sorted(s.by_mode.items()):
        print(f"  {mode:22s} {agreed}/{total}")
    return 0 if s.agreed == s.trials else 1


if __name__ == "__main__":
    raise SystemExit(main())

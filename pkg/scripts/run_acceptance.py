"""Run the acceptance criteria and print one PASS/FAIL line each.

Usage: python scripts/run_acceptance.py [--seed S] [--trunc N] [--only 1,4,9]
"""

import argparse
import sys
import time

from gentwist.acceptance import AcceptanceConfig, run_criterion, CRITERIA


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trunc", type=int, default=5)
    p.add_argument("--only", default="")
    args = p.parse_args()
    cfg = AcceptanceConfig(seed=args.seed, trunc=args.trunc)
    numbers = [int(k) for k in args.only.split(",") if k] or range(1, len(CRITERIA) + 1)
    failed = 0
    for k in numbers:
        t0 = time.perf_counter()
        res = run_criterion(k, cfg)
        failed += not res.ok
        print(f"{res.line()}\t{time.perf_counter() - t0:.1f}s", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

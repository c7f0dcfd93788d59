#!/usr/bin/env python3
"""Run the acceptance checks and print one line per criterion.

    python3 scripts/run_acceptance.py              # all seven
    python3 scripts/run_acceptance.py 4 5 6        # a subset
    python3 scripts/run_acceptance.py --json out.json
"""

import argparse
import json
import sys

from feq.acceptance import AcceptanceConfig, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("criteria", nargs="*", type=int, help="criterion numbers (default: all)")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--draws", type=int, default=200, help="draws per branch for criteria 1 and 2")
    ap.add_argument("--json", help="also write the full details here")
    args = ap.parse_args()
    cfg = AcceptanceConfig(draws=args.draws, roundtrip_draws=args.draws, seed=args.seed)
    results = run_all(cfg, args.criteria or None)
    for r in results:
        print(r.line(), flush=True)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([{"criterion": r.number, "title": r.title, "passed": r.passed, "summary": r.summary,
                        "seconds": round(r.seconds, 2), "details": r.details} for r in results],
                      fh, indent=2, default=str)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Oracle sweeps over the standard contexts, one JSON line per context."""

import argparse
import json

from feq.acceptance import SWEEP_CONTEXTS
from feq.algebra import make_carrier
from feq.equations import build_context
from feq.oracle import SweepConfig, sweep
from feq.sampling import standard_fixed
from feq.serialize import sweep_report_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--structured", type=int, default=100)
    ap.add_argument("--unstructured", type=int, default=50)
    ap.add_argument("--dump", help="directory for tuples that fail to classify")
    args = ap.parse_args()
    cfg = SweepConfig(structured=args.structured, unstructured=args.unstructured, dump_dir=args.dump)
    clean = True
    for eq, specs in SWEEP_CONTEXTS.items():
        for spec in specs:
            c = make_carrier(spec)
            rep = sweep(build_context(eq, c, standard_fixed(eq, c)), cfg, args.seed)
            clean &= rep.clean
            print(json.dumps({**sweep_report_to_json(rep), "clean": rep.clean}, sort_keys=True), flush=True)
    return 0 if clean else 1


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Run every verification suite and print the combined report.

`sosdw verify` runs one suite per invocation; this driver runs all of
them (or a chosen subset) and exits nonzero if any row fails.

Example:
    python scripts/run_checks.py --seed 0 --draws 20
    python scripts/run_checks.py --suites dybe,hexagon --draws 100
"""

from __future__ import annotations

import argparse
import sys
import time

from sosdw.verify import SUITE_NAMES, run_suite


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suites", default=",".join(SUITE_NAMES),
                    help="comma list of suite names (default: all)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--draws", type=int, default=20)
    args = ap.parse_args(argv)

    names = [n.strip() for n in args.suites.split(",") if n.strip()]
    bad = [n for n in names if n not in SUITE_NAMES]
    if bad:
        ap.error(f"unknown suites {bad}; choose from {list(SUITE_NAMES)}")

    all_passed = True
    t0 = time.perf_counter()
    for name in names:
        report = run_suite(name, args.seed, args.draws)
        print(report.render())
        print()
        all_passed = all_passed and report.passed
    elapsed = time.perf_counter() - t0
    print(f"{len(names)} suites, {args.draws} draws each, "
          f"{elapsed:.2f} s -> {'PASS' if all_passed else 'FAIL'}")
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())

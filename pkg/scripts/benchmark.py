#!/usr/bin/env python3
"""Benchmark every route over a size range and summarize scaling.

Thin driver over `sosdw bench` that also prints a per-route summary of
how wall time grows with the term or node count.

Example:
    python scripts/benchmark.py --lmin 1 --lmax 6 --csv bench.csv
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from contextlib import redirect_stdout

from sosdw.cli import main as cli_main
from sosdw.core import ROUTES


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lmin", type=int, default=1)
    ap.add_argument("--lmax", type=int, default=5)
    ap.add_argument("--routes", default=",".join(ROUTES))
    ap.add_argument("--csv", default=None,
                    help="also write the raw rows to this path")
    args = ap.parse_args(argv)

    bench_args = ["bench", "--lmin", str(args.lmin), "--lmax",
                  str(args.lmax), "--routes", args.routes]
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(bench_args)
    if code != 0:
        sys.stderr.write(buf.getvalue())
        return code
    text = buf.getvalue()
    print(text, end="")

    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.csv}")

    rows = list(csv.DictReader(io.StringIO(text)))
    print()
    print("scaling summary (largest size per route):")
    by_route = {}
    for row in rows:
        by_route.setdefault(row["route"], []).append(row)
    for route, entries in by_route.items():
        last = entries[-1]
        print(f"  {route:<13} L={last['L']}  "
              f"workload {last['nodes_or_terms']:>8}  "
              f"wall {float(last['wall_ms']):10.3f} ms")
    return 0


if __name__ == "__main__":
    sys.exit(main())

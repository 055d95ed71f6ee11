"""Classify the shipped 8-10 crossing table and print the MQ index lists.

Usage: python scripts/run_section4.py [--workers N] [--format text|json|csv]
Exit status is nonzero when the computed lists differ from the expected ones.
"""
import argparse
import sys
import time
from pathlib import Path

from mqindex.tables import load_dataset, report_emit, reproduce_section4, run_pipeline

DATA = Path(__file__).resolve().parent.parent / "data"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", default=str(DATA / "knots_10.jsonl"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--format", choices=("text", "json", "csv"), default="text")
    args = ap.parse_args()
    start = time.perf_counter()
    report = reproduce_section4(run_pipeline(load_dataset(args.dataset), workers=args.workers))
    sys.stdout.write(report_emit(report, args.format).decode())
    print(f"elapsed: {time.perf_counter() - start:.1f} s", file=sys.stderr)
    return 1 if report.mismatches else 0


if __name__ == "__main__":
    sys.exit(main())

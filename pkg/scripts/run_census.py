"""Enumerate a small machine family and print the census report as JSON."""
import argparse
import json
import time

from tmchaos.census import MachineFamily, halting_census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=2)
    ap.add_argument("--symbols", type=int, default=2)
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = halting_census(MachineFamily(args.states, args.symbols), args.budget, workers=args.workers)
    print(json.dumps(report.to_dict(), indent=2))
    print(f"# {report.total} machines in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

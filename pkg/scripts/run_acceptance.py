"""Run the acceptance criteria and print one pass/fail line each."""

import argparse
import sys

from robin_spectra.acceptance import run_all


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("criteria", type=int, nargs="*", help="criterion numbers (default: all)")
    args = p.parse_args()
    results = run_all(args.criteria or None)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())

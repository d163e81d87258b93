"""Controlled vs uncontrolled trajectories for the default scenario.

Writes the comparison CSVs and the four SVG charts to ``--out``
(default ``results/figures``) and prints the cost summary.
"""
import argparse
import sys

from epioptic.cli import main


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/figures")
    ap.add_argument("--pmp", action="store_true", help="also report J for the PMP optimum")
    args = ap.parse_args()
    argv = ["compare", "--out", args.out]
    if args.pmp:
        argv.append("--with-pmp")
    sys.exit(main(argv))

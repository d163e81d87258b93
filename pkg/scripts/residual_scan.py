"""Scan K(U0) and its stationarity residual for the default scenario.

K is cubic in U0 with a negative leading coefficient, so it has one local
minimum and one local maximum. The script locates both and prints where
the closed-form U0 sits among them.
"""
import argparse

import numpy as np

from epioptic.control import cost_weight_from_attenuation
from epioptic.model import EpidemicParams
from epioptic.optimize import golden_section_minimize, scan_sign_changes, solve_u0_bisection
from epioptic.series import CalibrationInput, optimal_u0_closed_form, stationarity_residual, surrogate_cost


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", type=float, default=0.2)
    ap.add_argument("--mu", type=float, default=0.1)
    ap.add_argument("--q", type=float, default=500.0)
    ap.add_argument("--t", type=float, default=100.0)
    ap.add_argument("--hi", type=float, default=5.0, help="upper end of the U0 scan")
    args = ap.parse_args()

    inp = CalibrationInput(EpidemicParams(args.beta, args.mu), 0.95, 0.05, args.t,
                           cost_weight_from_attenuation(args.q, args.t))
    f = lambda u: stationarity_residual(u, inp)
    print(f"{'U0':>8} {'K(U0)':>14} {'dK/dU0':>14}")
    for u in np.linspace(0.0, min(args.hi, 1.0), 21):
        print(f"{u:8.3f} {surrogate_cost(u, inp):14.6g} {f(u):14.6g}")

    print()
    for lo, hi, direction in scan_sign_changes(f, 1e-6, args.hi, 2000):
        root = solve_u0_bisection(inp, (lo, hi)).value
        kind = "local max of K" if direction < 0 else "local min of K"
        print(f"stationary point U0 = {root:.10f}  ({kind}, K = {surrogate_cost(root, inp):.6g})")
        if direction > 0:
            gmin, _ = golden_section_minimize(lambda u: surrogate_cost(u, inp), lo, hi, tol=1e-12)
            print(f"  golden-section minimum on that bracket: {gmin:.10f}")
    try:
        print(f"closed form U0 = {optimal_u0_closed_form(inp):.10f}")
    except ArithmeticError as exc:
        print(f"closed form: {exc}")


if __name__ == "__main__":
    main()

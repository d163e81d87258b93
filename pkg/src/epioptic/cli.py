"""``epioptic`` command-line interface.

Exit codes: 0 ok, 1 verification failure, 2 usage, 3 computation, 4 I/O.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

from .control import check_admissible
from .errors import ConfigurationError, DivergenceError, DomainError, NoRealRootError
from .pipeline import (
    Scenario,
    atomic_write,
    comparison_violations,
    format_config,
    format_number,
    parse_config,
    run,
    trajectory_csv,
    verify,
)
from .simulate import simulate_constant, simulate_controlled, simulate_uncontrolled
from .svg import Series, line_chart

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_COMPUTE, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value scenario file")
    parser.add_argument("--beta", type=float)
    parser.add_argument("--mu", type=float)
    parser.add_argument("--s0", type=float)
    parser.add_argument("--i0", type=float)
    parser.add_argument("--r0", type=float)
    parser.add_argument("--t", dest="t_horizon", type=float, help="horizon T in days")
    parser.add_argument("--q", type=float, help="attenuation factor at T/2")
    parser.add_argument("--u-max", dest="u_max", type=float)
    parser.add_argument("--step", type=float)
    parser.add_argument("--method", choices=["classical", "rk4"])
    parser.add_argument("--out", dest="output_dir", help="output directory")
    parser.add_argument("--strict", action="store_true", help="fail when U0 violates the control bound")
    parser.add_argument("--dump-config", action="store_true", help="write scenario.cfg to the output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epioptic", description="Euler-Lagrange vaccination control for an SIR outbreak")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="calibrate A and U0 and report the control law")
    _common(p)
    p = sub.add_parser("simulate", help="write trajectory CSV files")
    _common(p)
    p.add_argument("--controlled", action="store_true")
    p.add_argument("--uncontrolled", action="store_true")
    p.add_argument("--constant", type=float, metavar="U", help="constant vaccination rate")
    p = sub.add_parser("compare", help="controlled vs uncontrolled: summary, CSV and SVG plots")
    _common(p)
    p.add_argument("--with-pmp", action="store_true", help="also solve the PMP problem and report j_pmp")
    p = sub.add_parser("verify", help="run the cross-checks, including the PMP sweep")
    _common(p)
    p.add_argument("--pmp-gap-tol", type=float, default=0.05, help="allowed relative J gap to the PMP optimum")
    return parser


def load_scenario(args: argparse.Namespace) -> Scenario:
    values: dict[str, object] = {}
    if args.config is not None:
        try:
            values.update(parse_config(args.config.read_text()))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    for f in fields(Scenario):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return Scenario(**values)


def _out_dir(scenario: Scenario) -> Path:
    out = Path(scenario.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_summary(result, out) -> None:
    s = result.summary
    print(f"A          = {s.a:.12g}", file=out)
    print(f"U0         = {s.u0:.12g}", file=out)
    print(f"decay rate = {s.decay_rate:.12g}", file=out)
    print(f"u(t)       = {s.u0:.12g} * exp(-{s.decay_rate:.12g} t)", file=out)
    if result.degenerate:
        print("note: i0*beta*S0 = 0, degenerate calibration path (U0 = 0)", file=out)
    rep = check_admissible(result.design)
    print(f"admissible = {rep.admissible} ({rep.reason})", file=out)
    print(f"J controlled   = {s.j_controlled:.12g}", file=out)
    print(f"J uncontrolled = {s.j_uncontrolled:.12g}", file=out)
    print(f"J u=0.9        = {s.j_constant_09:.12g}", file=out)
    if s.j_pmp is not None:
        print(f"J PMP          = {s.j_pmp:.12g}", file=out)


def cmd_solve(scenario: Scenario, args, out) -> int:
    result = run(scenario)
    _print_summary(result, out)
    if args.strict and not result.summary.admissible:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_simulate(scenario: Scenario, args, out) -> int:
    from .pipeline import calibrate

    inp = scenario.calibration_input
    variants = []
    if args.controlled or not (args.uncontrolled or args.constant is not None):
        u0, _ = calibrate(scenario)
        variants.append(("controlled", simulate_controlled(inp, scenario.design(u0), scenario.step, scenario.method, scenario.r0)))
    if args.uncontrolled:
        variants.append(("uncontrolled", simulate_uncontrolled(inp, scenario.step, scenario.method, scenario.r0)))
    if args.constant is not None:
        variants.append(("constant", simulate_constant(inp, args.constant, scenario.step, scenario.method, scenario.r0)))
    d = _out_dir(scenario)
    for name, traj in variants:
        path = d / f"trajectory_{name}.csv"
        atomic_write(path, trajectory_csv(traj))
        print(f"wrote {path}", file=out)
    return EXIT_OK


def _plots(result) -> dict[str, str]:
    c, f = result.controlled, result.uncontrolled
    t_c, t_f = c.times.tolist(), f.times.tolist()
    return {
        "control.svg": line_chart([Series("u(t)", t_c, c.u.tolist())], "Vaccination control", "t (days)", "u(t)"),
        "susceptible.svg": line_chart(
            [Series("with control", t_c, c.s.tolist()), Series("without control", t_f, f.s.tolist())],
            "Susceptible", "t (days)", "S(t)"),
        "infected.svg": line_chart(
            [Series("with control", t_c, c.i.tolist()), Series("without control", t_f, f.i.tolist())],
            "Infected", "t (days)", "I(t)"),
        "removed.svg": line_chart(
            [Series("with control", t_c, c.r.tolist()), Series("without control", t_f, f.r.tolist())],
            "Removed", "t (days)", "R(t)"),
    }


def cmd_compare(scenario: Scenario, args, out) -> int:
    result = run(scenario, with_pmp=args.with_pmp)
    _print_summary(result, out)
    d = _out_dir(scenario)
    atomic_write(d / "summary.csv", result.summary.to_csv())
    atomic_write(d / "trajectory_controlled.csv", trajectory_csv(result.controlled))
    atomic_write(d / "trajectory_uncontrolled.csv", trajectory_csv(result.uncontrolled))
    for name, text in _plots(result).items():
        atomic_write(d / name, text)
    bad = comparison_violations(result.controlled, result.uncontrolled)
    for msg in bad:
        print(f"VIOLATION: {msg}", file=out)
    if args.strict and not result.summary.admissible:
        return EXIT_VERIFY
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_verify(scenario: Scenario, args, out) -> int:
    checks = verify(scenario, pmp_gap_tol=args.pmp_gap_tol, strict=args.strict)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.measured}", file=out)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print(f"failed: {', '.join(failed)}", file=out)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "simulate": cmd_simulate, "compare": cmd_compare, "verify": cmd_verify}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = load_scenario(args)
    except (UsageError, ConfigurationError, DomainError, TypeError) as exc:
        print(f"epioptic: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.dump_config:
            path = _out_dir(scenario) / "scenario.cfg"
            atomic_write(path, format_config(scenario))
            print(f"wrote {path}", file=out)
        return COMMANDS[args.command](scenario, args, out)
    except (ConfigurationError, DomainError) as exc:
        print(f"epioptic: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoRealRootError, DivergenceError, ArithmeticError) as exc:
        print(f"epioptic: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"epioptic: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

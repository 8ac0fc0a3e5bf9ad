"""Batch command line front end.

Subcommands:
  solve <scenario>                       run the configured solver
  evaluate <scenario> --pattern FILE...  check user-supplied patterns
  profile <scenario>                     export access profiles only
  track <scenario>                       export expanded ground tracks only

Exit codes: 0 success, 2 infeasible, 3 input error,
4 stopped at a limit with a feasible incumbent.
"""
from __future__ import annotations

import argparse
import sys

from .bilp import STATUS_FEASIBLE, STATUS_INFEASIBLE, SolverConfig
from .scenario import (
    ScenarioError,
    evaluate,
    parse_scenario,
    render_report,
    run,
    write_profiles,
    write_tracks,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT_ERROR = 3
EXIT_LIMIT_INCUMBENT = 4


def _add_common(parser):
    parser.add_argument("scenario", help="scenario JSON file")
    parser.add_argument("--out-dir", default=None, help="artifact directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satpattern",
                                     description="constellation pattern design toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a scenario end to end")
    _add_common(p_solve)
    p_solve.add_argument("--solver", choices=["quasi-symmetric", "bilp"],
                         help="override the scenario's solver")
    p_solve.add_argument("--time-limit", type=float, default=None,
                         help="wall-clock limit for the covering solver, seconds")
    p_solve.add_argument("--deterministic", action="store_true", default=None,
                         help="force deterministic mode")

    p_eval = sub.add_parser("evaluate", help="evaluate supplied pattern files")
    _add_common(p_eval)
    p_eval.add_argument("--pattern", action="append", required=True,
                        help="pattern index-list file, one per sub-constellation in order")

    p_profile = sub.add_parser("profile", help="export seed access profiles")
    _add_common(p_profile)

    p_track = sub.add_parser("track", help="export expanded ground tracks")
    _add_common(p_track)
    return parser


def _apply_overrides(scenario, args):
    if getattr(args, "solver", None):
        if args.solver == "quasi-symmetric" and len(scenario.sub_constellations) != 1:
            raise ScenarioError(
                "the quasi-symmetric solver handles exactly one sub-constellation")
        scenario.solver = args.solver
    cfg = scenario.solver_config
    time_limit = getattr(args, "time_limit", None)
    deterministic = getattr(args, "deterministic", None)
    if time_limit is not None or deterministic is not None:
        scenario.solver_config = SolverConfig(
            time_limit=time_limit if time_limit is not None else cfg.time_limit,
            node_limit=cfg.node_limit,
            lp_tolerance=cfg.lp_tolerance,
            deterministic=deterministic if deterministic is not None else cfg.deterministic,
            improvement_rounds=cfg.improvement_rounds,
            rng_seed=cfg.rng_seed,
        )
    return scenario


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = parse_scenario(args.scenario)
        scenario = _apply_overrides(scenario, args)
        out_dir = args.out_dir

        if args.command == "solve":
            report = run(scenario, out_dir=out_dir)
            sys.stdout.write(render_report(report))
            if report.status == STATUS_INFEASIBLE:
                return EXIT_INFEASIBLE
            if report.status == STATUS_FEASIBLE:
                return EXIT_LIMIT_INCUMBENT
            return EXIT_OK

        if args.command == "evaluate":
            report = evaluate(scenario, args.pattern, out_dir=out_dir)
            sys.stdout.write(render_report(report))
            return EXIT_OK

        if args.command == "profile":
            manifest = write_profiles(scenario, out_dir or ".")
            sys.stdout.write("\n".join(manifest) + "\n")
            return EXIT_OK

        if args.command == "track":
            manifest = write_tracks(scenario, out_dir or ".")
            sys.stdout.write("\n".join(manifest) + "\n")
            return EXIT_OK
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

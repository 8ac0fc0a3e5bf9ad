"""Scenario files: parsing, solving, verification, and artifact export.

A scenario is a JSON document naming the seed sub-constellations, the
targets with their coverage requirements, the grid length, and a solver
choice.  ``run`` orchestrates the full pipeline: size the time grid off
the first sub-constellation's repeat period, sample every seed access
profile, dispatch a solver, then re-evaluate the returned patterns
through the independent coverage-algebra path before anything is
written (a solver claiming feasibility that fails re-evaluation is a
hard error, not a report line).

Angles in scenario files are degrees; they are converted to radians on
parse.  The epoch is ISO-8601 UTC, default J2000.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .access import (
    TargetPoint,
    TargetSet,
    TimeGrid,
    ZeroAccessWarning,
    profile_to_csv,
    seed_access_profile,
)
from .bilp import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    SolverConfig,
    assemble,
    solve as bilp_solve,
)
from .coverage import (
    CoverageProblem,
    CoverageRequirement,
    evaluate_system,
    read_pattern,
    timeline_to_csv,
    write_pattern,
)
from .orbits import (
    DEFAULT_CONSTANTS,
    PeriodRatio,
    PhysicalConstants,
    RgtElements,
    solve_semi_major_axis,
)
from .postprocess import elements_from_pattern, expanded_track, members_to_csv, track_to_csv
from .quasisym import InfeasibleError, solve as qs_solve

J2000_UTC = datetime(2000, 1, 1, 12, 0, 0, tzinfo=timezone.utc)

SOLVER_QUASI_SYMMETRIC = "quasi-symmetric"
SOLVER_BILP = "bilp"


class ScenarioError(ValueError):
    """Scenario file is syntactically or semantically invalid."""


@dataclass
class SubConstellation:
    label: str
    elements: RgtElements


@dataclass
class Scenario:
    name: str
    length: int
    solver: str
    sub_constellations: list[SubConstellation]
    targets: TargetSet
    requirements: list[CoverageRequirement]
    solver_config: SolverConfig
    epoch: float = 0.0  # s past J2000


@dataclass
class RunReport:
    scenario_name: str
    solver: str
    status: str
    objective: int | None
    bound: float | None
    node_count: int
    wall_time: float
    n_sats_per_sub: list
    satisfied_per_target: list
    all_satisfied: bool
    standalone_fraction: list   # [target][sub], share of steps with >= 1 in view
    manifest: list = field(default_factory=list)
    deterministic: bool = True


def parse_epoch(text: str) -> float:
    """ISO-8601 UTC timestamp to seconds past J2000."""
    stamp = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return (stamp - J2000_UTC).total_seconds()


def _need(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ScenarioError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _parse_requirement(spec, length: int, where: str) -> CoverageRequirement:
    if isinstance(spec, int):
        return CoverageRequirement.constant(length, spec)
    if not isinstance(spec, dict):
        raise ScenarioError(f"{where}: requirement must be an integer or an object")
    kind = _need(spec, "type", where)
    try:
        if kind == "constant":
            return CoverageRequirement.constant(length, _need(spec, "fold", where))
        if kind == "piecewise":
            segments = [(seg["start"], seg["end"], seg["fold"])
                        for seg in _need(spec, "segments", where)]
            return CoverageRequirement.piecewise(length, _need(spec, "default", where), segments)
        if kind == "impulses":
            return CoverageRequirement.at_indices(
                length, _need(spec, "indices", where), spec.get("fold", 1))
    except (KeyError, ValueError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc
    raise ScenarioError(f"{where}: unknown requirement type {kind!r}")


def _parse_elevation(spec, where: str):
    if isinstance(spec, (int, float)):
        return math.radians(spec)
    if isinstance(spec, list):
        return np.radians(np.asarray(spec, dtype=float))
    raise ScenarioError(f"{where}: min_elevation_deg must be a number or a list")


def parse_scenario(path) -> Scenario:
    """Load and validate a scenario file; all angles converted to radians."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ScenarioError(f"scenario file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc

    where = str(path)
    if raw.get("schema_version") != 1:
        raise ScenarioError(f"{where}: schema_version must be 1")
    length = _need(raw, "length", where)
    if not isinstance(length, int) or length <= 0:
        raise ScenarioError(f"{where}: length must be a positive integer")
    solver = raw.get("solver", SOLVER_BILP)
    if solver not in (SOLVER_QUASI_SYMMETRIC, SOLVER_BILP):
        raise ScenarioError(f"{where}: solver must be '{SOLVER_QUASI_SYMMETRIC}' or '{SOLVER_BILP}'")

    epoch = parse_epoch(raw["epoch"]) if "epoch" in raw else 0.0

    subs = []
    sub_specs = _need(raw, "sub_constellations", where)
    if not sub_specs:
        raise ScenarioError(f"{where}: at least one sub-constellation required")
    for z, spec in enumerate(sub_specs):
        here = f"{where}: sub_constellations[{z}]"
        try:
            tau = PeriodRatio.parse(str(_need(spec, "tau", here)))
            elements = RgtElements(
                tau=tau,
                eccentricity=float(spec.get("eccentricity", 0.0)),
                inclination=math.radians(float(_need(spec, "inclination_deg", here))),
                arg_perigee=math.radians(float(spec.get("arg_perigee_deg", 0.0))),
                raan=math.radians(float(spec.get("raan_deg", 0.0))),
                mean_anomaly=math.radians(float(spec.get("mean_anomaly_deg", 0.0))),
                epoch=epoch,
            )
        except ValueError as exc:
            raise ScenarioError(f"{here}: {exc}") from exc
        subs.append(SubConstellation(label=spec.get("label", f"z{z + 1}"), elements=elements))

    if solver == SOLVER_QUASI_SYMMETRIC and len(subs) != 1:
        raise ScenarioError(
            f"{where}: the quasi-symmetric solver handles exactly one sub-constellation"
        )

    points = []
    requirements = []
    target_specs = _need(raw, "targets", where)
    if not target_specs:
        raise ScenarioError(f"{where}: at least one target required")
    for j, spec in enumerate(target_specs):
        here = f"{where}: targets[{j}]"
        try:
            point = TargetPoint(
                latitude=math.radians(float(_need(spec, "latitude_deg", here))),
                longitude=math.radians(float(_need(spec, "longitude_deg", here))),
                min_elevation=_parse_elevation(spec.get("min_elevation_deg", 0.0), here),
                name=spec.get("name", f"target{j + 1}"),
            )
        except ValueError as exc:
            raise ScenarioError(f"{here}: {exc}") from exc
        points.append(point)
        requirements.append(_parse_requirement(spec.get("requirement", 1), length, here))

    cfg_spec = raw.get("solver_config", {})
    try:
        solver_config = SolverConfig(
            time_limit=cfg_spec.get("time_limit"),
            node_limit=cfg_spec.get("node_limit"),
            lp_tolerance=cfg_spec.get("lp_tolerance", 1e-9),
            deterministic=cfg_spec.get("deterministic", True),
            improvement_rounds=cfg_spec.get("improvement_rounds", 200),
            rng_seed=cfg_spec.get("rng_seed", 7),
        )
    except ValueError as exc:
        raise ScenarioError(f"{where}: solver_config: {exc}") from exc

    return Scenario(
        name=raw.get("name", path.stem),
        length=length,
        solver=solver,
        sub_constellations=subs,
        targets=TargetSet(tuple(points)),
        requirements=requirements,
        solver_config=solver_config,
        epoch=epoch,
    )


def build_problem(scenario: Scenario,
                  consts: PhysicalConstants = DEFAULT_CONSTANTS):
    """Grid, profiles, and the stacked coverage problem for a scenario.

    The grid step is the first sub-constellation's repeat period over L;
    sub-constellations whose repeat period strays from it are rejected
    (synchronization condition), as is any all-zero access profile.
    """
    periods = []
    for sub in scenario.sub_constellations:
        geom = solve_semi_major_axis(sub.elements.tau, sub.elements.eccentricity,
                                     sub.elements.inclination, consts)
        periods.append(geom.t_r)
    grid = TimeGrid.for_period(periods[0], scenario.length)

    profiles = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroAccessWarning)
        for j, point in enumerate(scenario.targets):
            row = []
            for z, sub in enumerate(scenario.sub_constellations):
                profile = seed_access_profile(sub.elements, point, grid, consts)
                if profile.is_zero:
                    raise ScenarioError(
                        f"all-zero access profile for target j={j + 1} "
                        f"({point.name}), sub-constellation z={z + 1} ({sub.label})"
                    )
                row.append(profile)
            profiles.append(row)

    try:
        problem = CoverageProblem(
            profiles=profiles,
            requirements=scenario.requirements,
            grid=grid,
            repeat_periods=tuple(periods),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return grid, problem


def _report_from_evaluation(scenario, evaluation, status, objective, bound,
                            node_count, wall_time) -> RunReport:
    return RunReport(
        scenario_name=scenario.name,
        solver=scenario.solver,
        status=status,
        objective=objective,
        bound=bound,
        node_count=node_count,
        wall_time=wall_time,
        n_sats_per_sub=evaluation.n_sats_per_sub,
        satisfied_per_target=evaluation.satisfied_per_target,
        all_satisfied=evaluation.all_satisfied,
        standalone_fraction=evaluation.standalone_fraction.tolist(),
        deterministic=scenario.solver_config.deterministic,
    )


def render_report(report: RunReport) -> str:
    """Human-readable report; wall time is omitted in deterministic mode so
    reruns produce byte-identical artifacts."""
    lines = [
        f"scenario: {report.scenario_name}",
        f"solver: {report.solver}",
        f"status: {report.status}",
    ]
    if report.objective is not None:
        split = " + ".join(str(n) for n in report.n_sats_per_sub)
        lines.append(f"satellites: {report.objective}"
                     + (f" ({split})" if len(report.n_sats_per_sub) > 1 else ""))
    if report.bound is not None and math.isfinite(report.bound):
        lines.append(f"lower bound: {report.bound:g}")
    lines.append(f"nodes: {report.node_count}")
    if report.deterministic:
        lines.append("wall time: not recorded (deterministic mode)")
    else:
        lines.append(f"wall time: {report.wall_time:.1f} s")
    lines.append(f"all targets satisfied: {'yes' if report.all_satisfied else 'NO'}")
    for j, ok in enumerate(report.satisfied_per_target):
        fracs = ", ".join(
            f"z{z + 1} {100 * f:.1f}%" for z, f in enumerate(report.standalone_fraction[j]))
        lines.append(f"  target {j + 1}: {'satisfied' if ok else 'NOT satisfied'}"
                     f" (standalone coverage {fracs})")
    if report.manifest:
        lines.append("files:")
        lines.extend(f"  {name}" for name in report.manifest)
    return "\n".join(lines) + "\n"


def _write_artifacts(scenario, grid, problem, patterns, evaluation, report,
                     out_dir, consts) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []

    for z, (sub, pattern) in enumerate(zip(scenario.sub_constellations, patterns), start=1):
        name = f"pattern_z{z}.txt"
        write_pattern(pattern, out / name)
        manifest.append(name)
        if pattern.n_sats:
            members = elements_from_pattern(sub.elements, pattern, grid)
            name = f"members_z{z}.csv"
            members_to_csv(members, out / name)
            manifest.append(name)
        name = f"track_z{z}.csv"
        track_to_csv(expanded_track(sub.elements, grid, consts), out / name)
        manifest.append(name)

    for j in range(problem.num_targets):
        name = f"timeline_target{j + 1}.csv"
        timeline_to_csv(evaluation.timelines[j], scenario.requirements[j], out / name)
        manifest.append(name)

    report.manifest = manifest + ["report.txt"]
    (out / "report.txt").write_text(render_report(report))


def run(scenario: Scenario, out_dir=None,
        consts: PhysicalConstants = DEFAULT_CONSTANTS) -> RunReport:
    """Solve a scenario end to end and (optionally) write its artifacts."""
    grid, problem = build_problem(scenario, consts)

    if scenario.solver == SOLVER_QUASI_SYMMETRIC:
        try:
            solution = qs_solve(
                [row[0] for row in problem.profiles], scenario.requirements)
        except InfeasibleError:
            return RunReport(
                scenario_name=scenario.name, solver=scenario.solver,
                status=STATUS_INFEASIBLE, objective=None, bound=None,
                node_count=0, wall_time=0.0, n_sats_per_sub=[],
                satisfied_per_target=[], all_satisfied=False,
                standalone_fraction=[],
                deterministic=scenario.solver_config.deterministic,
            )
        patterns = [solution.pattern]
        status, objective, bound, node_count, wall_time = (
            STATUS_OPTIMAL, solution.n_sats, None, 0, 0.0)
    else:
        instance = assemble(problem)
        result = bilp_solve(instance, scenario.solver_config)
        if result.status == STATUS_INFEASIBLE:
            return RunReport(
                scenario_name=scenario.name, solver=scenario.solver,
                status=STATUS_INFEASIBLE, objective=None, bound=result.bound,
                node_count=result.node_count, wall_time=result.wall_time,
                n_sats_per_sub=[], satisfied_per_target=[], all_satisfied=False,
                standalone_fraction=[],
                deterministic=scenario.solver_config.deterministic,
            )
        patterns = result.patterns
        status, objective, bound = result.status, result.objective, result.bound
        node_count, wall_time = result.node_count, result.wall_time

    # Independent re-evaluation; never trust the solver's own verdict.
    evaluation = evaluate_system(problem, patterns)
    if not evaluation.all_satisfied:
        raise RuntimeError(
            f"solver returned status {status!r} but re-evaluation finds the "
            "coverage requirement unsatisfied; this is a solver bug"
        )

    report = _report_from_evaluation(scenario, evaluation, status, objective,
                                     bound, node_count, wall_time)
    if out_dir is not None:
        _write_artifacts(scenario, grid, problem, patterns, evaluation, report,
                         out_dir, consts)
    return report


def evaluate(scenario: Scenario, pattern_paths, out_dir=None,
             consts: PhysicalConstants = DEFAULT_CONSTANTS) -> RunReport:
    """Verification-only mode: report coverage for user-supplied patterns."""
    if len(pattern_paths) != len(scenario.sub_constellations):
        raise ScenarioError(
            f"got {len(pattern_paths)} pattern files for "
            f"{len(scenario.sub_constellations)} sub-constellations"
        )
    try:
        patterns = [read_pattern(p, scenario.length) for p in pattern_paths]
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"cannot read pattern file: {exc}") from exc

    grid, problem = build_problem(scenario, consts)
    evaluation = evaluate_system(problem, patterns)
    report = _report_from_evaluation(
        scenario, evaluation, status="evaluated",
        objective=evaluation.n_sats_total, bound=None, node_count=0, wall_time=0.0)
    if out_dir is not None:
        _write_artifacts(scenario, grid, problem, patterns, evaluation, report,
                         out_dir, consts)
    return report


def write_profiles(scenario: Scenario, out_dir,
                   consts: PhysicalConstants = DEFAULT_CONSTANTS) -> list:
    """Profile-only mode: CSV per (target, sub-constellation) pair."""
    _, problem = build_problem(scenario, consts)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for j, row in enumerate(problem.profiles, start=1):
        for z, profile in enumerate(row, start=1):
            name = f"profile_target{j}_z{z}.csv"
            profile_to_csv(profile, out / name)
            manifest.append(name)
    return manifest


def write_tracks(scenario: Scenario, out_dir,
                 consts: PhysicalConstants = DEFAULT_CONSTANTS) -> list:
    """Expanded-track-only mode: CSV per sub-constellation."""
    periods = []
    for sub in scenario.sub_constellations:
        geom = solve_semi_major_axis(sub.elements.tau, sub.elements.eccentricity,
                                     sub.elements.inclination, consts)
        periods.append(geom.t_r)
    grid = TimeGrid.for_period(periods[0], scenario.length)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for z, sub in enumerate(scenario.sub_constellations, start=1):
        name = f"track_z{z}.csv"
        track_to_csv(expanded_track(sub.elements, grid, consts), out / name)
        manifest.append(name)
    return manifest

"""Constellation pattern design over repeating ground tracks.

The pipeline factors regional coverage into three discrete-time
vectors: a seed satellite's binary access profile, a binary pattern of
satellite time shifts along the common ground track, and their circular
convolution, the integer coverage timeline.  Two solvers search for the
minimum-satellite pattern meeting per-target, per-time-step fold
requirements: a quasi-symmetric baseline and an exact covering-program
branch and bound that also handles multiple sub-constellations.
"""

from .access import (
    AccessProfile,
    TargetPoint,
    TargetSet,
    TimeGrid,
    ZeroAccessWarning,
    elevation,
    seed_access_profile,
    target_ecef,
)
from .bilp import (
    CoveringInstance,
    SolveResult,
    SolverConfig,
    assemble,
    dump_instance,
    greedy_incumbent,
    load_instance,
    lp_relaxation_bound,
)
from .bilp import solve as solve_covering
from .coverage import (
    CirculantOperator,
    CoverageProblem,
    CoverageRequirement,
    CoverageTimeline,
    PatternVector,
    circular_convolve,
    evaluate_system,
    satisfied,
    shift,
)
from .orbits import (
    DEFAULT_CONSTANTS,
    PeriodRatio,
    PeriodSet,
    PhysicalConstants,
    RgtElements,
    RgtSolveError,
    SecularRates,
    propagate_ecef,
    secular_rates,
    solve_semi_major_axis,
)
from .postprocess import (
    ExpandedTrack,
    MemberElements,
    elements_from_pattern,
    expanded_track,
    phasing_residual,
)
from .quasisym import (
    InfeasibleError,
    PatternCollisionError,
    QuasiSymmetricSolution,
    build_pattern,
)
from .quasisym import solve as solve_quasi_symmetric
from .scenario import RunReport, Scenario, ScenarioError, evaluate, parse_scenario, run

__version__ = "0.1.0"

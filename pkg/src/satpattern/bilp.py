"""Exact minimum-satellite pattern search as a covering integer program.

The stacked coverage condition sum_z V_jz x_z >= f_j over all targets
is a covering program in binary variables: minimize the total impulse
count subject to per-row coverage lower bounds.  This module assembles
that program from a coverage problem and solves it with branch and
bound: LP-relaxation bounds (scipy's HiGHS backend), a greedy warm
start with deterministic tie-breaking, and an anytime contract that
returns the best incumbent plus a valid lower bound when a limit stops
the run early.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .coverage import CirculantOperator, CoverageProblem, PatternVector

# Direct LP up to this many retained rows; above it, constraints are added
# lazily (violated rows only), which is what makes 60k-row systems tractable.
ROWGEN_ROW_THRESHOLD = 4096
ROWGEN_BATCH = 1024

STATUS_OPTIMAL = "optimal"
STATUS_FEASIBLE = "feasible-incumbent"
STATUS_INFEASIBLE = "infeasible"
STATUS_TIME_LIMIT = "time-limit"


class LpInfeasibleError(RuntimeError):
    """The LP relaxation of a (sub)problem admits no solution."""


@dataclass(frozen=True)
class SolverConfig:
    """Branch-and-bound knobs.

    With ``deterministic`` set, identical inputs give identical patterns
    and node counts; that guarantee only extends across machines when
    termination is state-based (``node_limit`` or running to optimality)
    rather than wall-clock.
    """

    time_limit: float | None = None        # s, wall clock
    node_limit: int | None = None
    lp_tolerance: float = 1e-9
    branching_rule: str = "most-fractional"
    deterministic: bool = True
    improvement_rounds: int = 200           # local-search budget on the warm start
    rng_seed: int = 7

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.branching_rule != "most-fractional":
            raise ValueError(f"unknown branching rule {self.branching_rule!r}")


@dataclass
class CoveringInstance:
    """Covering program: minimize 1'x subject to A x >= rhs, x binary.

    Rows with a zero requirement are dropped at assembly as vacuous;
    ``row_ids`` keeps each retained row's position in the logical
    (num_targets * L)-row stacked system.  ``matrix`` is the retained
    sparse block-circulant; ``blocks`` carries the generating circulant
    operators when the instance came from a coverage problem.
    """

    matrix: sparse.csr_matrix          # retained rows x num_vars, small ints
    row_rhs: np.ndarray                # per retained row
    row_ids: np.ndarray                # global row index (target * L + n)
    num_rows: int                      # logical row count, targets * L
    num_vars: int
    length: int                        # L; pattern decoding stride
    num_subs: int
    blocks: list | None = None         # (J x Z) CirculantOperator grid
    rhs: list | None = None            # per-target CoverageRequirement

    @property
    def num_retained_rows(self) -> int:
        return self.matrix.shape[0]

    def patterns_from_solution(self, x: np.ndarray) -> list[PatternVector]:
        """Split a flat 0/1 solution into per-sub-constellation patterns."""
        out = []
        for z in range(self.num_subs):
            seg = x[z * self.length:(z + 1) * self.length]
            out.append(PatternVector(seg.astype(np.uint8)))
        return out

    def coverage_ok(self, x: np.ndarray) -> bool:
        """Exact integer feasibility check of a 0/1 vector."""
        lhs = self.matrix @ x.astype(np.int64)
        return bool((lhs >= self.row_rhs).all())


@dataclass
class SolveResult:
    patterns: list | None
    objective: int | None
    status: str
    bound: float
    node_count: int
    wall_time: float


def assemble(problem: CoverageProblem) -> CoveringInstance:
    """Stack the per-(target, sub-constellation) circulant blocks.

    Rows are grouped by target then time index, columns by
    sub-constellation then shift index; rows with a zero requirement
    are dropped.  Raises on all-zero generators (the solvers assume
    non-zero access profiles).
    """
    length = problem.grid.length
    n_subs = problem.num_subs
    blocks = []
    ones_by_jz = []
    for j, row in enumerate(problem.profiles):
        block_row = []
        ones_row = []
        for z, profile in enumerate(row):
            if profile.is_zero:
                raise ValueError(f"access profile for target {j}, sub-constellation {z} is all-zero")
            block_row.append(CirculantOperator(profile))
            ones_row.append(np.flatnonzero(profile.samples))
        blocks.append(block_row)
        ones_by_jz.append(ones_row)

    indptr = [0]
    indices_parts = []
    rhs_parts = []
    row_id_parts = []
    for j, req in enumerate(problem.requirements):
        times = np.flatnonzero(req.folds)
        if times.size == 0:
            continue
        cols_per_z = []
        for z in range(n_subs):
            cols = (times[:, None] - ones_by_jz[j][z][None, :]) % length + z * length
            cols_per_z.append(cols)
        row_cols = np.concatenate(cols_per_z, axis=1)
        row_cols.sort(axis=1)
        indices_parts.append(row_cols.ravel())
        width = row_cols.shape[1]
        indptr.extend(indptr[-1] + width * np.arange(1, times.size + 1))
        rhs_parts.append(req.folds[times])
        row_id_parts.append(j * length + times)

    if indices_parts:
        indices = np.concatenate(indices_parts)
        row_rhs = np.concatenate(rhs_parts)
        row_ids = np.concatenate(row_id_parts)
    else:
        indices = np.zeros(0, dtype=int)
        row_rhs = np.zeros(0, dtype=np.int64)
        row_ids = np.zeros(0, dtype=np.int64)
    matrix = sparse.csr_matrix(
        (np.ones(len(indices), dtype=np.int8), indices, np.asarray(indptr)),
        shape=(len(row_rhs), n_subs * length),
    )

    counts = np.diff(matrix.indptr)
    if np.any((row_rhs > 0) & (counts == 0)):
        raise ValueError("a required row has an all-zero constraint line; the instance is infeasible")

    return CoveringInstance(
        matrix=matrix,
        row_rhs=row_rhs.astype(np.int64),
        row_ids=row_ids,
        num_rows=problem.num_targets * length,
        num_vars=n_subs * length,
        length=length,
        num_subs=n_subs,
        blocks=blocks,
        rhs=list(problem.requirements),
    )


def _nnz_row_index(matrix: sparse.csr_matrix) -> np.ndarray:
    return np.repeat(np.arange(matrix.shape[0]), np.diff(matrix.indptr))


def _greedy_columns(matrix: sparse.csr_matrix, rhs: np.ndarray,
                    forbidden=()) -> list[int] | None:
    """Greedy covering: highest remaining-deficit score, lowest index on ties.

    The score of a column is sum_rows min(residual, entry).  Returns the
    chosen column list in pick order, or None when no column can reduce
    a remaining deficit.
    """
    num_vars = matrix.shape[1]
    resid = rhs.astype(np.int64).copy()
    row_of_nnz = _nnz_row_index(matrix)
    cols_of_nnz = matrix.indices
    data = matrix.data.astype(np.int64)
    csc = matrix.tocsc()
    chosen: list[int] = []
    blocked = np.zeros(num_vars, dtype=bool)
    for c in forbidden:
        blocked[c] = True
    while resid.max() > 0:
        clipped = np.minimum(data, resid[row_of_nnz])
        scores = np.bincount(cols_of_nnz, weights=clipped, minlength=num_vars)
        scores[blocked] = -1.0
        col = int(np.argmax(scores))
        if scores[col] <= 0:
            return None
        chosen.append(col)
        blocked[col] = True
        sl = slice(csc.indptr[col], csc.indptr[col + 1])
        resid[csc.indices[sl]] = np.maximum(resid[csc.indices[sl]] - csc.data[sl], 0)
    return chosen


def greedy_incumbent(instance: CoveringInstance):
    """Deterministic greedy warm start.

    Returns (patterns, objective); always feasible for instances whose
    required rows are coverable.  Raises :class:`LpInfeasibleError`
    otherwise.
    """
    chosen = _greedy_columns(instance.matrix, instance.row_rhs)
    if chosen is None:
        raise LpInfeasibleError("greedy could not cover every required row")
    x = np.zeros(instance.num_vars, dtype=np.uint8)
    x[chosen] = 1
    return instance.patterns_from_solution(x), len(chosen)


def _drop_redundant(matrix: sparse.csr_matrix, rhs: np.ndarray, chosen: list[int]) -> list[int]:
    """Remove columns whose removal keeps every row covered (ascending index)."""
    csc = matrix.tocsc()
    lhs = np.zeros(matrix.shape[0], dtype=np.int64)
    for c in chosen:
        sl = slice(csc.indptr[c], csc.indptr[c + 1])
        lhs[csc.indices[sl]] += csc.data[sl]
    keep = sorted(chosen)
    for c in sorted(chosen):
        sl = slice(csc.indptr[c], csc.indptr[c + 1])
        rows = csc.indices[sl]
        if ((lhs[rows] - csc.data[sl]) >= rhs[rows]).all():
            lhs[rows] -= csc.data[sl]
            keep.remove(c)
    return keep


def _local_improve(matrix, rhs, chosen, rounds, seed):
    """Remove-two-repair local search; keeps strictly smaller covers."""
    if rounds <= 0 or len(chosen) < 3:
        return chosen
    if matrix.nnz > 0:
        # Budget by work, not wall clock, to stay deterministic.
        rounds = min(rounds, max(5, int(1e8 / matrix.nnz)))
    rng = np.random.default_rng(seed)
    csc = matrix.tocsc()
    best = list(chosen)
    for _ in range(rounds):
        trial = list(best)
        out = rng.choice(len(trial), size=2, replace=False)
        for i in sorted(map(int, out), reverse=True):
            del trial[i]
        lhs = np.zeros(matrix.shape[0], dtype=np.int64)
        for c in trial:
            sl = slice(csc.indptr[c], csc.indptr[c + 1])
            lhs[csc.indices[sl]] += csc.data[sl]
        deficit = np.maximum(rhs - lhs, 0)
        if deficit.max() > 0:
            repair = _greedy_columns(matrix, deficit, forbidden=trial)
            if repair is None:
                continue
            trial.extend(repair)
        trial = _drop_redundant(matrix, rhs, trial)
        if len(trial) < len(best):
            best = trial
    return best


def _linprog_method(n_rows: int) -> str:
    # Interior point wins decisively on the large, highly degenerate
    # covering LPs; plain simplex is fine (and a touch faster) when tiny.
    return "highs-ipm" if n_rows > 256 else "highs"


def _solve_lp(matrix, rhs, lower, upper, lp_tolerance):
    """LP min 1'x s.t. matrix x >= rhs, lower <= x <= upper."""
    n_rows, n_vars = matrix.shape
    bounds = list(zip(lower, upper))
    res = linprog(
        np.ones(n_vars),
        A_ub=-matrix.astype(np.float64),
        b_ub=-rhs.astype(np.float64),
        bounds=bounds,
        method=_linprog_method(n_rows),
    )
    if res.status == 2:
        raise LpInfeasibleError("LP relaxation infeasible")
    if not res.success:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return float(res.fun), np.asarray(res.x)


def _lp_bound_rowgen(matrix, rhs, lower, upper, lp_tolerance, work=None,
                     max_rounds=60):
    """LP optimum by lazy constraint generation over the retained rows.

    Any subset LP is a relaxation, so its value is always a valid lower
    bound; when no retained row is violated the value is the exact LP
    optimum.  Returns (value, x, work_rows, converged).
    """
    n_rows = matrix.shape[0]
    if work is None:
        stride = max(1, n_rows // ROWGEN_BATCH)
        work = np.arange(0, n_rows, stride)
    value, x = 0.0, np.clip(np.zeros(matrix.shape[1]), lower, upper)
    converged = False
    for _ in range(max_rounds):
        value, x = _solve_lp(matrix[work], rhs[work], lower, upper, lp_tolerance)
        violation = rhs - matrix @ x
        bad = np.flatnonzero(violation > 1e-7)
        bad = np.setdiff1d(bad, work, assume_unique=False)
        if bad.size == 0:
            converged = True
            break
        worst = bad[np.argsort(-violation[bad], kind="stable")][:ROWGEN_BATCH]
        work = np.union1d(work, worst)
    return value, x, work, converged


def lp_relaxation_bound(instance: CoveringInstance, fixings: dict[int, int] | None = None,
                        config: SolverConfig | None = None) -> float:
    """Optimal value of the continuous relaxation (0 <= x <= 1, fixings held).

    A valid lower bound on every binary completion of ``fixings``.
    Raises :class:`LpInfeasibleError` when the subproblem is infeasible.
    """
    config = config or SolverConfig()
    lower = np.zeros(instance.num_vars)
    upper = np.ones(instance.num_vars)
    for var, val in (fixings or {}).items():
        if val not in (0, 1):
            raise ValueError("fixings must assign 0 or 1")
        lower[var] = upper[var] = float(val)
    if instance.num_retained_rows <= ROWGEN_ROW_THRESHOLD:
        value, _ = _solve_lp(instance.matrix, instance.row_rhs, lower, upper,
                             config.lp_tolerance)
        return value
    value, _, _, converged = _lp_bound_rowgen(
        instance.matrix, instance.row_rhs, lower, upper, config.lp_tolerance,
        max_rounds=200,
    )
    if not converged:
        raise RuntimeError("constraint generation did not converge on the LP optimum")
    return value


def _dedup_rows(matrix: sparse.csr_matrix, rhs: np.ndarray):
    """Merge identical constraint rows, keeping the largest requirement."""
    matrix = matrix.copy()
    matrix.sort_indices()
    seen: dict[bytes, int] = {}
    keep_rows = []
    keep_rhs = []
    indptr, indices = matrix.indptr, matrix.indices
    data = matrix.data
    for r in range(matrix.shape[0]):
        sl = slice(indptr[r], indptr[r + 1])
        key = indices[sl].tobytes() + data[sl].tobytes()
        hit = seen.get(key)
        if hit is None:
            seen[key] = len(keep_rows)
            keep_rows.append(r)
            keep_rhs.append(rhs[r])
        else:
            keep_rhs[hit] = max(keep_rhs[hit], rhs[r])
    sel = np.asarray(keep_rows)
    return matrix[sel], np.asarray(keep_rhs, dtype=np.int64)


@dataclass
class _Node:
    fix0: tuple
    fix1: tuple
    bound: float  # inherited lower bound (integer-valued)


def solve(instance: CoveringInstance, config: SolverConfig | None = None) -> SolveResult:
    """Branch-and-bound minimization of the satellite count.

    Exact optimum when run to completion; with a node or time limit the
    best incumbent and a valid lower bound are returned instead (status
    ``feasible-incumbent``).  Every returned pattern re-verifies against
    the full integer system before being reported.
    """
    config = config or SolverConfig()
    t_start = time.perf_counter()

    if instance.num_retained_rows == 0:
        return SolveResult(
            patterns=instance.patterns_from_solution(np.zeros(instance.num_vars, dtype=np.uint8)),
            objective=0, status=STATUS_OPTIMAL, bound=0.0, node_count=0,
            wall_time=time.perf_counter() - t_start,
        )

    # Presolve: merge duplicate rows, freeze columns that touch no
    # required row, and certify infeasibility (all-ones is the maximal
    # cover, so any row demanding more than its row total is hopeless).
    work_matrix, work_rhs = _dedup_rows(instance.matrix, instance.row_rhs)
    row_totals = np.asarray(work_matrix.sum(axis=1)).ravel()
    if np.any(work_rhs > row_totals):
        return SolveResult(patterns=None, objective=None, status=STATUS_INFEASIBLE,
                           bound=math.inf, node_count=0,
                           wall_time=time.perf_counter() - t_start)
    col_touch = np.asarray(work_matrix.getnnz(axis=0)).ravel()
    dead_cols = np.flatnonzero(col_touch == 0)

    # Warm start: greedy plus redundancy cleanup.
    chosen = _greedy_columns(work_matrix, work_rhs)
    chosen = _drop_redundant(work_matrix, work_rhs, chosen)
    incumbent = np.zeros(instance.num_vars, dtype=np.uint8)
    incumbent[chosen] = 1
    if not instance.coverage_ok(incumbent):
        raise RuntimeError("internal error: warm-start cover failed exact verification")
    upper_obj = int(incumbent.sum())

    lower0 = np.zeros(instance.num_vars)
    upper1 = np.ones(instance.num_vars)
    upper1[dead_cols] = 0.0

    def out_of_budget(nodes_done: int) -> bool:
        if config.node_limit is not None and nodes_done >= config.node_limit:
            return True
        if config.time_limit is not None and time.perf_counter() - t_start > config.time_limit:
            return True
        return False

    def finish(status, bound, nodes_done):
        x_best = incumbent
        patterns = instance.patterns_from_solution(x_best)
        if status in (STATUS_OPTIMAL, STATUS_FEASIBLE) and not instance.coverage_ok(x_best):
            raise RuntimeError("internal error: incumbent failed exact verification")
        return SolveResult(patterns=patterns, objective=int(x_best.sum()), status=status,
                           bound=float(bound), node_count=nodes_done,
                           wall_time=time.perf_counter() - t_start)

    # Root relaxation.
    use_rowgen = work_matrix.shape[0] > ROWGEN_ROW_THRESHOLD
    try:
        if use_rowgen:
            root_val, _, _, _ = _lp_bound_rowgen(
                work_matrix, work_rhs, lower0, upper1, config.lp_tolerance,
                max_rounds=3)
        else:
            root_val, _ = _solve_lp(work_matrix, work_rhs, lower0, upper1,
                                    config.lp_tolerance)
    except LpInfeasibleError:
        return SolveResult(patterns=None, objective=None, status=STATUS_INFEASIBLE,
                           bound=math.inf, node_count=0,
                           wall_time=time.perf_counter() - t_start)
    root_bound = math.ceil(root_val - 1e-6)
    if root_bound >= upper_obj:
        return finish(STATUS_OPTIMAL, upper_obj, 0)

    # Local search only pays off while a bound gap remains.
    improved = _local_improve(work_matrix, work_rhs, chosen,
                              config.improvement_rounds, config.rng_seed)
    if len(improved) < upper_obj:
        incumbent = np.zeros(instance.num_vars, dtype=np.uint8)
        incumbent[improved] = 1
        if not instance.coverage_ok(incumbent):
            raise RuntimeError("internal error: improved cover failed exact verification")
        upper_obj = len(improved)
        if root_bound >= upper_obj:
            return finish(STATUS_OPTIMAL, upper_obj, 0)

    if use_rowgen:
        # Node relaxations would repeat the expensive lazy-row loop, so at
        # this scale the run stays root-plus-heuristics (anytime contract).
        return finish(STATUS_FEASIBLE, root_bound, 0)

    free_mask = np.ones(instance.num_vars, dtype=bool)
    free_mask[dead_cols] = False

    stack = [_Node(fix0=(), fix1=(), bound=root_bound)]
    nodes_done = 0

    while stack:
        if out_of_budget(nodes_done):
            open_bound = min((n.bound for n in stack), default=upper_obj)
            return finish(STATUS_FEASIBLE, min(open_bound, upper_obj), nodes_done)
        if nodes_done and nodes_done % 1000 == 0:
            # Best-bound restart: surface the most promising open node.
            best_i = min(range(len(stack)), key=lambda i: (stack[i].bound, i))
            stack.append(stack.pop(best_i))
        node = stack.pop()
        if node.bound >= upper_obj:
            continue
        lower = lower0.copy()
        upper = upper1.copy()
        for c in node.fix0:
            upper[c] = 0.0
        for c in node.fix1:
            lower[c] = 1.0
        nodes_done += 1
        try:
            val, x = _solve_lp(work_matrix, work_rhs, lower, upper, config.lp_tolerance)
        except LpInfeasibleError:
            continue
        bound = math.ceil(val - 1e-6)
        if bound >= upper_obj:
            continue
        frac = np.abs(x - np.round(x))
        if frac.max() <= 1e-6:
            x_int = np.round(x).astype(np.uint8)
            lhs = work_matrix @ x_int.astype(np.int64)
            if (lhs >= work_rhs).all():
                obj = int(x_int.sum())
                if obj < upper_obj:
                    incumbent = x_int
                    upper_obj = obj
                continue
            # LP-tolerance artifact: nominally integral but exactly short.
            cand = np.flatnonzero(free_mask & (upper > lower))
            if cand.size == 0:
                continue
            branch_var = int(cand[0])
        else:
            scores = np.abs(x - 0.5)
            scores[~free_mask] = np.inf
            scores[upper <= lower] = np.inf
            branch_var = int(np.argmin(scores))
        stack.append(_Node(fix0=node.fix0 + (branch_var,), fix1=node.fix1, bound=bound))
        stack.append(_Node(fix0=node.fix0, fix1=node.fix1 + (branch_var,), bound=bound))

    return finish(STATUS_OPTIMAL, upper_obj, nodes_done)


def dump_instance(instance: CoveringInstance, path) -> None:
    """Plain-text sparse dump: header 'num_rows num_vars', then one line
    per retained row: 'rowIdx: colIdx:coeff ... >= rhs'."""
    matrix = instance.matrix.tocsr()
    matrix.sort_indices()
    with open(path, "w") as fh:
        fh.write(f"{instance.num_rows} {instance.num_vars}\n")
        for r in range(matrix.shape[0]):
            sl = slice(matrix.indptr[r], matrix.indptr[r + 1])
            terms = " ".join(f"{c}:{int(v)}" for c, v in
                             zip(matrix.indices[sl], matrix.data[sl]))
            fh.write(f"{int(instance.row_ids[r])}: {terms} >= {int(instance.row_rhs[r])}\n")


def load_instance(path) -> CoveringInstance:
    """Inverse of :func:`dump_instance` (block structure is not recovered:
    the loaded instance behaves as a single sub-constellation)."""
    with open(path) as fh:
        header = fh.readline().split()
        num_rows, num_vars = int(header[0]), int(header[1])
        row_ids, rhs_list = [], []
        indptr, indices, data = [0], [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            head, tail = line.split(":", 1)
            body, rhs_txt = tail.rsplit(">=", 1)
            row_ids.append(int(head))
            rhs_list.append(int(rhs_txt))
            for term in body.split():
                col_txt, coeff_txt = term.split(":")
                indices.append(int(col_txt))
                data.append(int(coeff_txt))
            indptr.append(len(indices))
    matrix = sparse.csr_matrix(
        (np.asarray(data, dtype=np.int8), np.asarray(indices), np.asarray(indptr)),
        shape=(len(row_ids), num_vars),
    )
    return CoveringInstance(
        matrix=matrix,
        row_rhs=np.asarray(rhs_list, dtype=np.int64),
        row_ids=np.asarray(row_ids, dtype=np.int64),
        num_rows=num_rows,
        num_vars=num_vars,
        length=num_vars,
        num_subs=1,
    )

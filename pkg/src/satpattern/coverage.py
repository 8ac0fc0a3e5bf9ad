"""Coverage algebra: patterns, circulant operators, timelines, requirements.

The core identity: a coverage timeline is the circular convolution of a
seed access profile with a constellation pattern vector,

    b[n] = sum_m v[m] * x[(n - m) mod L],

equivalently the matrix product V x with V the circulant generated by v.
Everything stays in integer arithmetic so satisfaction checks are exact.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .access import AccessProfile, TimeGrid

# Relative tolerance on the shared repeat period across sub-constellations.
# Rounded published inclinations can leave a few-ns-per-second residual, so
# this sits looser than float precision but far below one time step.
SYNC_RTOL = 1e-6


def _as_array(vec) -> np.ndarray:
    """Unwrap a domain vector type (or pass an ndarray through)."""
    for attr in ("samples", "impulses", "counts", "folds"):
        inner = getattr(vec, attr, None)
        if isinstance(inner, np.ndarray):
            return inner
    return np.asarray(vec)


@dataclass(eq=False)
class PatternVector:
    """Binary vector of satellite time-shift impulses along the track."""

    impulses: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.impulses)
        if arr.ndim != 1:
            raise ValueError("pattern vector must be one-dimensional")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("pattern vector entries must be 0 or 1")
        self.impulses = arr.astype(np.uint8)

    @classmethod
    def from_indices(cls, length: int, indices) -> "PatternVector":
        idx = np.asarray(sorted(set(int(i) for i in indices)), dtype=int)
        if idx.size and (idx.min() < 0 or idx.max() >= length):
            raise ValueError(f"impulse indices must lie in [0, {length})")
        x = np.zeros(length, dtype=np.uint8)
        x[idx] = 1
        return cls(x)

    def __len__(self) -> int:
        return len(self.impulses)

    @property
    def n_sats(self) -> int:
        return int(self.impulses.sum())

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.impulses)


@dataclass(eq=False)
class CoverageTimeline:
    """Satellites in view at each time step (non-negative integers)."""

    counts: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.counts)
        if arr.ndim != 1 or np.any(arr < 0):
            raise ValueError("coverage timeline must be a non-negative 1-d vector")
        self.counts = arr.astype(np.int64)

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(eq=False)
class CoverageRequirement:
    """Minimum fold the timeline must meet or exceed at each step."""

    folds: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.folds)
        if arr.ndim != 1 or np.any(arr < 0):
            raise ValueError("coverage requirement must be a non-negative 1-d vector")
        self.folds = arr.astype(np.int64)

    @classmethod
    def constant(cls, length: int, fold: int) -> "CoverageRequirement":
        return cls(np.full(length, int(fold), dtype=np.int64))

    @classmethod
    def piecewise(cls, length: int, default: int, segments) -> "CoverageRequirement":
        """Piecewise-constant folds: segments are (start, end, fold), ends inclusive."""
        f = np.full(length, int(default), dtype=np.int64)
        for start, end, fold in segments:
            if not (0 <= start <= end < length):
                raise ValueError(f"segment [{start}, {end}] out of range for L={length}")
            f[start:end + 1] = int(fold)
        return cls(f)

    @classmethod
    def at_indices(cls, length: int, indices, fold: int = 1) -> "CoverageRequirement":
        """Fold required only at the listed time indices, zero elsewhere."""
        f = np.zeros(length, dtype=np.int64)
        for i in indices:
            if not 0 <= int(i) < length:
                raise ValueError(f"requirement index {i} out of range for L={length}")
            f[int(i)] = int(fold)
        return cls(f)

    def __len__(self) -> int:
        return len(self.folds)


def shift(profile, k: int):
    """Circular shift by k steps: output[n] = input[(n - k) mod L].

    This is the permutation primitive P^k; shifting by L is the identity.
    Returns the same wrapper type it was given (AccessProfile in,
    AccessProfile out; bare arrays pass through as arrays).
    """
    arr = _as_array(profile)
    rolled = np.roll(arr, k % len(arr))
    if isinstance(profile, AccessProfile):
        return AccessProfile(rolled)
    if isinstance(profile, PatternVector):
        return PatternVector(rolled)
    return rolled


def circular_convolve(v, x) -> CoverageTimeline:
    """Circular convolution of an access profile with a pattern vector.

    Computed as the integer superposition of circular shifts, one per
    impulse: b = sum_{m : x[m]=1} shift(v, m).  Commutative, and equal
    to the circulant matrix product V x.
    """
    v_arr = _as_array(v).astype(np.int64)
    x_arr = _as_array(x).astype(np.int64)
    if v_arr.shape != x_arr.shape:
        raise ValueError(f"length mismatch: {v_arr.shape[0]} vs {x_arr.shape[0]}")
    out = np.zeros_like(v_arr)
    for m in np.flatnonzero(x_arr):
        out += x_arr[m] * np.roll(v_arr, m)
    return CoverageTimeline(out)


def satisfied(timeline, requirement) -> bool:
    """True iff the timeline meets the requirement at every step."""
    b = _as_array(timeline)
    f = _as_array(requirement)
    if b.shape != f.shape:
        raise ValueError(f"length mismatch: {b.shape[0]} vs {f.shape[0]}")
    return bool((b >= f).all())


def all_satisfied(timelines, requirements) -> bool:
    """Conjunction of per-target satisfaction over the whole target set."""
    return all(satisfied(b, f) for b, f in zip(timelines, requirements))


class CirculantOperator:
    """Logical L-by-L circulant generated by an access profile.

    Entry (row, col) = v[(row - col) mod L]; column ``c`` is the profile
    circularly shifted by ``c``.  Products are computed by index
    arithmetic; ``dense()`` materializes the matrix only for small
    instances and the covering-program interface.
    """

    def __init__(self, generator: AccessProfile):
        self.generator = generator

    @property
    def dim(self) -> int:
        return len(self.generator)

    def entry(self, row: int, col: int) -> int:
        return int(self.generator.samples[(row - col) % self.dim])

    def column(self, col: int) -> np.ndarray:
        return np.roll(self.generator.samples, col)

    def matvec(self, x) -> np.ndarray:
        """Integer product V x, O(L * nnz(x))."""
        x_arr = _as_array(x)
        v = self.generator.samples.astype(np.int64)
        out = np.zeros(self.dim, dtype=np.int64)
        for m in np.flatnonzero(x_arr):
            out += int(x_arr[m]) * np.roll(v, m)
        return out

    def dense(self) -> np.ndarray:
        rows = np.arange(self.dim)
        return self.generator.samples[(rows[:, None] - rows[None, :]) % self.dim]

    def row_columns(self, row: int) -> np.ndarray:
        """Column indices holding a 1 in the given row."""
        return (row - np.flatnonzero(self.generator.samples)) % self.dim


@dataclass
class CoverageProblem:
    """Stacked coverage system over targets j and sub-constellations z.

    ``profiles[j][z]`` is the seed access profile of sub-constellation z
    observed from target j; all share the grid length.  When the
    sub-constellations' repeat periods are supplied they must agree to
    :data:`SYNC_RTOL` (the synchronization condition).
    """

    profiles: list
    requirements: list
    grid: TimeGrid
    repeat_periods: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.profiles:
            raise ValueError("coverage problem needs at least one target")
        widths = {len(row) for row in self.profiles}
        if len(widths) != 1:
            raise ValueError("every target needs a profile per sub-constellation")
        if len(self.requirements) != len(self.profiles):
            raise ValueError("one requirement per target required")
        length = self.grid.length
        for row in self.profiles:
            for profile in row:
                if len(profile) != length:
                    raise ValueError("all profiles must share the grid length")
        for req in self.requirements:
            if len(req) != length:
                raise ValueError("all requirements must share the grid length")
        if self.repeat_periods is not None:
            ref = self.repeat_periods[0]
            for t_r in self.repeat_periods:
                if abs(t_r - ref) / ref > SYNC_RTOL:
                    raise ValueError(
                        f"sub-constellation repeat periods {t_r:.6f} and {ref:.6f} "
                        "are not synchronized"
                    )

    @property
    def num_targets(self) -> int:
        return len(self.profiles)

    @property
    def num_subs(self) -> int:
        return len(self.profiles[0])


@dataclass
class SystemEvaluation:
    """Result of evaluating patterns against a coverage problem."""

    timelines: list
    satisfied_per_target: list
    all_satisfied: bool
    standalone_fraction: np.ndarray  # (targets, subs), share of steps with >= 1 in view
    n_sats_per_sub: list
    n_sats_total: int


def evaluate_system(problem: CoverageProblem, patterns) -> SystemEvaluation:
    """Evaluate per-z patterns against the stacked system.

    b_j = sum_z conv(v_j^z, x^z); the report carries per-target
    satisfaction, the aggregate verdict, and the standalone coverage
    fraction each sub-constellation achieves on its own.
    """
    if len(patterns) != problem.num_subs:
        raise ValueError(
            f"got {len(patterns)} patterns for {problem.num_subs} sub-constellations"
        )
    length = problem.grid.length
    for x in patterns:
        if len(_as_array(x)) != length:
            raise ValueError("pattern length must match the grid length")

    frac = np.zeros((problem.num_targets, problem.num_subs))
    timelines = []
    sat_flags = []
    for j, row in enumerate(problem.profiles):
        total = np.zeros(length, dtype=np.int64)
        for z, profile in enumerate(row):
            part = circular_convolve(profile, patterns[z]).counts
            frac[j, z] = float(np.mean(part >= 1))
            total += part
        timelines.append(CoverageTimeline(total))
        sat_flags.append(satisfied(total, problem.requirements[j]))

    n_per_sub = [int(_as_array(x).sum()) for x in patterns]
    return SystemEvaluation(
        timelines=timelines,
        satisfied_per_target=sat_flags,
        all_satisfied=all(sat_flags),
        standalone_fraction=frac,
        n_sats_per_sub=n_per_sub,
        n_sats_total=sum(n_per_sub),
    )


def timeline_to_csv(timeline, requirement, path) -> None:
    """Rows (n, b[n], f[n]) with a header line."""
    b = _as_array(timeline)
    f = _as_array(requirement)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "b", "f"])
        for n in range(len(b)):
            writer.writerow([n, int(b[n]), int(f[n])])


def write_pattern(pattern, path) -> None:
    """Serialize a pattern as its sorted impulse index list, one per line."""
    idx = np.flatnonzero(_as_array(pattern))
    with open(path, "w") as fh:
        for i in idx:
            fh.write(f"{int(i)}\n")


def read_pattern(path, length: int) -> PatternVector:
    """Read an impulse index list (whitespace/comma separated or one per line)."""
    with open(path) as fh:
        text = fh.read()
    tokens = text.replace(",", " ").split()
    return PatternVector.from_indices(length, (int(tok) for tok in tokens))

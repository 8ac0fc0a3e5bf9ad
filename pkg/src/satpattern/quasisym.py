"""Baseline solver: quasi-symmetric patterns with uniform temporal spacing.

Satellites are spread along the track at the spacing eta = L / N, with
fractional positions snapped to the nearest time step.  An outer loop
grows N from 1 and an inner loop scans the first-satellite shift n1;
the first (N, n1) whose coverage meets every requirement wins, which
makes the returned N minimal within the quasi-symmetric family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coverage import CoverageRequirement, PatternVector, _as_array


class PatternCollisionError(ValueError):
    """Nearest-integer spacing mapped two satellites onto one slot."""


class InfeasibleError(RuntimeError):
    """No satellite count up to L satisfies the coverage requirements."""


def nint(value: float) -> int:
    """Nearest integer, ties rounded away from zero (nint(0.5) = 1)."""
    if value >= 0.0:
        return int(math.floor(value + 0.5))
    return -int(math.floor(-value + 0.5))


@dataclass
class QuasiSymmetricSolution:
    pattern: PatternVector
    n_sats: int
    n1: int
    spacing: float  # eta = L / N


def pattern_indices(length: int, n_sats: int, n1: int) -> list[int]:
    """Impulse slots nint(n1 + eta (k-1)) mod L for k = 1..N."""
    eta = length / n_sats
    return [nint(n1 + eta * k) % length for k in range(n_sats)]


def build_pattern(length: int, n_sats: int, n1: int) -> PatternVector:
    """Quasi-symmetric pattern of ``n_sats`` impulses shifted by ``n1``.

    Raises :class:`PatternCollisionError` when rounding collapses two
    satellites into the same slot (N too large for L).
    """
    if not 1 <= n_sats <= length:
        raise ValueError("satellite count must lie in [1, L]")
    if not 0 <= n1 < length:
        raise ValueError("n1 must lie in [0, L)")
    idx = pattern_indices(length, n_sats, n1)
    if len(set(idx)) != n_sats:
        raise PatternCollisionError(
            f"spacing L/N = {length}/{n_sats} maps two satellites to one slot"
        )
    return PatternVector.from_indices(length, idx)


def solve(profiles, requirements) -> QuasiSymmetricSolution:
    """Iterative search over (N, n1) until every target is satisfied.

    Semantically identical to the nested-loop search: N ascends from 1;
    for each N, n1 scans 0 .. nint(L/N) - 1 in order and the first hit
    is returned.  The inner scan is evaluated in bulk per N using the
    shift identity conv(v, shift(x, n1)) = shift(conv(v, x), n1).

    Single sub-constellation only.  Raises :class:`InfeasibleError`
    after N reaches L without satisfaction.
    """
    v_rows = [np.asarray(_as_array(p), dtype=np.int64) for p in profiles]
    f_rows = [np.asarray(_as_array(f), dtype=np.int64) for f in requirements]
    if len(v_rows) != len(f_rows):
        raise ValueError("one requirement per profile required")
    if not v_rows:
        raise ValueError("at least one profile required")
    lengths = {len(v) for v in v_rows} | {len(f) for f in f_rows}
    if len(lengths) != 1:
        raise ValueError("profiles and requirements must share one length")
    length = lengths.pop()
    for v in v_rows:
        if not v.any():
            raise ValueError("access profiles must be non-zero")

    for n_sats in range(1, length + 1):
        eta = length / n_sats
        base = pattern_indices(length, n_sats, 0)
        if len(set(base)) != n_sats:
            continue  # pure collision at this N; no n1 can fix a shifted copy
        scan = nint(eta)
        # Row n1 of this index table reads c[(n - n1) mod L] from a timeline c.
        shift_rows = (np.arange(length, dtype=np.int32)[None, :]
                      - np.arange(scan, dtype=np.int32)[:, None]) % length
        feasible = np.ones(scan, dtype=bool)
        for v, f in zip(v_rows, f_rows):
            base_cov = np.zeros(length, dtype=np.int64)
            for m in base:
                base_cov += np.roll(v, m)
            shifted = base_cov[shift_rows]
            feasible &= (shifted >= f[None, :]).all(axis=1)
            if not feasible.any():
                break
        hits = np.flatnonzero(feasible)
        if hits.size:
            n1 = int(hits[0])
            return QuasiSymmetricSolution(
                pattern=build_pattern(length, n_sats, n1),
                n_sats=n_sats,
                n1=n1,
                spacing=eta,
            )
    raise InfeasibleError("no quasi-symmetric pattern up to N = L satisfies the requirements")

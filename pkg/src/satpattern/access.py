"""Ground targets, elevation geometry, and seed access profiles.

A target sits on the WGS 84 ellipsoid (geodetic latitude, altitude 0).
The seed satellite's visibility from a target, sampled at every step of
the discretized repeat period, yields a binary access profile.  Access
is decided from the instantaneous elevation at each sample instant; an
elevation exactly equal to the threshold counts as access.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .orbits import (
    DEFAULT_CONSTANTS,
    PhysicalConstants,
    RgtElements,
    propagate_ecef,
    repeat_period,
)

# WGS 84 ellipsoid
WGS84_SEMI_MAJOR_KM = 6378.137
WGS84_FLATTENING = 1.0 / 298.257223563
WGS84_E2 = WGS84_FLATTENING * (2.0 - WGS84_FLATTENING)


class ZeroAccessWarning(UserWarning):
    """A sampled access profile came out all-zero; solvers will reject it."""


@dataclass(frozen=True, eq=False)
class TargetPoint:
    """Ground target: geodetic latitude/longitude (rad) plus an elevation mask.

    ``min_elevation`` is a scalar threshold or a length-L array for a
    per-time-step mask; both in radians.
    """

    latitude: float
    longitude: float
    min_elevation: float | np.ndarray = 0.0
    name: str = ""

    def __post_init__(self):
        if abs(self.latitude) > math.pi / 2.0:
            raise ValueError("latitude must lie in [-pi/2, pi/2]")
        mask = np.atleast_1d(np.asarray(self.min_elevation, dtype=float))
        if np.any(mask < 0.0) or np.any(mask >= math.pi / 2.0):
            raise ValueError("min_elevation entries must lie in [0, pi/2)")

    def elevation_mask(self, length: int) -> np.ndarray:
        """Threshold expanded to a length-L vector."""
        mask = np.asarray(self.min_elevation, dtype=float)
        if mask.ndim == 0:
            return np.full(length, float(mask))
        if mask.shape != (length,):
            raise ValueError(f"elevation mask has length {mask.shape[0]}, expected {length}")
        return mask


@dataclass(frozen=True)
class TargetSet:
    """Ordered, non-empty collection of targets; position defines index j."""

    points: tuple[TargetPoint, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("target set must not be empty")
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, j: int) -> TargetPoint:
        return self.points[j]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform discretization of the repeat period into L steps."""

    length: int
    t_step: float

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("grid length must be positive")
        if self.t_step <= 0.0:
            raise ValueError("t_step must be positive")

    @property
    def t_sim(self) -> float:
        return self.length * self.t_step

    @classmethod
    def for_period(cls, period: float, length: int) -> "TimeGrid":
        """Grid whose horizon equals ``period`` exactly: t_step = period / L."""
        return cls(length=length, t_step=period / length)

    def times(self) -> np.ndarray:
        return np.arange(self.length) * self.t_step


@dataclass(eq=False)
class AccessProfile:
    """Binary visibility samples over one repeat period."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if arr.ndim != 1:
            raise ValueError("access profile must be one-dimensional")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("access profile entries must be 0 or 1")
        self.samples = arr.astype(np.uint8)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def is_zero(self) -> bool:
        return not self.samples.any()

    @property
    def ones(self) -> int:
        return int(self.samples.sum())


def target_ecef(point: TargetPoint) -> np.ndarray:
    """Geodetic-to-ECEF conversion on the WGS 84 ellipsoid, altitude 0, km."""
    sin_lat = math.sin(point.latitude)
    cos_lat = math.cos(point.latitude)
    n = WGS84_SEMI_MAJOR_KM / math.sqrt(1.0 - WGS84_E2 * sin_lat**2)
    return np.array([
        n * cos_lat * math.cos(point.longitude),
        n * cos_lat * math.sin(point.longitude),
        n * (1.0 - WGS84_E2) * sin_lat,
    ])


def elevation(sat_ecef: np.ndarray, ground_ecef: np.ndarray):
    """Elevation of a satellite above a target's local horizon plane.

    arcsin of the dot product between the unit target position vector and
    the unit target-to-satellite vector.  ``sat_ecef`` may be (3,) or
    (n, 3); the result is a scalar or an (n,) array in [-pi/2, pi/2].
    """
    sat = np.asarray(sat_ecef, dtype=float)
    ground = np.asarray(ground_ecef, dtype=float)
    rho = sat - ground
    rho_norm = np.linalg.norm(rho, axis=-1)
    if np.any(rho_norm == 0.0):
        raise ValueError("satellite position coincides with the target")
    g_norm = np.linalg.norm(ground)
    sin_el = (rho @ ground) / (rho_norm * g_norm)
    return np.arcsin(np.clip(sin_el, -1.0, 1.0))


def seed_access_profile(elements: RgtElements, point: TargetPoint, grid: TimeGrid,
                        consts: PhysicalConstants = DEFAULT_CONSTANTS) -> AccessProfile:
    """Sample the seed satellite's visibility from ``point`` on ``grid``.

    samples[n] = 1 iff elevation at t = n * t_step meets the target's
    threshold.  No interpolation: arc edges are decided strictly at the
    sample instants.  An all-zero result is returned but flagged with
    :class:`ZeroAccessWarning` since solvers require non-zero profiles.
    """
    t_r = repeat_period(elements, consts)
    if abs(grid.t_sim - t_r) / t_r > 1e-6:
        raise ValueError(
            f"grid horizon {grid.t_sim:.3f} s does not match the repeat period {t_r:.3f} s"
        )
    positions = propagate_ecef(elements, grid.times(), consts)
    elev = elevation(positions, target_ecef(point))
    samples = (elev >= point.elevation_mask(grid.length)).astype(np.uint8)
    if not samples.any():
        warnings.warn(
            f"access profile for target ({math.degrees(point.latitude):.2f}, "
            f"{math.degrees(point.longitude):.2f}) deg is all-zero",
            ZeroAccessWarning,
            stacklevel=2,
        )
    return AccessProfile(samples)


def profile_to_csv(profile: AccessProfile, path) -> None:
    """One row per time index, columns (n, v[n]), with a header line."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "v"])
        for n, v in enumerate(profile.samples):
            writer.writerow([n, int(v)])

"""Turn optimal patterns into member orbital elements and track exports.

Each impulse n_k places a satellite on the seed's ground track, delayed
by n_k time steps.  The member's node is stepped by the per-slot RAAN
increment 2 pi N_D / L and its mean anomaly is chosen so the phasing
condition N_P (raan_k - raan_0) + N_D (M_k - M_0) = 0 (mod 2 pi) holds,
which keeps every member on the common ground track.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .access import TimeGrid
from .coverage import PatternVector
from .orbits import (
    DEFAULT_CONSTANTS,
    PhysicalConstants,
    RgtElements,
    propagate_ecef,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MemberElements:
    """Member orbit set sharing (tau, e, i, omega) with the seed."""

    seed: RgtElements
    shifts: tuple[int, ...]
    members: tuple[RgtElements, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class ExpandedTrack:
    """One repeat of the ground track, longitude-unwrapped."""

    times: np.ndarray              # s past epoch
    lon_unwrapped_deg: np.ndarray
    lat_deg: np.ndarray
    span_deg: float                # total longitudinal angular displacement


def phasing_residual(seed: RgtElements, member: RgtElements) -> float:
    """Distance of N_P dRaan + N_D dM from 0 mod 2 pi, in radians."""
    raw = (seed.tau.n_p * (member.raan - seed.raan)
           + seed.tau.n_d * (member.mean_anomaly - seed.mean_anomaly)) % TWO_PI
    return min(raw, TWO_PI - raw)


def elements_from_pattern(seed: RgtElements, pattern: PatternVector,
                          grid: TimeGrid) -> MemberElements:
    """Member elements for every impulse of ``pattern``.

    raan_k = n_k 2 pi N_D / L + raan_0 and M_k = M_0 - n_k 2 pi N_P / L,
    both reduced to [0, 2 pi).  This M choice satisfies the phasing
    condition identically and makes member k's motion reproduce the
    seed's track delayed by n_k steps.
    """
    if len(pattern) != grid.length:
        raise ValueError("pattern length must match the grid length")
    shifts = [int(n) for n in pattern.indices]
    if not shifts:
        raise ValueError("pattern has no impulses")
    members = []
    n_p, n_d = seed.tau.n_p, seed.tau.n_d
    for n_k in shifts:
        raan_k = (seed.raan + n_k * TWO_PI * n_d / grid.length) % TWO_PI
        mean_k = (seed.mean_anomaly - n_k * TWO_PI * n_p / grid.length) % TWO_PI
        members.append(RgtElements(
            tau=seed.tau,
            eccentricity=seed.eccentricity,
            inclination=seed.inclination,
            arg_perigee=seed.arg_perigee,
            raan=raan_k,
            mean_anomaly=mean_k,
            epoch=seed.epoch,
        ))
    return MemberElements(seed=seed, shifts=tuple(shifts), members=tuple(members))


def ecef_to_latlon(positions: np.ndarray):
    """Geocentric latitude/longitude (rad) of ECEF samples."""
    pos = np.atleast_2d(positions)
    r = np.linalg.norm(pos, axis=1)
    lat = np.arcsin(pos[:, 2] / r)
    lon = np.arctan2(pos[:, 1], pos[:, 0])
    return lat, lon


def expanded_track(seed: RgtElements, grid: TimeGrid,
                   consts: PhysicalConstants = DEFAULT_CONSTANTS) -> ExpandedTrack:
    """Sample one full repeat of the ground track and unwrap its longitude.

    The total longitudinal displacement is 360 |N_P - N_D| degrees for a
    prograde orbit and 360 (N_P + N_D) for a retrograde one.
    """
    times = np.arange(grid.length + 1) * grid.t_step
    positions = propagate_ecef(seed, times, consts)
    lat, lon = ecef_to_latlon(positions)
    lon_unwrapped = np.unwrap(lon)
    span = abs(float(lon_unwrapped[-1] - lon_unwrapped[0]))
    return ExpandedTrack(
        times=times,
        lon_unwrapped_deg=np.degrees(lon_unwrapped),
        lat_deg=np.degrees(lat),
        span_deg=math.degrees(span),
    )


def members_to_csv(member_set: MemberElements, path) -> None:
    """Columns (k, n_k, tau, e, i_deg, omega_deg, raan_deg, mean_anomaly_deg)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "n_k", "tau", "e", "i_deg", "omega_deg",
                         "raan_deg", "mean_anomaly_deg"])
        for k, (n_k, m) in enumerate(zip(member_set.shifts, member_set.members), start=1):
            writer.writerow([
                k, n_k, str(m.tau), repr(m.eccentricity),
                repr(math.degrees(m.inclination)),
                repr(math.degrees(m.arg_perigee)),
                repr(math.degrees(m.raan)),
                repr(math.degrees(m.mean_anomaly)),
            ])


def track_to_csv(track: ExpandedTrack, path) -> None:
    """Columns (t_s, lon_unwrapped_deg, lat_deg)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s", "lon_unwrapped_deg", "lat_deg"])
        for t, lon, lat in zip(track.times, track.lon_unwrapped_deg, track.lat_deg):
            writer.writerow([repr(float(t)), repr(float(lon)), repr(float(lat))])

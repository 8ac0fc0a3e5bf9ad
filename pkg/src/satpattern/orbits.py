"""Repeating-ground-track orbit model with secular J2 rates.

Everything here is a pure function of immutable inputs: secular drift
rates, nodal periods, the semi-major axis that closes the ground track
for a given revolutions-to-days ratio, and ECEF state sampling.

Angles are radians, lengths km, times seconds unless a name says
otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi

# Greenwich mean sidereal angle at the J2000 epoch (2000-01-01 12:00 UTC),
# linear-rate sidereal model: theta_g(t) = GMST_J2000 + earth_rotation_rate * t.
GMST_J2000_RAD = math.radians(280.46061837)

# sin(i)^2 = 4/5 zeroes the secular apsidal drift; elliptic orbits are only
# accepted near one of these two inclinations.
CRITICAL_INCLINATION_RAD = math.asin(2.0 / math.sqrt(5.0))
CRITICAL_INCLINATION_TOL_RAD = math.radians(0.1)


class RgtSolveError(RuntimeError):
    """No physical repeating-ground-track orbit for the requested inputs."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Earth model constants used by the secular rate expressions."""

    earth_radius: float = 6378.14            # km, mean radius
    mu: float = 398600.44                    # km^3/s^2
    j2: float = 0.00108263
    earth_rotation_rate: float = 7.2921159e-5  # rad/s

    def __post_init__(self):
        for name in ("earth_radius", "mu", "j2", "earth_rotation_rate"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class PeriodRatio:
    """Revolutions per Greenwich nodal day, kept in lowest terms."""

    n_p: int
    n_d: int

    def __post_init__(self):
        if self.n_p < 1 or self.n_d < 1:
            raise ValueError("n_p and n_d must be positive integers")
        g = math.gcd(self.n_p, self.n_d)
        object.__setattr__(self, "n_p", self.n_p // g)
        object.__setattr__(self, "n_d", self.n_d // g)

    @classmethod
    def parse(cls, text: str) -> "PeriodRatio":
        """Parse 'NP/ND' (or a bare integer, meaning ND = 1)."""
        parts = text.strip().split("/")
        if len(parts) == 1:
            return cls(int(parts[0]), 1)
        if len(parts) != 2:
            raise ValueError(f"cannot parse period ratio {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    @property
    def value(self) -> float:
        return self.n_p / self.n_d

    def __str__(self) -> str:
        return f"{self.n_p}/{self.n_d}"


@dataclass(frozen=True)
class SecularRates:
    """Secular drift rates, rad/s."""

    omega_dot: float   # argument of perigee
    raan_dot: float    # ascending node
    m_dot: float       # mean anomaly, including the nominal mean motion


@dataclass(frozen=True)
class PeriodSet:
    """Periods and geometry of a solved repeating-ground-track orbit."""

    t_s: float                # satellite nodal period, s
    t_g: float                # Greenwich nodal period, s
    t_r: float                # period of repetition, s
    semi_major_axis: float    # km
    semi_latus_rectum: float  # km


@dataclass(frozen=True)
class RgtElements:
    """Seed or member orbital elements over a repeating ground track.

    ``raan`` and ``mean_anomaly`` are initial values at ``epoch``;
    ``epoch`` is measured in seconds past J2000.  Elliptic orbits must
    sit at the critical inclination (either branch) to keep the ground
    track closed under the secular apsidal drift.
    """

    tau: PeriodRatio
    eccentricity: float = 0.0
    inclination: float = 0.0
    arg_perigee: float = 0.0
    raan: float = 0.0
    mean_anomaly: float = 0.0
    epoch: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eccentricity < 1.0:
            raise ValueError("eccentricity must lie in [0, 1)")
        if not 0.0 < self.inclination < math.pi:
            raise ValueError("inclination must lie in (0, pi)")
        if self.eccentricity > 0.0:
            d_pro = abs(self.inclination - CRITICAL_INCLINATION_RAD)
            d_retro = abs(self.inclination - (math.pi - CRITICAL_INCLINATION_RAD))
            if min(d_pro, d_retro) > CRITICAL_INCLINATION_TOL_RAD:
                raise ValueError(
                    "elliptic orbits must be critically inclined "
                    "(63.43 deg or 116.57 deg within 0.1 deg)"
                )


def secular_rates(a: float, e: float, i: float,
                  consts: PhysicalConstants = DEFAULT_CONSTANTS) -> SecularRates:
    """Secular J2 rates for a given semi-major axis, eccentricity, inclination.

    omega_dot = 3/2 J2 (R/p)^2 n0 (2 - 5/2 sin^2 i)
    raan_dot  = -3/2 J2 (R/p)^2 n0 cos i
    m_dot     = n0 [1 - 3/2 J2 (R/p)^2 sqrt(1-e^2) (3/2 sin^2 i - 1)]

    with n0 = sqrt(mu/a^3) and p = a(1 - e^2).
    """
    if a <= consts.earth_radius:
        raise ValueError("semi-major axis must exceed the Earth radius")
    p = a * (1.0 - e * e)
    if p <= 0.0:
        raise ValueError("semi-latus rectum a(1-e^2) must be positive")
    n0 = math.sqrt(consts.mu / a**3)
    k = 1.5 * consts.j2 * (consts.earth_radius / p) ** 2
    sin2_i = math.sin(i) ** 2
    omega_dot = k * n0 * (2.0 - 2.5 * sin2_i)
    raan_dot = -k * n0 * math.cos(i)
    m_dot = n0 * (1.0 - k * math.sqrt(1.0 - e * e) * (1.5 * sin2_i - 1.0))
    return SecularRates(omega_dot=omega_dot, raan_dot=raan_dot, m_dot=m_dot)


def _period_ratio_at(a: float, e: float, i: float, consts: PhysicalConstants) -> float:
    r = secular_rates(a, e, i, consts)
    return (r.omega_dot + r.m_dot) / (consts.earth_rotation_rate - r.raan_dot)


@lru_cache(maxsize=256)
def _solve_semi_major_axis(tau: PeriodRatio, e: float, i: float,
                           consts: PhysicalConstants) -> PeriodSet:
    target = tau.value
    # Unperturbed Kepler guess from the requested nodal period.
    t_guess = tau.n_d * (TWO_PI / consts.earth_rotation_rate) / tau.n_p
    a = (consts.mu * (t_guess / TWO_PI) ** 2) ** (1.0 / 3.0)
    if a <= consts.earth_radius:
        raise RgtSolveError(f"period ratio {tau} implies a sub-surface orbit")

    converged = False
    for _ in range(100):
        residual = _period_ratio_at(a, e, i, consts) - target
        if abs(residual) / target <= 1e-13:
            converged = True
            break
        h = a * 1e-7
        slope = (_period_ratio_at(a + h, e, i, consts)
                 - _period_ratio_at(a - h, e, i, consts)) / (2.0 * h)
        a_next = a - residual / slope
        if a_next <= consts.earth_radius:
            raise RgtSolveError(f"period ratio {tau} has no orbit above the Earth surface")
        a = a_next
    if not converged:
        raise RgtSolveError(f"Newton iteration did not converge for tau={tau}, e={e}, i={i}")

    rates = secular_rates(a, e, i, consts)
    t_s = TWO_PI / (rates.omega_dot + rates.m_dot)
    t_g = TWO_PI / (consts.earth_rotation_rate - rates.raan_dot)
    return PeriodSet(t_s=t_s, t_g=t_g, t_r=tau.n_p * t_s,
                     semi_major_axis=a, semi_latus_rectum=a * (1.0 - e * e))


def solve_semi_major_axis(tau: PeriodRatio, e: float, i: float,
                          consts: PhysicalConstants = DEFAULT_CONSTANTS) -> PeriodSet:
    """Semi-major axis (and periods) closing the ground track at ratio tau.

    Newton iteration on (omega_dot + m_dot)/(w_earth - raan_dot) = n_p/n_d,
    converged to 1e-12 relative or better.  Raises :class:`RgtSolveError`
    when no physical solution exists.
    """
    if not 0.0 <= e < 1.0:
        raise ValueError("eccentricity must lie in [0, 1)")
    return _solve_semi_major_axis(tau, float(e), float(i), consts)


def repeat_period(elements: RgtElements,
                  consts: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Period of repetition T_r for the given elements, seconds."""
    return solve_semi_major_axis(elements.tau, elements.eccentricity,
                                 elements.inclination, consts).t_r


def kepler_eccentric_anomaly(mean_anomaly: np.ndarray, e: float) -> np.ndarray:
    """Solve E - e sin E = M by Newton iteration from E0 = M, to 1e-12 rad."""
    m = np.asarray(mean_anomaly, dtype=float)
    if e == 0.0:
        return m.copy()
    big_e = m.copy()
    for _ in range(50):
        delta = (big_e - e * np.sin(big_e) - m) / (1.0 - e * np.cos(big_e))
        big_e = big_e - delta
        if np.max(np.abs(delta)) <= 1e-12:
            break
    return big_e


def greenwich_angle(elements: RgtElements, t,
                    consts: PhysicalConstants = DEFAULT_CONSTANTS):
    """Greenwich rotation angle at ``t`` seconds past the elements' epoch."""
    return GMST_J2000_RAD + consts.earth_rotation_rate * (elements.epoch + np.asarray(t, dtype=float))


def propagate_ecef(elements: RgtElements, t,
                   consts: PhysicalConstants = DEFAULT_CONSTANTS) -> np.ndarray:
    """ECEF position at ``t`` seconds past epoch, km.

    Two-body motion with the secular J2 drift applied linearly to
    (raan, arg_perigee, mean_anomaly), then a rotation by the Greenwich
    angle about the polar axis.  ``t`` may be a scalar or an array;
    the result is shaped (3,) or (n, 3) accordingly.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    geom = solve_semi_major_axis(elements.tau, elements.eccentricity,
                                 elements.inclination, consts)
    a, e = geom.semi_major_axis, elements.eccentricity
    rates = secular_rates(a, e, elements.inclination, consts)

    raan = elements.raan + rates.raan_dot * t_arr
    argp = elements.arg_perigee + rates.omega_dot * t_arr
    mean = elements.mean_anomaly + rates.m_dot * t_arr

    big_e = kepler_eccentric_anomaly(mean, e)
    true_anom = 2.0 * np.arctan2(np.sqrt(1.0 + e) * np.sin(big_e / 2.0),
                                 np.sqrt(1.0 - e) * np.cos(big_e / 2.0))
    radius = a * (1.0 - e * np.cos(big_e))

    u = argp + true_anom
    cos_i, sin_i = math.cos(elements.inclination), math.sin(elements.inclination)
    cos_u, sin_u = np.cos(u), np.sin(u)
    cos_o, sin_o = np.cos(raan), np.sin(raan)
    x_eci = radius * (cos_o * cos_u - sin_o * sin_u * cos_i)
    y_eci = radius * (sin_o * cos_u + cos_o * sin_u * cos_i)
    z_eci = radius * sin_u * sin_i

    theta = GMST_J2000_RAD + consts.earth_rotation_rate * (elements.epoch + t_arr)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    pos = np.stack([cos_t * x_eci + sin_t * y_eci,
                    -sin_t * x_eci + cos_t * y_eci,
                    z_eci], axis=-1)
    return pos[0] if np.isscalar(t) or np.ndim(t) == 0 else pos

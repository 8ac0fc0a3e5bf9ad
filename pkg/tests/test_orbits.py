import math

import numpy as np
import pytest

from oracles import secular_rates_mp
from satpattern.orbits import (
    CRITICAL_INCLINATION_RAD,
    DEFAULT_CONSTANTS,
    PeriodRatio,
    PhysicalConstants,
    RgtElements,
    RgtSolveError,
    kepler_eccentric_anomaly,
    propagate_ecef,
    secular_rates,
    solve_semi_major_axis,
)


def test_period_ratio_reduces_to_lowest_terms():
    assert PeriodRatio(10, 2) == PeriodRatio(5, 1)
    assert PeriodRatio(83, 6).n_p == 83
    assert str(PeriodRatio(12, 4)) == "3/1"
    assert PeriodRatio.parse("8/1") == PeriodRatio(8, 1)
    assert PeriodRatio.parse("12") == PeriodRatio(12, 1)
    with pytest.raises(ValueError):
        PeriodRatio(0, 1)


def test_physical_constants_positive():
    with pytest.raises(ValueError):
        PhysicalConstants(mu=-1.0)


def test_elliptic_orbits_must_be_critically_inclined():
    RgtElements(tau=PeriodRatio(5, 1), eccentricity=0.41, inclination=math.radians(63.435))
    RgtElements(tau=PeriodRatio(5, 1), eccentricity=0.41, inclination=math.radians(116.57))
    with pytest.raises(ValueError):
        RgtElements(tau=PeriodRatio(5, 1), eccentricity=0.41, inclination=math.radians(50.0))


def test_omega_dot_vanishes_at_critical_inclination():
    rates = secular_rates(7000.0, 0.0, CRITICAL_INCLINATION_RAD)
    assert abs(rates.omega_dot) <= 1e-12
    # The usual rounded figure sits a hair off the exact zero.
    rates_rounded = secular_rates(7000.0, 0.0, math.radians(63.4349))
    assert abs(rates_rounded.omega_dot) <= 1e-11


def test_raan_dot_zero_for_polar_orbit():
    rates = secular_rates(7000.0, 0.0, math.radians(90.0))
    assert rates.raan_dot == pytest.approx(0.0, abs=1e-18)


def test_secular_rates_match_high_precision_oracle():
    a, e, i = 7000.0, 0.1, math.radians(50.0)
    got = secular_rates(a, e, i)
    want = secular_rates_mp(a, e, i, DEFAULT_CONSTANTS.earth_radius,
                            DEFAULT_CONSTANTS.mu, DEFAULT_CONSTANTS.j2)
    assert got.omega_dot == pytest.approx(want[0], rel=1e-12)
    assert got.raan_dot == pytest.approx(want[1], rel=1e-12)
    assert got.m_dot == pytest.approx(want[2], rel=1e-12)


def test_secular_rates_domain_errors():
    with pytest.raises(ValueError):
        secular_rates(6000.0, 0.0, 1.0)   # below the surface
    with pytest.raises(ValueError):
        secular_rates(7000.0, 1.5, 1.0)


@pytest.mark.parametrize("n_p,n_d,e,i_deg,alt_km", [
    (8, 1, 0.0, 70.0, 4149.2),
    (6, 1, 0.0, 47.915, 6380.3),
    (83, 6, 0.0, 99.2, 946.7),
])
def test_semi_major_axis_altitudes(n_p, n_d, e, i_deg, alt_km):
    geom = solve_semi_major_axis(PeriodRatio(n_p, n_d), e, math.radians(i_deg))
    assert geom.semi_major_axis - DEFAULT_CONSTANTS.earth_radius == pytest.approx(alt_km, abs=1.0)


def test_solution_satisfies_ratio_and_period_identities():
    tau = PeriodRatio(83, 6)
    geom = solve_semi_major_axis(tau, 0.0, math.radians(99.2))
    rates = secular_rates(geom.semi_major_axis, 0.0, math.radians(99.2))
    ratio = (rates.omega_dot + rates.m_dot) / (DEFAULT_CONSTANTS.earth_rotation_rate - rates.raan_dot)
    assert abs(ratio - tau.value) / tau.value <= 1e-12
    assert tau.n_p * geom.t_s == pytest.approx(tau.n_d * geom.t_g, rel=1e-9)
    assert geom.t_r == pytest.approx(5.184e5, abs=10.0)
    assert geom.semi_latus_rectum == pytest.approx(geom.semi_major_axis)


def test_reduced_ratio_gives_identical_orbit():
    a1 = solve_semi_major_axis(PeriodRatio(10, 2), 0.0, 1.0).semi_major_axis
    a2 = solve_semi_major_axis(PeriodRatio(5, 1), 0.0, 1.0).semi_major_axis
    assert abs(a1 - a2) <= 1e-9


def test_solver_is_deterministic():
    first = solve_semi_major_axis(PeriodRatio(7, 1), 0.0, 1.2)
    second = solve_semi_major_axis(PeriodRatio(7, 1), 0.0, 1.2)
    assert first.semi_major_axis == second.semi_major_axis
    assert first.t_r == second.t_r


def test_semi_major_axis_decreases_with_period_ratio():
    prev = math.inf
    for n_p in (4, 6, 8, 10, 12, 14):
        a = solve_semi_major_axis(PeriodRatio(n_p, 1), 0.0, 1.0).semi_major_axis
        assert a < prev
        prev = a


def test_infeasible_ratio_raises():
    with pytest.raises(RgtSolveError):
        solve_semi_major_axis(PeriodRatio(18, 1), 0.0, 1.0)


def test_kepler_solver_residual():
    rng = np.random.default_rng(3)
    m = rng.uniform(-10.0, 10.0, size=200)
    for e in (0.0, 0.1, 0.41, 0.8):
        big_e = kepler_eccentric_anomaly(m, e)
        assert np.max(np.abs(big_e - e * np.sin(big_e) - m)) <= 1e-11


def test_propagate_starts_in_orbital_plane_geometry():
    elements = RgtElements(tau=PeriodRatio(4, 1), inclination=math.radians(50.0))
    geom = solve_semi_major_axis(elements.tau, 0.0, elements.inclination)
    pos = propagate_ecef(elements, 0.0)
    # omega = M = 0 at epoch puts the satellite on the ascending node: z = 0.
    assert abs(pos[2]) <= 1e-9
    assert np.linalg.norm(pos) == pytest.approx(geom.semi_major_axis, abs=1e-6)


def test_ground_track_repeats_after_one_period():
    elements = RgtElements(tau=PeriodRatio(4, 1), inclination=math.radians(50.0),
                           raan=math.radians(350.2))
    t_r = solve_semi_major_axis(elements.tau, 0.0, elements.inclination).t_r
    t = np.linspace(0.0, 0.9 * t_r, 11)
    first = propagate_ecef(elements, t)
    second = propagate_ecef(elements, t + t_r)

    def latlon(p):
        r = np.linalg.norm(p, axis=1)
        return np.degrees(np.arcsin(p[:, 2] / r)), np.degrees(np.arctan2(p[:, 1], p[:, 0]))

    lat1, lon1 = latlon(first)
    lat2, lon2 = latlon(second)
    assert np.max(np.abs(lat1 - lat2)) <= 1e-3
    dlon = (lon1 - lon2 + 180.0) % 360.0 - 180.0
    assert np.max(np.abs(dlon)) <= 1e-3


def test_elliptic_repeat_at_critical_inclination():
    elements = RgtElements(tau=PeriodRatio(5, 1), eccentricity=0.41,
                           inclination=math.radians(63.435),
                           arg_perigee=math.radians(90.0))
    t_r = solve_semi_major_axis(elements.tau, 0.41, elements.inclination).t_r
    p0 = propagate_ecef(elements, 1234.5)
    p1 = propagate_ecef(elements, 1234.5 + t_r)
    assert np.linalg.norm(p0 - p1) <= 1e-2  # km, dominated by the tiny residual apsidal drift

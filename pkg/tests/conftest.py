import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from satpattern import scenario as sc
from satpattern.access import TargetPoint, TimeGrid, seed_access_profile
from satpattern.orbits import PeriodRatio, RgtElements, solve_semi_major_axis

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="session")
def scenario_dir():
    return SCENARIO_DIR


@pytest.fixture(scope="session")
def figure6_setup():
    """Seed orbit, target, grid, and profile for the two-satellite walkthrough:
    tau 4/1, i 50 deg, raan 350.2 deg, target (36.7 N, 137.48 E), e_min 10 deg."""
    seed = RgtElements(
        tau=PeriodRatio(4, 1),
        inclination=math.radians(50.0),
        raan=math.radians(350.2),
    )
    target = TargetPoint(
        latitude=math.radians(36.7),
        longitude=math.radians(137.48),
        min_elevation=math.radians(10.0),
    )
    grid = TimeGrid.for_period(solve_semi_major_axis(seed.tau, 0.0, seed.inclination).t_r, 720)
    profile = seed_access_profile(seed, target, grid)
    return seed, target, grid, profile


@pytest.fixture(scope="session")
def example1_problem():
    """Parsed Example-1 scenario with its profiles (shared to save rebuilds)."""
    scen = sc.parse_scenario(SCENARIO_DIR / "example1.json")
    grid, problem = sc.build_problem(scen)
    return scen, grid, problem

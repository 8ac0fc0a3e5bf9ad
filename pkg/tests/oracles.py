"""Independent reference implementations used as test oracles.

Nothing here may share code paths with the package: convolution goes
through explicit permutation matrices, covering minima through exhaustive
enumeration, secular rates through arbitrary-precision re-evaluation, and
the geodetic conversion through a differently-factored closed form.
"""
import itertools
import math

import numpy as np
from mpmath import mp, mpf, sqrt as mp_sqrt, sin as mp_sin, cos as mp_cos


def permutation_matrix(length: int) -> np.ndarray:
    """Single-step circular shift matrix: (P v)[n] = v[(n-1) mod L]."""
    p = np.zeros((length, length), dtype=np.int64)
    for i in range(length):
        p[i, (i - 1) % length] = 1
    return p


def superposed_shifts(v: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Coverage as the sum of permutation-shifted profiles, sum_k P^{n_k} v."""
    length = len(v)
    p = permutation_matrix(length)
    out = np.zeros(length, dtype=np.int64)
    shifted = np.eye(length, dtype=np.int64)
    power = 0
    for n_k in np.flatnonzero(x):
        while power < n_k:
            shifted = p @ shifted
            power += 1
        out += shifted @ v.astype(np.int64)
    return out


def brute_force_cover_min(matrix: np.ndarray, rhs: np.ndarray):
    """Exhaustive minimum of 1'x over binary x with matrix x >= rhs.

    Returns (objective, x) or (None, None) when infeasible.  Enumerates
    all subsets for up to 16 variables, otherwise by ascending
    cardinality; intended for num_vars <= 24.
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64)
    n_vars = matrix.shape[1]
    if np.any(matrix.sum(axis=1) < rhs):
        return None, None
    if n_vars <= 16:
        masks = np.arange(2 ** n_vars, dtype=np.uint32)
        bits = ((masks[:, None] >> np.arange(n_vars)) & 1).astype(np.int64)
        feasible = (bits @ matrix.T >= rhs).all(axis=1)
        sizes = bits.sum(axis=1)
        sizes[~feasible] = n_vars + 1
        best = int(np.argmin(sizes))
        if not feasible[best]:
            return None, None
        return int(bits[best].sum()), bits[best]
    for size in range(n_vars + 1):
        for combo in itertools.combinations(range(n_vars), size):
            x = np.zeros(n_vars, dtype=np.int64)
            x[list(combo)] = 1
            if (matrix @ x >= rhs).all():
                return size, x
    return None, None


def secular_rates_mp(a, e, i, earth_radius, mu, j2, digits=50):
    """Arbitrary-precision re-evaluation of the three secular-rate formulas."""
    with mp.workdps(digits):
        a, e, i = mpf(a), mpf(e), mpf(i)
        r, mu, j2 = mpf(earth_radius), mpf(mu), mpf(j2)
        p = a * (1 - e ** 2)
        n0 = mp_sqrt(mu / a ** 3)
        k = mpf(3) / 2 * j2 * (r / p) ** 2
        sin2 = mp_sin(i) ** 2
        omega_dot = k * n0 * (2 - mpf(5) / 2 * sin2)
        raan_dot = -k * n0 * mp_cos(i)
        m_dot = n0 * (1 - k * mp_sqrt(1 - e ** 2) * (mpf(3) / 2 * sin2 - 1))
        return float(omega_dot), float(raan_dot), float(m_dot)


def geodetic_to_ecef_reference(lat, lon, a=6378.137, f=1.0 / 298.257223563):
    """Textbook geodetic conversion via the polar semi-minor axis form."""
    b = a * (1.0 - f)
    cos_lat, sin_lat = math.cos(lat), math.sin(lat)
    n = a * a / math.sqrt(a * a * cos_lat ** 2 + b * b * sin_lat ** 2)
    return np.array([
        n * cos_lat * math.cos(lon),
        n * cos_lat * math.sin(lon),
        (b * b / (a * a)) * n * sin_lat,
    ])

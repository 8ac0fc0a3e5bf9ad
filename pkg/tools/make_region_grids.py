#!/usr/bin/env python3
"""Regenerate the bundled scenario fixtures under scenarios/.

The three area targets are coarse 3-degree rasters of the regions of
interest.  Published shapefiles are not bundled, so the grids here are
hand-drawn approximations that keep the documented point counts:
Antarctica 94 points (near-equal-area polar cap bands), Amazon basin 56,
Nile basin 30.  Run from the repository root:

    python3 tools/make_region_grids.py
"""
import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "scenarios"


def antarctica_points():
    """Polar cap, 3-degree latitude bands, longitudes thinned by cos(lat)
    toward equal area; 6 + 13 + 19 + 25 + 31 = 94 points."""
    pts = []
    for lat in (-87, -84, -81, -78, -75):
        count = round(120 * math.cos(math.radians(lat)))
        for k in range(count):
            lon = -180.0 + 360.0 * k / count
            pts.append((float(lat), round(lon, 4)))
    return pts


# Per-band longitude rasters (3-degree cells), west to east inclusive.
AMAZON_BANDS = {
    3: (-72, -60),
    0: (-78, -54),
    -3: (-78, -51),
    -6: (-78, -51),
    -9: (-75, -51),
    -12: (-72, -54),
    -15: (-69, -57),
    -18: (-63, -63),
}

NILE_BANDS = {
    30: (30, 33),
    27: (30, 33),
    24: (30, 33),
    21: (30, 36),
    18: (30, 36),
    15: (30, 36),
    12: (27, 36),
    9: (27, 36),
    6: (27, 36),
    3: (30, 36),
}


def band_points(bands):
    pts = []
    for lat in sorted(bands, reverse=True):
        lon_w, lon_e = bands[lat]
        for lon in range(lon_w, lon_e + 1, 3):
            pts.append((float(lat), float(lon)))
    return pts


def targets_from_points(points, min_elev_deg, requirement, prefix):
    return [
        {
            "name": f"{prefix}{i + 1}",
            "latitude_deg": lat,
            "longitude_deg": lon,
            "min_elevation_deg": min_elev_deg,
            "requirement": requirement,
        }
        for i, (lat, lon) in enumerate(points)
    ]


def write(name, doc):
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {path}")


def main():
    atlanta = {
        "name": "atlanta",
        "latitude_deg": 34.75,
        "longitude_deg": -84.39,
        "min_elevation_deg": 5.0,
        "requirement": 1,
    }
    seed_12_1 = {
        "label": "z1",
        "tau": "12/1",
        "eccentricity": 0.0,
        "inclination_deg": 102.9,
        "arg_perigee_deg": 0.0,
        "raan_deg": 98.3,
        "mean_anomaly_deg": 0.0,
    }

    write("example1.json", {
        "schema_version": 1,
        "name": "example1",
        "length": 720,
        "solver": "bilp",
        "solver_config": {"node_limit": 400, "deterministic": True},
        "sub_constellations": [seed_12_1],
        "targets": [atlanta],
    })

    write("example1_qs.json", {
        "schema_version": 1,
        "name": "example1_qs",
        "length": 720,
        "solver": "quasi-symmetric",
        "sub_constellations": [seed_12_1],
        "targets": [atlanta],
    })

    atlanta_wave = dict(atlanta)
    atlanta_wave["requirement"] = {
        "type": "piecewise",
        "default": 1,
        "segments": [{"start": 240, "end": 480, "fold": 2}],
    }
    write("example2.json", {
        "schema_version": 1,
        "name": "example2",
        "length": 720,
        "solver": "bilp",
        "solver_config": {"node_limit": 400, "deterministic": True},
        "sub_constellations": [seed_12_1],
        "targets": [atlanta_wave],
    })

    write("example3.json", {
        "schema_version": 1,
        "name": "example3",
        "length": 718,
        "solver": "bilp",
        "solver_config": {"node_limit": 400, "deterministic": True},
        "sub_constellations": [{
            "label": "z1",
            "tau": "5/1",
            "eccentricity": 0.41,
            "inclination_deg": 63.435,
            "arg_perigee_deg": 90.0,
            "raan_deg": 0.0,
            "mean_anomaly_deg": 0.0,
        }],
        "targets": targets_from_points(antarctica_points(), 30.0, 1, "antarctica"),
    })

    amazon_req = {"type": "impulses", "indices": list(range(175, 4200, 350)), "fold": 1}
    nile_req = {"type": "impulses", "indices": list(range(0, 4200, 175)), "fold": 1}
    write("example4.json", {
        "schema_version": 1,
        "name": "example4",
        "length": 4200,
        "solver": "bilp",
        "solver_config": {"node_limit": 10, "deterministic": True},
        "sub_constellations": [{
            "label": "z1",
            "tau": "83/6",
            "eccentricity": 0.0,
            "inclination_deg": 99.2,
            "arg_perigee_deg": 0.0,
            "raan_deg": 0.0,
            "mean_anomaly_deg": 0.0,
        }],
        "targets": (
            targets_from_points(band_points(AMAZON_BANDS), 20.0, amazon_req, "amazon")
            + targets_from_points(band_points(NILE_BANDS), 20.0, nile_req, "nile")
        ),
    })

    write("example5.json", {
        "schema_version": 1,
        "name": "example5",
        "length": 717,
        "solver": "bilp",
        "solver_config": {"node_limit": 60, "deterministic": True},
        "sub_constellations": [
            {
                "label": "z1",
                "tau": "8/1",
                "eccentricity": 0.0,
                "inclination_deg": 70.0,
                "arg_perigee_deg": 0.0,
                "raan_deg": 0.0,
                "mean_anomaly_deg": 0.0,
            },
            {
                "label": "z2",
                "tau": "6/1",
                "eccentricity": 0.0,
                "inclination_deg": 47.915,
                "arg_perigee_deg": 0.0,
                "raan_deg": 0.0,
                "mean_anomaly_deg": 0.0,
            },
        ],
        "targets": [
            {
                "name": "reykjavik",
                "latitude_deg": 64.14,
                "longitude_deg": -21.94,
                "min_elevation_deg": 15.0,
                "requirement": 1,
            },
            {
                "name": "mumbai",
                "latitude_deg": 19.07,
                "longitude_deg": 72.87,
                "min_elevation_deg": 10.0,
                "requirement": 1,
            },
        ],
    })


if __name__ == "__main__":
    main()

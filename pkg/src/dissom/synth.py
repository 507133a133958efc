"""Seeded synthetic interval datasets for tests and demos.

``geo_intervals`` mimics monthly (min, max) temperature intervals of weather
stations whose climate is a smooth function of longitude and latitude.
``two_groups`` produces two tight, well separated interval clouds.
"""
from __future__ import annotations

import numpy as np

from .intervals import IntervalDataset, from_arrays

MONTHS = ("jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec")


def geo_intervals(n: int = 265, seed: int = 0, noise: float = 0.3) -> IntervalDataset:
    """Stations scattered over 74..134 E, 18..53 N with 12 monthly intervals.

    Colder and more seasonal towards the north, wider daily ranges towards
    the west. Noise is Gaussian with standard deviation ``noise`` (degrees).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    lon = rng.uniform(74.0, 134.0, n)
    lat = rng.uniform(18.0, 53.0, n)
    month = np.arange(12)
    season = -np.cos(2 * np.pi * (month + 0.5) / 12.0)  # -1 in winter, +1 in summer

    north = (lat - 18.0)[:, None]
    west = (134.0 - lon)[:, None]
    annual_mean = 24.0 - 0.7 * north - 0.12 * west
    amplitude = 4.0 + 0.45 * north + 0.08 * west
    centre = annual_mean + amplitude * season[None, :]
    half_range = 3.0 + 0.05 * north + 0.1 * west

    centre = centre + noise * rng.standard_normal((n, 12))
    half_range = np.abs(half_range + noise * rng.standard_normal((n, 12)))
    lower = np.round(centre - half_range, 6)
    upper = np.round(centre + half_range, 6)
    labels = [f"ST{i:04d}" for i in range(n)]
    meta = {"lon": np.round(lon, 6), "lat": np.round(lat, 6)}
    return from_arrays(lower, upper, labels, meta, MONTHS)


def two_groups(n: int = 100, p: int = 3, seed: int = 0, spread: float = 1.0,
               separation: float = 20.0) -> tuple[IntervalDataset, np.ndarray]:
    """Two interval clouds whose centers are ``separation`` apart in every variable.

    Interval centers are uniform within ``spread`` of their group center and
    half-widths uniform in ``[0, spread]``. Returns the dataset and the 0/1
    group of each item (first half group 0).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    group = (np.arange(n) >= n // 2).astype(int)
    centre = separation * group[:, None] + rng.uniform(-spread, spread, (n, p))
    half = rng.uniform(0.0, spread, (n, p))
    labels = [f"{'AB'[g]}{i:03d}" for i, g in enumerate(group)]
    return from_arrays(centre - half, centre + half, labels), group

"""Speed-threshold outlier removal: flag points whose implied speed from the
last kept point falls outside configured bounds.

Comparing against the last *kept* point rather than the raw predecessor keeps
runs of consecutive bad fixes from hiding behind each other: once a point is
flagged it never serves as anyone's reference.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import asin, cos, radians, sin, sqrt

import numpy as np

from trajclean.core import EARTH_RADIUS_M, ConfigError, LabelSet, Trajectory


@dataclass(frozen=True)
class SpeedHeuristicConfig:
    """Plausible speed window in m/s; points outside it are removed."""

    v_max: float
    v_min: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.v_min < self.v_max):
            raise ConfigError(f"require 0 <= v_min < v_max, got [{self.v_min}, {self.v_max}]")


def chain_scan(t: np.ndarray, lat: np.ndarray, lon: np.ndarray, v_min: float, v_max: float) -> list[int]:
    """Sequential keep/flag scan; returns the flagged indices.

    The first point is always kept.  Consecutive-pair speeds are precomputed
    vectorized; only points following a flagged one need a fresh speed back to
    the last kept point.
    """
    n = len(t)
    if n < 2:
        return []
    phi = np.radians(lat)
    lam = np.radians(lon)
    half = (
        np.sin(np.diff(phi) / 2.0) ** 2
        + np.cos(phi[:-1]) * np.cos(phi[1:]) * np.sin(np.diff(lam) / 2.0) ** 2
    )
    consecutive = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(half, 0.0, 1.0))) / np.diff(t)
    ok = ((consecutive >= v_min) & (consecutive <= v_max)).tolist()

    phi_list = phi.tolist()
    lam_list = lam.tolist()
    t_list = t.tolist()

    def speed_from(i: int, j: int) -> float:
        h = (
            sin((phi_list[j] - phi_list[i]) / 2.0) ** 2
            + cos(phi_list[i]) * cos(phi_list[j]) * sin((lam_list[j] - lam_list[i]) / 2.0) ** 2
        )
        return 2.0 * EARTH_RADIUS_M * asin(sqrt(min(h, 1.0))) / (t_list[j] - t_list[i])

    flags: list[int] = []
    last_kept = 0
    for i in range(1, n):
        if last_kept == i - 1:
            good = ok[i - 1]
        else:
            good = v_min <= speed_from(last_kept, i) <= v_max
        if good:
            last_kept = i
        else:
            flags.append(i)
    return flags


def detect_speed_heuristic(trajectory: Trajectory, cfg: SpeedHeuristicConfig):
    from trajclean.detectors import DetectionResult

    started = time.perf_counter()
    arr = trajectory.arrays()
    flags = chain_scan(arr.t, arr.lat, arr.lon, cfg.v_min, cfg.v_max)
    return DetectionResult(
        flags=LabelSet.of(flags),
        replacements=None,
        elapsed=time.perf_counter() - started,
    )

"""Local Outlier Factor over per-point tangent-plane coordinates.

Scores follow the canonical definition: k-distance neighborhoods (including
distance ties, so a neighborhood may hold more than k points), reachability
distances, local reachability density, and the LOF ratio of neighbor density
to own density.  Scores near 1 mean inlier; a point is flagged when its score
exceeds the configured threshold.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from trajclean.core import ConfigError, LabelSet, Trajectory, to_local_xy


class DegenerateNeighborhoodWarning(UserWarning):
    """Too few points for the requested neighbor count; nothing was flagged."""


@dataclass(frozen=True)
class LofConfig:
    """Neighbor count and score threshold (> 1; 1.5 is a common default)."""

    k: int
    threshold: float

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not self.threshold > 1.0:
            raise ConfigError(f"threshold must be > 1, got {self.threshold}")


def lof_scores(points_xy: np.ndarray, k: int) -> np.ndarray:
    """LOF score per row of an (n, d) coordinate array; requires n > k.

    Coincident duplicate groups drive the local reachability density to
    infinity; the inf/inf ratio is defined as 1.0 (dense duplicates are not
    outliers).
    """
    x = np.asarray(points_xy, dtype=float)
    n = len(x)
    if n <= k:
        raise ValueError(f"need more than k={k} points, got {n}")

    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(dist, np.inf)

    k_dist = np.partition(dist, k - 1, axis=1)[:, k - 1]
    neighbor = dist <= k_dist[:, None]
    neighbor_count = neighbor.sum(axis=1)

    reach = np.maximum(k_dist[None, :], dist)
    mean_reach = np.where(neighbor, reach, 0.0).sum(axis=1) / neighbor_count
    with np.errstate(divide="ignore"):
        lrd = np.where(mean_reach > 0.0, 1.0 / mean_reach, np.inf)

    with np.errstate(invalid="ignore"):
        neighbor_lrd_mean = np.where(neighbor, lrd[None, :], 0.0).sum(axis=1) / neighbor_count
        scores = neighbor_lrd_mean / lrd
    return np.where(np.isnan(scores), 1.0, scores)


def detect_lof(trajectory: Trajectory, cfg: LofConfig):
    from trajclean.detectors import DetectionResult

    started = time.perf_counter()
    n = len(trajectory)
    if n <= cfg.k:
        warnings.warn(
            f"LOF needs more than k={cfg.k} points, trajectory has {n}; no flags",
            DegenerateNeighborhoodWarning,
            stacklevel=2,
        )
        return DetectionResult(LabelSet(), replacements=None, elapsed=time.perf_counter() - started)

    arr = trajectory.arrays()
    lat0, lon0 = trajectory.centroid()
    x, y = to_local_xy(arr.lat, arr.lon, lat0, lon0)
    scores = lof_scores(np.column_stack([x, y]), cfg.k)
    flags = np.flatnonzero(scores > cfg.threshold).tolist()
    return DetectionResult(
        flags=LabelSet.of(flags),
        replacements=None,
        elapsed=time.perf_counter() - started,
    )

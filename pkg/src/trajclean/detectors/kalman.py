"""Constant-velocity Kalman filter with Mahalanobis innovation gating.

Positions are projected onto a local tangent plane about the trajectory
centroid and tracked with a 2-D constant-velocity state (x, y, vx, vy).  Each
point is first predicted from the previous state over the actual timestamp
gap; a point whose squared Mahalanobis innovation distance exceeds gate**2 is
flagged and excluded from the state update, and its replacement is the
predicted position mapped back to lat/lon.

The filter is initialized from the first two points (position from the
second, velocity from their difference), so those two are never flagged and
trajectories shorter than three points produce no flags.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from trajclean.core import (
    ConfigError,
    LabelSet,
    Trajectory,
    TrajectoryPoint,
    from_local_xy,
    to_local_xy,
)


@dataclass(frozen=True)
class KalmanConfig:
    """White-acceleration process noise (m/s^2), measurement noise (m), gate."""

    process_noise_sigma: float
    measurement_noise_sigma: float
    gate: float

    def __post_init__(self) -> None:
        if self.process_noise_sigma <= 0.0:
            raise ConfigError(f"process_noise_sigma must be > 0, got {self.process_noise_sigma}")
        if self.measurement_noise_sigma <= 0.0:
            raise ConfigError(
                f"measurement_noise_sigma must be > 0, got {self.measurement_noise_sigma}"
            )
        if not self.gate > 0.0:
            raise ConfigError(f"gate must be > 0, got {self.gate}")


def _transition(dt: float) -> np.ndarray:
    f = np.eye(4)
    f[0, 2] = dt
    f[1, 3] = dt
    return f


def _process_noise(dt: float, sigma_a: float) -> np.ndarray:
    # Discretized white-noise acceleration for each axis.
    q11 = dt ** 4 / 4.0
    q13 = dt ** 3 / 2.0
    q33 = dt ** 2
    q = np.array(
        [
            [q11, 0.0, q13, 0.0],
            [0.0, q11, 0.0, q13],
            [q13, 0.0, q33, 0.0],
            [0.0, q13, 0.0, q33],
        ]
    )
    return sigma_a ** 2 * q


def detect_kalman(trajectory: Trajectory, cfg: KalmanConfig):
    from trajclean.detectors import DetectionResult

    started = time.perf_counter()
    n = len(trajectory)
    if n < 3:
        return DetectionResult(LabelSet(), replacements={}, elapsed=time.perf_counter() - started)

    arr = trajectory.arrays()
    lat0, lon0 = trajectory.centroid()
    x, y = to_local_xy(arr.lat, arr.lon, lat0, lon0)
    t = arr.t

    r_var = cfg.measurement_noise_sigma ** 2
    measurement_noise = r_var * np.eye(2)
    h = np.zeros((2, 4))
    h[0, 0] = 1.0
    h[1, 1] = 1.0

    dt0 = t[1] - t[0]
    state = np.array([x[1], y[1], (x[1] - x[0]) / dt0, (y[1] - y[0]) / dt0])
    # Velocity drawn from two noisy positions carries twice the position noise.
    covariance = np.diag([r_var, r_var, 2.0 * r_var / dt0 ** 2, 2.0 * r_var / dt0 ** 2])

    gate_sq = cfg.gate ** 2
    flags: list[int] = []
    replacements: dict[int, TrajectoryPoint] = {}
    t_state = t[1]

    for i in range(2, n):
        dt = t[i] - t_state
        f = _transition(dt)
        state = f @ state
        covariance = f @ covariance @ f.T + _process_noise(dt, cfg.process_noise_sigma)
        t_state = t[i]

        innovation = np.array([x[i], y[i]]) - h @ state
        innovation_cov = h @ covariance @ h.T + measurement_noise
        distance_sq = float(innovation @ np.linalg.solve(innovation_cov, innovation))

        if distance_sq > gate_sq:
            flags.append(i)
            pred_lat, pred_lon = from_local_xy(float(state[0]), float(state[1]), lat0, lon0)
            original = trajectory[i]
            replacements[i] = TrajectoryPoint(
                original.object_id,
                original.t,
                pred_lat,
                pred_lon,
                original.recorded_speed,
                original.recorded_bearing,
            )
            continue  # flagged points never update the state

        gain = np.linalg.solve(innovation_cov.T, (covariance @ h.T).T).T
        state = state + gain @ innovation
        covariance = (np.eye(4) - gain @ h) @ covariance

    return DetectionResult(
        flags=LabelSet.of(flags),
        replacements=replacements,
        elapsed=time.perf_counter() - started,
    )

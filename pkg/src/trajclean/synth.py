"""Synthetic trajectories with controlled, labeled outlier injection.

Real mobility datasets come without trustworthy labels, so detector tests and
benchmarks run against generated tracks where the injected outliers are known
exactly.  Generation is fully deterministic: the PCG64 generator (numpy's
``default_rng``) is seeded from the spec and consumed in a fixed order
(x jitter, y jitter, outlier indices, displacement angles).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from trajclean.core import ConfigError, LabelSet, Trajectory, from_local_xy


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one generated trajectory.

    The base path is constant-velocity dead reckoning at ``base_speed`` along
    ``base_bearing`` with Gaussian position jitter of ``position_noise_sigma``
    meters per axis.  A fraction ``outlier_rate`` of the interior points is
    displaced by ``outlier_displacement`` meters in a random direction.
    """

    n_points: int
    base_speed: float = 10.0
    base_bearing: float = 90.0
    sample_interval: float = 1.0
    position_noise_sigma: float = 1.0
    outlier_rate: float = 0.0
    outlier_displacement: float = 0.0
    seed: int = 0
    start_lat: float = 45.0
    start_lon: float = 9.0
    start_t: float = 0.0
    object_id: str = "synth-000"

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ConfigError(f"n_points must be >= 2, got {self.n_points}")
        if not (0.0 <= self.outlier_rate <= 1.0):
            raise ConfigError(f"outlier_rate must lie in [0, 1], got {self.outlier_rate}")
        if self.sample_interval <= 0.0:
            raise ConfigError(f"sample_interval must be > 0, got {self.sample_interval}")
        if self.outlier_displacement < 0.0:
            raise ConfigError(f"outlier_displacement must be >= 0, got {self.outlier_displacement}")
        if self.base_speed < 0.0:
            raise ConfigError(f"base_speed must be >= 0, got {self.base_speed}")
        if self.position_noise_sigma < 0.0:
            raise ConfigError(f"position_noise_sigma must be >= 0, got {self.position_noise_sigma}")


def _sample_outlier_indices(rng: np.random.Generator, n_points: int, count: int) -> np.ndarray:
    """Choose `count` interior indices (never first or last), uniformly.

    When feasible the sample contains no two adjacent indices, so each
    injected spike sits between clean neighbors and its implied segment
    speeds are unambiguous.  Non-adjacent k-subsets are drawn uniformly via
    the standard combinatorial map from k-subsets of a shrunk range; above
    the feasibility limit the sample falls back to an unconstrained draw.
    """
    interior = n_points - 2
    if count == 0:
        return np.empty(0, dtype=int)
    if count <= (interior + 1) // 2:
        base = np.sort(rng.choice(interior - count + 1, size=count, replace=False))
        positions = base + np.arange(count)
    else:
        positions = np.sort(rng.choice(interior, size=count, replace=False))
    return positions + 1


def generate_trajectory(spec: SynthSpec) -> tuple[Trajectory, LabelSet]:
    """Generate one trajectory plus the label set of injected outlier indices.

    Every point carries the clean pre-displacement kinematics in its
    recorded_speed/recorded_bearing fields, so sensor cross-checks see the
    displacement as a disagreement.  |labels| == round(outlier_rate * (n-2))
    exactly (Python banker's rounding); the first and last points are never
    displaced.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_points
    step = spec.base_speed * spec.sample_interval
    heading = np.radians(spec.base_bearing)

    k = np.arange(n, dtype=float)
    x = k * step * np.sin(heading) + rng.normal(0.0, spec.position_noise_sigma, n)
    y = k * step * np.cos(heading) + rng.normal(0.0, spec.position_noise_sigma, n)

    count = round(spec.outlier_rate * (n - 2))
    indices = _sample_outlier_indices(rng, n, count)
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    x[indices] += spec.outlier_displacement * np.sin(angles)
    y[indices] += spec.outlier_displacement * np.cos(angles)

    lat, lon = from_local_xy(x, y, spec.start_lat, spec.start_lon)
    t = spec.start_t + k * spec.sample_interval
    trajectory = Trajectory.from_arrays(
        spec.object_id,
        t,
        lat,
        lon,
        recorded_speed=np.full(n, spec.base_speed),
        recorded_bearing=np.full(n, spec.base_bearing % 360.0),
    )
    return trajectory, LabelSet.of(indices.tolist())


def generate_dataset(spec: SynthSpec, n_trajectories: int) -> tuple[list[Trajectory], dict[str, LabelSet]]:
    """Generate a multi-trajectory dataset from one spec.

    Trajectory i uses seed ``spec.seed + i`` and object id ``synth-{i:04d}``,
    so a dataset is reproducible from the single spec seed.
    """
    if n_trajectories < 1:
        raise ConfigError(f"n_trajectories must be >= 1, got {n_trajectories}")
    trajectories: list[Trajectory] = []
    labels: dict[str, LabelSet] = {}
    for i in range(n_trajectories):
        sub = dataclasses.replace(spec, seed=spec.seed + i, object_id=f"synth-{i:04d}")
        trajectory, label_set = generate_trajectory(sub)
        trajectories.append(trajectory)
        labels[trajectory.object_id] = label_set
    return trajectories, labels

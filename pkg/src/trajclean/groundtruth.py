"""Sensor cross-check labeling: flag points whose computed kinematics disagree
with the sensor-recorded speed or bearing beyond configured thresholds.

For each consecutive pair (p, p+1) inside one trajectory the speed and initial
bearing from p to p+1 are computed from positions and timestamps and compared
against p's recorded channels.  The earlier point of a disagreeing pair is the
one flagged; the last point of a trajectory has no successor and is never
flagged.  Points missing a recorded channel are checked only on the channel
they carry; points missing both are never flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from trajclean.core import (
    ConfigError,
    LabelSet,
    Trajectory,
    bearing_latlon,
    haversine_latlon,
)


@dataclass(frozen=True)
class GroundTruthConfig:
    """Disagreement thresholds: speed in m/s, heading in degrees."""

    speed_threshold: float = 10.0
    heading_threshold: float = 45.0

    def __post_init__(self) -> None:
        if self.speed_threshold <= 0.0:
            raise ConfigError(f"speed_threshold must be > 0, got {self.speed_threshold}")
        if not (0.0 < self.heading_threshold <= 180.0):
            raise ConfigError(
                f"heading_threshold must lie in (0, 180], got {self.heading_threshold}"
            )


# Defaults shipped with this repository; tune per dataset.
DEFAULT_CONFIG = GroundTruthConfig()


def label_trajectory(trajectory: Trajectory, cfg: GroundTruthConfig = DEFAULT_CONFIG) -> LabelSet:
    """Cross-check one trajectory; trajectories with < 2 points yield an empty set."""
    n = len(trajectory)
    if n < 2:
        return LabelSet()
    arr = trajectory.arrays()

    dt = np.diff(arr.t)
    dist = haversine_latlon(arr.lat[:-1], arr.lon[:-1], arr.lat[1:], arr.lon[1:])
    speed = dist / dt
    bearing = bearing_latlon(arr.lat[:-1], arr.lon[:-1], arr.lat[1:], arr.lon[1:])

    # NaN recorded channels compare False, which is exactly "missing: skip".
    with np.errstate(invalid="ignore"):
        speed_dev = np.abs(speed - arr.recorded_speed[:-1]) >= cfg.speed_threshold
        heading_delta = np.abs(bearing - arr.recorded_bearing[:-1]) % 360.0
        heading_dev = np.minimum(heading_delta, 360.0 - heading_delta) >= cfg.heading_threshold

    return LabelSet.of(np.flatnonzero(speed_dev | heading_dev).tolist())


def label_outliers(
    trajectories: Iterable[Trajectory], cfg: GroundTruthConfig = DEFAULT_CONFIG
) -> dict[str, LabelSet]:
    """Cross-check a trajectory collection; result is keyed and ordered by object_id."""
    labeled = {tr.object_id: label_trajectory(tr, cfg) for tr in trajectories}
    return {object_id: labeled[object_id] for object_id in sorted(labeled)}


def write_label_file(path: str | Path, labels_by_id: Mapping[str, LabelSet]) -> None:
    """Write labels as ``object_id,index`` lines, ids sorted, indices ascending."""
    lines = [
        f"{object_id},{index}"
        for object_id in sorted(labels_by_id)
        for index in labels_by_id[object_id]
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def write_index_file(path: str | Path, labels: LabelSet) -> None:
    """Write a single-trajectory sidecar label file, one index per line."""
    lines = [str(index) for index in labels]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_label_file(path: str | Path, default_object_id: str | None = None) -> dict[str, LabelSet]:
    """Read a label file in either format.

    Lines may be ``object_id,index`` or a bare ``index``; bare lines require
    ``default_object_id`` (single-trajectory sidecars).
    """
    collected: dict[str, list[int]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if "," in line:
            object_id, index_text = line.rsplit(",", 1)
        else:
            if default_object_id is None:
                raise ValueError(
                    f"{path}:{lineno}: bare index line {line!r} needs a default object id"
                )
            object_id, index_text = default_object_id, line
        try:
            index = int(index_text)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad point index {index_text!r}") from exc
        collected.setdefault(object_id, []).append(index)
    return {object_id: LabelSet.of(indices) for object_id, indices in sorted(collected.items())}

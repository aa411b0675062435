"""Domain types and spherical-earth primitives shared by every other module.

All angles cross the API in degrees; radians are used internally.  Timestamps
are plain seconds since the epoch (float, sub-second fractions allowed); no
calendar arithmetic happens here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

EARTH_RADIUS_M = 6_371_000.0


class ConfigError(ValueError):
    """A configuration value violates its documented constraints."""


class ZeroOrNegativeDurationError(ValueError):
    """A segment duration is zero or negative, so no speed is defined."""


class DegenerateBearingWarning(UserWarning):
    """Bearing requested for coincident positions; the result is the 0.0 convention."""


def _normalize_lon(lon: float) -> float:
    return ((lon + 180.0) % 360.0) - 180.0


@dataclass(frozen=True, slots=True)
class TrajectoryPoint:
    """One timestamped position with optional sensor-recorded speed and bearing.

    Invariants enforced at construction: lat in [-90, 90], lon normalized to
    [-180, 180), recorded_bearing normalized to [0, 360), recorded_speed >= 0.
    """

    object_id: str
    t: float
    lat: float
    lon: float
    recorded_speed: float | None = None
    recorded_bearing: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.t):
            raise ValueError(f"timestamp must be finite, got {self.t!r}")
        if not (-90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude {self.lat!r} outside [-90, 90]")
        if not math.isfinite(self.lon):
            raise ValueError(f"longitude must be finite, got {self.lon!r}")
        object.__setattr__(self, "lon", _normalize_lon(self.lon))
        if self.recorded_speed is not None:
            if not (math.isfinite(self.recorded_speed) and self.recorded_speed >= 0.0):
                raise ValueError(f"recorded_speed must be >= 0, got {self.recorded_speed!r}")
        if self.recorded_bearing is not None:
            if not math.isfinite(self.recorded_bearing):
                raise ValueError(f"recorded_bearing must be finite, got {self.recorded_bearing!r}")
            object.__setattr__(self, "recorded_bearing", self.recorded_bearing % 360.0)


class TrajectoryArrays(NamedTuple):
    """Column view of a trajectory; missing recorded channels are NaN."""

    t: np.ndarray
    lat: np.ndarray
    lon: np.ndarray
    recorded_speed: np.ndarray
    recorded_bearing: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered point sequence for a single moving object id.

    Timestamps are strictly increasing and every point carries the trajectory's
    object_id; both are checked at construction.
    """

    object_id: str
    points: tuple[TrajectoryPoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if p.object_id != self.object_id:
                raise ValueError(
                    f"point object_id {p.object_id!r} differs from trajectory id {self.object_id!r}"
                )
        if len(pts) > 1:
            t = np.fromiter((p.t for p in pts), dtype=float, count=len(pts))
            if not np.all(np.diff(t) > 0.0):
                raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[TrajectoryPoint]:
        return iter(self.points)

    def __getitem__(self, index: int) -> TrajectoryPoint:
        return self.points[index]

    def arrays(self) -> TrajectoryArrays:
        """Columnar float64 view of the points, built once and cached."""
        cached = self.__dict__.get("_arrays")
        if cached is not None:
            return cached
        n = len(self.points)
        t = np.empty(n)
        lat = np.empty(n)
        lon = np.empty(n)
        spd = np.full(n, np.nan)
        brg = np.full(n, np.nan)
        for i, p in enumerate(self.points):
            t[i] = p.t
            lat[i] = p.lat
            lon[i] = p.lon
            if p.recorded_speed is not None:
                spd[i] = p.recorded_speed
            if p.recorded_bearing is not None:
                brg[i] = p.recorded_bearing
        built = TrajectoryArrays(t, lat, lon, spd, brg)
        object.__setattr__(self, "_arrays", built)
        return built

    def centroid(self) -> tuple[float, float]:
        """Mean (lat, lon) of the points.

        A plain arithmetic mean: adequate at trajectory-scale extents, not
        meaningful for tracks straddling the antimeridian.
        """
        arr = self.arrays()
        return float(arr.lat.mean()), float(arr.lon.mean())

    @classmethod
    def from_arrays(
        cls,
        object_id: str,
        t: Iterable[float],
        lat: Iterable[float],
        lon: Iterable[float],
        recorded_speed: Iterable[float] | None = None,
        recorded_bearing: Iterable[float] | None = None,
    ) -> "Trajectory":
        t = np.asarray(t, dtype=float)
        lat = np.asarray(lat, dtype=float)
        lon = np.asarray(lon, dtype=float)
        n = len(t)
        spd = None if recorded_speed is None else np.broadcast_to(np.asarray(recorded_speed, dtype=float), (n,))
        brg = None if recorded_bearing is None else np.broadcast_to(np.asarray(recorded_bearing, dtype=float), (n,))
        points = tuple(
            TrajectoryPoint(
                object_id,
                float(t[i]),
                float(lat[i]),
                float(lon[i]),
                None if spd is None or math.isnan(spd[i]) else float(spd[i]),
                None if brg is None or math.isnan(brg[i]) else float(brg[i]),
            )
            for i in range(n)
        )
        return cls(object_id, points)


@dataclass(frozen=True)
class SpeedBounds:
    """Physically plausible speed interval [v_min, v_max] in meters/second."""

    v_min: float
    v_max: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.v_min < self.v_max):
            raise ConfigError(f"require 0 <= v_min < v_max, got [{self.v_min}, {self.v_max}]")


@dataclass(frozen=True)
class LabelSet:
    """Sorted, duplicate-free set of point indices flagged as outliers.

    Indices refer to positions within a single trajectory; construction
    canonicalizes order and duplicates and rejects negative values.
    """

    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        canon = tuple(sorted({int(i) for i in self.indices}))
        if canon and canon[0] < 0:
            raise ValueError(f"negative point index {canon[0]}")
        object.__setattr__(self, "indices", canon)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "LabelSet":
        return cls(tuple(indices))

    def to_set(self) -> set[int]:
        return set(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, index: object) -> bool:
        return index in set(self.indices)

    def __bool__(self) -> bool:
        return bool(self.indices)


def haversine_latlon(lat1, lon1, lat2, lon2):
    """Great-circle distance in meters between coordinate pairs.

    Accepts scalars or numpy arrays (broadcast); uses a sphere of radius
    6 371 000 m.
    """
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    dphi = phi2 - phi1
    dlam = np.radians(np.subtract(lon2, lon1))
    a = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlam / 2.0) ** 2
    out = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    return float(out) if np.ndim(out) == 0 else out


def bearing_latlon(lat1, lon1, lat2, lon2):
    """Initial great-circle bearing in degrees [0, 360), clockwise from north.

    Coincident coordinates yield 0.0 (atan2(0, 0) convention); scalar callers
    wanting an explicit degenerate signal should use :func:`initial_bearing`.
    """
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    dlam = np.radians(np.subtract(lon2, lon1))
    y = np.sin(dlam) * np.cos(phi2)
    x = np.cos(phi1) * np.sin(phi2) - np.sin(phi1) * np.cos(phi2) * np.cos(dlam)
    out = np.degrees(np.arctan2(y, x)) % 360.0
    return float(out) if np.ndim(out) == 0 else out


def haversine_distance(a: TrajectoryPoint, b: TrajectoryPoint) -> float:
    """Great-circle distance in meters between two points."""
    return float(haversine_latlon(a.lat, a.lon, b.lat, b.lon))


def initial_bearing(a: TrajectoryPoint, b: TrajectoryPoint) -> float:
    """Initial bearing from a to b in degrees [0, 360); 0 = north, 90 = east.

    Coincident positions have no defined bearing: the function returns 0.0 and
    emits :class:`DegenerateBearingWarning`.
    """
    if a.lat == b.lat and a.lon == b.lon:
        warnings.warn(
            "bearing between coincident positions is undefined; returning 0.0",
            DegenerateBearingWarning,
            stacklevel=2,
        )
        return 0.0
    return float(bearing_latlon(a.lat, a.lon, b.lat, b.lon))


def segment_speed(a: TrajectoryPoint, b: TrajectoryPoint) -> float:
    """Speed in m/s implied by covering the great-circle distance from a to b.

    Raises ZeroOrNegativeDurationError when b.t <= a.t rather than returning
    an infinite or negative speed.
    """
    dt = b.t - a.t
    if dt <= 0.0:
        raise ZeroOrNegativeDurationError(f"segment duration must be positive, got {dt}")
    return haversine_distance(a, b) / dt


def circular_diff(x, y):
    """Smallest absolute difference between two angles in degrees, in [0, 180].

    Wrap-aware: circular_diff(350, 10) == 20.  Accepts scalars or arrays.
    """
    d = np.abs(np.subtract(x, y)) % 360.0
    out = np.minimum(d, 360.0 - d)
    return float(out) if np.ndim(out) == 0 else out


def to_local_xy(lat, lon, lat0: float, lon0: float):
    """Project lat/lon onto an equirectangular tangent plane about (lat0, lon0).

    Returns (x, y) in meters east/north of the reference.  The longitude
    scale is fixed at cos(lat0), which keeps the map exactly invertible by
    :func:`from_local_xy`.
    """
    dlon = (np.subtract(lon, lon0) + 180.0) % 360.0 - 180.0
    x = np.radians(dlon) * EARTH_RADIUS_M * math.cos(math.radians(lat0))
    y = np.radians(np.subtract(lat, lat0)) * EARTH_RADIUS_M
    return x, y


def from_local_xy(x, y, lat0: float, lon0: float):
    """Inverse of :func:`to_local_xy`; returns (lat, lon) in degrees."""
    lat = lat0 + np.degrees(np.asarray(y, dtype=float) / EARTH_RADIUS_M)
    lon = lon0 + np.degrees(
        np.asarray(x, dtype=float) / (EARTH_RADIUS_M * math.cos(math.radians(lat0)))
    )
    lon = ((lon + 180.0) % 360.0) - 180.0
    if np.ndim(lat) == 0:
        return float(lat), float(lon)
    return lat, lon

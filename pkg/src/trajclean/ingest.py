"""CSV dataset parsing into trajectories via explicit column mappings.

Datasets arrive as delimited text with wildly different schemas (AIS exports,
GPS probe dumps, ...), so every run names its columns through a
:class:`ColumnMapping`.  Rows that cannot be parsed are skipped and tallied,
never fatal; the :class:`IngestReport` keeps the accounting balanced so that
``rows_read == points_accepted + rows_rejected`` always holds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from trajclean.core import Trajectory, TrajectoryPoint

KNOT_MS = 0.514444  # meters per second per knot

TIMESTAMP_FORMATS = ("epoch-seconds", "epoch-millis", "iso-8601")
SPEED_UNITS = ("m/s", "knots", "km/h")

_MAPPING_KEYS = (
    "id", "t", "lat", "lon", "speed", "bearing",
    "t_format", "speed_unit", "delimiter", "header",
)


class MappingError(ValueError):
    """A column mapping is incomplete or inconsistent with the file."""


@dataclass(frozen=True)
class ColumnMapping:
    """Where to find each point field in a delimited text file.

    Columns are addressed by header name (str) or 0-based position (int).
    ``object_id``, ``t``, ``lat`` and ``lon`` are mandatory; the recorded
    speed/bearing channels are optional.  Name-based addressing requires
    ``header=True``.
    """

    object_id: int | str
    t: int | str
    lat: int | str
    lon: int | str
    speed: int | str | None = None
    bearing: int | str | None = None
    t_format: str = "epoch-seconds"
    speed_unit: str = "m/s"
    delimiter: str = ","
    header: bool = True

    def __post_init__(self) -> None:
        if self.t_format not in TIMESTAMP_FORMATS:
            raise MappingError(f"t_format must be one of {TIMESTAMP_FORMATS}, got {self.t_format!r}")
        if self.speed_unit not in SPEED_UNITS:
            raise MappingError(f"speed_unit must be one of {SPEED_UNITS}, got {self.speed_unit!r}")
        if len(self.delimiter) != 1:
            raise MappingError(f"delimiter must be a single character, got {self.delimiter!r}")
        if not self.header:
            for name in ("object_id", "t", "lat", "lon", "speed", "bearing"):
                ref = getattr(self, name)
                if isinstance(ref, str):
                    raise MappingError(f"column {name}={ref!r} is a name but the file has no header")


#: Mapping for the CSV layout this package writes itself (see write_dataset_csv).
STANDARD_MAPPING = ColumnMapping(
    object_id="object_id", t="t", lat="lat", lon="lon", speed="speed", bearing="bearing"
)


@dataclass
class IngestReport:
    """Row accounting for one parsed file."""

    rows_read: int = 0
    points_accepted: int = 0
    rows_rejected: int = 0
    rejected_by_reason: dict[str, int] = field(
        default_factory=lambda: {
            "malformed_field": 0,
            "out_of_range_coordinate": 0,
            "duplicate_timestamp": 0,
        }
    )
    trajectories_built: int = 0

    def balanced(self) -> bool:
        return (
            self.rows_read == self.points_accepted + self.rows_rejected
            and self.rows_rejected == sum(self.rejected_by_reason.values())
        )


def load_mapping(path: str | Path) -> ColumnMapping:
    """Read a mapping config file.

    Grammar: one ``key = value`` pair per line; ``#`` starts a comment; blank
    lines are ignored.  Keys: id, t, lat, lon, speed, bearing, t_format,
    speed_unit, delimiter, header.  Integer values address columns by
    position, anything else by header name.  ``delimiter`` takes a single
    character or the escape ``\\t``; ``header`` takes true/false.
    """
    raw: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MappingError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _MAPPING_KEYS:
            raise MappingError(f"{path}:{lineno}: unknown mapping key {key!r}")
        if key in raw:
            raise MappingError(f"{path}:{lineno}: duplicate mapping key {key!r}")
        raw[key] = value

    missing = [k for k in ("id", "t", "lat", "lon") if k not in raw]
    if missing:
        raise MappingError(f"{path}: missing mandatory mapping keys {missing}")

    def column(value: str) -> int | str:
        try:
            return int(value)
        except ValueError:
            return value

    def flag(value: str) -> bool:
        lowered = value.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise MappingError(f"{path}: header must be true/false, got {value!r}")

    delimiter = raw.get("delimiter", ",")
    if delimiter == "\\t":
        delimiter = "\t"

    return ColumnMapping(
        object_id=column(raw["id"]),
        t=column(raw["t"]),
        lat=column(raw["lat"]),
        lon=column(raw["lon"]),
        speed=column(raw["speed"]) if "speed" in raw else None,
        bearing=column(raw["bearing"]) if "bearing" in raw else None,
        t_format=raw.get("t_format", "epoch-seconds"),
        speed_unit=raw.get("speed_unit", "m/s"),
        delimiter=delimiter,
        header=flag(raw["header"]) if "header" in raw else True,
    )


def write_mapping(path: str | Path, mapping: ColumnMapping) -> None:
    """Write a mapping back out in the load_mapping grammar."""
    lines = [
        f"id = {mapping.object_id}",
        f"t = {mapping.t}",
        f"lat = {mapping.lat}",
        f"lon = {mapping.lon}",
    ]
    if mapping.speed is not None:
        lines.append(f"speed = {mapping.speed}")
    if mapping.bearing is not None:
        lines.append(f"bearing = {mapping.bearing}")
    delimiter = "\\t" if mapping.delimiter == "\t" else mapping.delimiter
    lines += [
        f"t_format = {mapping.t_format}",
        f"speed_unit = {mapping.speed_unit}",
        f"delimiter = {delimiter}",
        f"header = {'true' if mapping.header else 'false'}",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_timestamp(text: str, t_format: str) -> float:
    if t_format == "epoch-seconds":
        return float(text)
    if t_format == "epoch-millis":
        return float(text) / 1000.0
    stamp = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.timestamp()


def _speed_to_ms(value: float, unit: str) -> float:
    if unit == "knots":
        return value * KNOT_MS
    if unit == "km/h":
        return value / 3.6
    return value


def order_by_id_and_timestamp(points: Iterable[TrajectoryPoint]) -> list[Trajectory]:
    """Partition points by object id and sort each group by timestamp.

    Exact duplicate (id, t) pairs collapse to the first occurrence in input
    order (the sort is stable).  Trajectories come back ordered by object_id.
    """
    groups: dict[str, list[TrajectoryPoint]] = {}
    for p in points:
        groups.setdefault(p.object_id, []).append(p)
    trajectories = []
    for object_id in sorted(groups):
        pts = sorted(groups[object_id], key=lambda p: p.t)
        kept: list[TrajectoryPoint] = []
        for p in pts:
            if kept and p.t == kept[-1].t:
                continue
            kept.append(p)
        trajectories.append(Trajectory(object_id, tuple(kept)))
    return trajectories


def _resolve_columns(mapping: ColumnMapping, header_row: Sequence[str] | None) -> dict[str, int | None]:
    columns: dict[str, int | None] = {}
    for name in ("object_id", "t", "lat", "lon", "speed", "bearing"):
        ref = getattr(mapping, name)
        if ref is None:
            columns[name] = None
        elif isinstance(ref, int):
            columns[name] = ref
        else:
            assert header_row is not None  # guaranteed by ColumnMapping validation
            stripped = [h.strip() for h in header_row]
            if ref not in stripped:
                raise MappingError(f"column {ref!r} not found in header {stripped}")
            columns[name] = stripped.index(ref)
    return columns


def parse_dataset(path: str | Path, mapping: ColumnMapping) -> tuple[list[Trajectory], IngestReport]:
    """Parse one delimited text file into trajectories plus an ingest report.

    Per-row failures (unparseable fields, out-of-range coordinates) are
    tallied and skipped.  Longitudes in [-180, 360) are accepted and
    normalized to [-180, 180), covering both common conventions; latitudes
    must lie in [-90, 90].  Duplicate (id, timestamp) rows are collapsed to
    the first occurrence and tallied.
    """
    report = IngestReport()
    points: list[TrajectoryPoint] = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter=mapping.delimiter)
        header_row = next(reader, None) if mapping.header else None
        if mapping.header and header_row is None:
            raise MappingError(f"{path}: empty file, expected a header row")
        columns = _resolve_columns(mapping, header_row)

        for row in reader:
            if not row:
                continue
            report.rows_read += 1
            point = _parse_row(row, columns, mapping)
            if isinstance(point, str):
                report.rejected_by_reason[point] += 1
                continue
            points.append(point)

    trajectories = order_by_id_and_timestamp(points)
    report.points_accepted = sum(len(tr) for tr in trajectories)
    report.rejected_by_reason["duplicate_timestamp"] += len(points) - report.points_accepted
    report.rows_rejected = sum(report.rejected_by_reason.values())
    report.trajectories_built = len(trajectories)
    return trajectories, report


def _parse_row(row: Sequence[str], columns: dict[str, int | None], mapping: ColumnMapping):
    """Parse one data row; returns a TrajectoryPoint or a rejection reason."""
    try:
        object_id = row[columns["object_id"]].strip()
        t_text = row[columns["t"]].strip()
        lat_text = row[columns["lat"]].strip()
        lon_text = row[columns["lon"]].strip()
    except IndexError:
        return "malformed_field"
    if not object_id:
        return "malformed_field"
    try:
        t = _parse_timestamp(t_text, mapping.t_format)
        lat = float(lat_text)
        lon = float(lon_text)
    except ValueError:
        return "malformed_field"
    if not (math.isfinite(t) and math.isfinite(lat) and math.isfinite(lon)):
        return "out_of_range_coordinate"
    if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon < 360.0):
        return "out_of_range_coordinate"

    speed = bearing = None
    for channel, convert in (("speed", True), ("bearing", False)):
        col = columns[channel]
        if col is None:
            continue
        try:
            text = row[col].strip()
        except IndexError:
            return "malformed_field"
        if not text:
            continue
        try:
            value = float(text)
        except ValueError:
            return "malformed_field"
        if not math.isfinite(value):
            return "malformed_field"
        if convert:
            value = _speed_to_ms(value, mapping.speed_unit)
            if value < 0.0:
                return "malformed_field"
            speed = value
        else:
            bearing = value % 360.0

    return TrajectoryPoint(object_id, t, lat, lon, speed, bearing)


def write_dataset_csv(trajectories: Iterable[Trajectory], path: str | Path, delimiter: str = ",") -> None:
    """Write trajectories as a CSV readable back through STANDARD_MAPPING.

    Floats are written with repr() so a write/parse round trip is exact and
    repeated writes of the same data are byte-identical.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        writer.writerow(["object_id", "t", "lat", "lon", "speed", "bearing"])
        for trajectory in trajectories:
            for p in trajectory:
                writer.writerow([
                    p.object_id,
                    repr(p.t),
                    repr(p.lat),
                    repr(p.lon),
                    "" if p.recorded_speed is None else repr(p.recorded_speed),
                    "" if p.recorded_bearing is None else repr(p.recorded_bearing),
                ])

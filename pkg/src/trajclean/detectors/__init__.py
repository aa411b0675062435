"""Outlier detectors behind one uniform interface.

Every detector maps (Trajectory, config) -> DetectionResult; the harness can
therefore treat all of them identically.  Detectors are pure per-trajectory
functions: any parallel schedule over (detector, trajectory) pairs yields
identical flags, only the elapsed timings vary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from trajclean.core import ConfigError, LabelSet, SpeedBounds, Trajectory, TrajectoryPoint
from trajclean.detectors.bounded import SpeedBoundedConfig, detect_speed_bounded
from trajclean.detectors.hampel import HampelConfig, detect_hampel, hampel_filter
from trajclean.detectors.heuristic import SpeedHeuristicConfig, detect_speed_heuristic
from trajclean.detectors.kalman import KalmanConfig, detect_kalman
from trajclean.detectors.lof import DegenerateNeighborhoodWarning, LofConfig, detect_lof, lof_scores

DetectorConfig = Union[SpeedHeuristicConfig, HampelConfig, KalmanConfig, LofConfig, SpeedBoundedConfig]


@dataclass(frozen=True)
class DetectionResult:
    """Flags plus, where the method defines them, replacement values.

    ``replacements`` maps flagged indices to the method's correction: the
    window median of the filtered channel for Hampel (a float in channel
    units), the predicted position as a TrajectoryPoint for the Kalman
    filter.  Detectors without replacement semantics report None.
    """

    flags: LabelSet
    replacements: dict[int, float] | dict[int, TrajectoryPoint] | None
    elapsed: float

    def __post_init__(self) -> None:
        if self.elapsed < 0.0:
            raise ValueError(f"elapsed must be >= 0, got {self.elapsed}")
        if self.replacements:
            extra = set(self.replacements) - self.flags.to_set()
            if extra:
                raise ValueError(f"replacement keys {sorted(extra)} are not flagged")


def detect(trajectory: Trajectory, config: DetectorConfig) -> DetectionResult:
    """Run the detector selected by the config type."""
    if isinstance(config, SpeedHeuristicConfig):
        return detect_speed_heuristic(trajectory, config)
    if isinstance(config, HampelConfig):
        return detect_hampel(trajectory, config)
    if isinstance(config, KalmanConfig):
        return detect_kalman(trajectory, config)
    if isinstance(config, LofConfig):
        return detect_lof(trajectory, config)
    if isinstance(config, SpeedBoundedConfig):
        return detect_speed_bounded(trajectory, config)
    raise ConfigError(f"unknown detector config type {type(config).__name__}")


def _get(options: Mapping[str, str], key: str, convert, default=None):
    if key not in options:
        if default is not None:
            return default
        raise ConfigError(f"detector option {key!r} is required")
    try:
        return convert(options[key])
    except ValueError as exc:
        raise ConfigError(f"detector option {key!r}: {exc}") from exc


def config_from_options(options: Mapping[str, str]) -> DetectorConfig:
    """Build a detector config from flat string options (CLI config sections).

    The ``type`` key selects the detector: speed_heuristic, hampel, kalman,
    lof or speed_bounded; remaining keys are that detector's parameters.
    """
    opts = dict(options)
    kind = opts.pop("type", None)
    if kind is None:
        raise ConfigError("detector section is missing the 'type' key")

    if kind == "speed_heuristic":
        known = {"v_min", "v_max"}
        _reject_unknown(opts, known, kind)
        return SpeedHeuristicConfig(
            v_max=_get(opts, "v_max", float),
            v_min=_get(opts, "v_min", float, 0.0),
        )
    if kind == "hampel":
        _reject_unknown(opts, {"window_half", "n_sigmas", "channel"}, kind)
        return HampelConfig(
            window_half=_get(opts, "window_half", int),
            n_sigmas=_get(opts, "n_sigmas", float),
            channel=_get(opts, "channel", str),
        )
    if kind == "kalman":
        _reject_unknown(opts, {"process_noise_sigma", "measurement_noise_sigma", "gate"}, kind)
        return KalmanConfig(
            process_noise_sigma=_get(opts, "process_noise_sigma", float),
            measurement_noise_sigma=_get(opts, "measurement_noise_sigma", float),
            gate=_get(opts, "gate", float),
        )
    if kind == "lof":
        _reject_unknown(opts, {"k", "threshold"}, kind)
        return LofConfig(k=_get(opts, "k", int), threshold=_get(opts, "threshold", float))
    if kind == "speed_bounded":
        _reject_unknown(opts, {"v_min", "v_max", "variant", "min_component", "max_candidates"}, kind)
        variant = _get(opts, "variant", str)
        return SpeedBoundedConfig(
            bounds=SpeedBounds(_get(opts, "v_min", float, 0.0), _get(opts, "v_max", float)),
            variant=variant,
            min_component=_get(opts, "min_component", int) if "min_component" in opts else None,
            max_candidates=_get(opts, "max_candidates", int, 64),
        )
    raise ConfigError(f"unknown detector type {kind!r}")


def _reject_unknown(options: Mapping[str, str], known: set[str], kind: str) -> None:
    unknown = set(options) - known
    if unknown:
        raise ConfigError(f"unknown option(s) {sorted(unknown)} for detector type {kind!r}")


__all__ = [
    "DetectionResult",
    "DetectorConfig",
    "SpeedHeuristicConfig",
    "HampelConfig",
    "KalmanConfig",
    "LofConfig",
    "SpeedBoundedConfig",
    "DegenerateNeighborhoodWarning",
    "detect",
    "detect_speed_heuristic",
    "detect_hampel",
    "detect_kalman",
    "detect_lof",
    "detect_speed_bounded",
    "hampel_filter",
    "lof_scores",
    "config_from_options",
]

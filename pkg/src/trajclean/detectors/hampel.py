"""Hampel identifier: windowed median/MAD outlier rule with median replacement.

For each index the window median m and the MAD-based scale estimate
sigma_hat = 1.4826 * median(|window - m|) are computed; a sample deviating
from m by more than n_sigmas * sigma_hat is flagged and its replacement value
is m.  The 1.4826 factor makes the MAD consistent with a Gaussian standard
deviation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from trajclean.core import ConfigError, LabelSet, Trajectory, haversine_latlon

MAD_SCALE = 1.4826

CHANNELS = ("speed", "position")


@dataclass(frozen=True)
class HampelConfig:
    """Window half-width (window covers [i-k, i+k]), threshold multiplier, channel.

    channel="speed" filters the segment-speed signal; channel="position"
    filters each point's distance to the trajectory centroid.
    """

    window_half: int
    n_sigmas: float
    channel: str

    def __post_init__(self) -> None:
        if self.window_half < 1:
            raise ConfigError(f"window_half must be >= 1, got {self.window_half}")
        if self.n_sigmas <= 0.0:
            raise ConfigError(f"n_sigmas must be > 0, got {self.n_sigmas}")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel must be one of {CHANNELS}, got {self.channel!r}")


def hampel_filter(signal: np.ndarray, window_half: int, n_sigmas: float) -> tuple[list[int], dict[int, float]]:
    """Run the identifier over a 1-D signal.

    Windows are [i-k, i+k] clipped to the signal bounds.  Returns the flagged
    indices and, for each, the window median that replaces the sample.
    """
    x = np.asarray(signal, dtype=float)
    n = len(x)
    k = window_half
    if n == 0:
        return [], {}

    medians = np.empty(n)
    mads = np.empty(n)
    width = 2 * k + 1
    if n >= width:
        windows = sliding_window_view(x, width)
        med_full = np.median(windows, axis=1)
        mad_full = np.median(np.abs(windows - med_full[:, None]), axis=1)
        medians[k:n - k] = med_full
        mads[k:n - k] = mad_full
        edges = list(range(k)) + list(range(n - k, n))
    else:
        edges = list(range(n))
    for i in edges:
        window = x[max(0, i - k):min(n, i + k + 1)]
        m = np.median(window)
        medians[i] = m
        mads[i] = np.median(np.abs(window - m))

    flagged = np.abs(x - medians) > n_sigmas * MAD_SCALE * mads
    indices = np.flatnonzero(flagged).tolist()
    return indices, {i: float(medians[i]) for i in indices}


def _channel_signal(trajectory: Trajectory, channel: str) -> np.ndarray:
    arr = trajectory.arrays()
    if channel == "position":
        clat, clon = trajectory.centroid()
        return haversine_latlon(arr.lat, arr.lon, clat, clon)
    # Speed channel: index i carries the speed of the segment arriving at
    # point i; index 0 duplicates the first segment so the signal has one
    # value per point.
    dist = haversine_latlon(arr.lat[:-1], arr.lon[:-1], arr.lat[1:], arr.lon[1:])
    speeds = dist / np.diff(arr.t)
    return np.concatenate(([speeds[0]], speeds))


def detect_hampel(trajectory: Trajectory, cfg: HampelConfig):
    from trajclean.detectors import DetectionResult

    started = time.perf_counter()
    if len(trajectory) < 3:
        return DetectionResult(LabelSet(), replacements={}, elapsed=time.perf_counter() - started)
    signal = _channel_signal(trajectory, cfg.channel)
    indices, replacements = hampel_filter(signal, cfg.window_half, cfg.n_sigmas)
    return DetectionResult(
        flags=LabelSet.of(indices),
        replacements=replacements,
        elapsed=time.perf_counter() - started,
    )

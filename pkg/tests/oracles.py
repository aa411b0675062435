"""Independent reference implementations used as test oracles.

Everything here is deliberately written the slow, obvious way (plain loops,
math-module scalars, exhaustive enumeration) and shares no code with the
library paths it checks.
"""

from __future__ import annotations

from itertools import combinations
from math import acos, asin, atan2, cos, degrees, radians, sin, sqrt

import numpy as np

RADIUS = 6_371_000.0


def sloc_distance(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance via the spherical law of cosines (second closed form)."""
    p1, p2 = radians(lat1), radians(lat2)
    dl = radians(lon2 - lon1)
    inner = sin(p1) * sin(p2) + cos(p1) * cos(p2) * cos(dl)
    return RADIUS * acos(min(1.0, max(-1.0, inner)))


def hav_distance(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    p1, p2 = radians(lat1), radians(lat2)
    dl = radians(lon2 - lon1)
    h = sin((p2 - p1) / 2.0) ** 2 + cos(p1) * cos(p2) * sin(dl / 2.0) ** 2
    return 2.0 * RADIUS * asin(sqrt(min(1.0, h)))


def hav_bearing(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    p1, p2 = radians(lat1), radians(lat2)
    dl = radians(lon2 - lon1)
    y = sin(dl) * cos(p2)
    x = cos(p1) * sin(p2) - sin(p1) * cos(p2) * cos(dl)
    return degrees(atan2(y, x)) % 360.0


def wrap_diff(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def chain_flags(t, lat, lon, v_min: float, v_max: float) -> list[int]:
    """Step-through oracle for the sequential speed heuristic."""
    flags = []
    last = 0
    for i in range(1, len(t)):
        v = hav_distance(lat[last], lon[last], lat[i], lon[i]) / (t[i] - t[last])
        if v_min <= v <= v_max:
            last = i
        else:
            flags.append(i)
    return flags


def groundtruth_flags(trajectory, ts: float, th: float) -> set[int]:
    """Per-pair recheck of the sensor cross-check rule, one pair at a time."""
    flagged = set()
    pts = list(trajectory)
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        speed = hav_distance(a.lat, a.lon, b.lat, b.lon) / (b.t - a.t)
        bearing = hav_bearing(a.lat, a.lon, b.lat, b.lon)
        hit = False
        if a.recorded_speed is not None and abs(speed - a.recorded_speed) >= ts:
            hit = True
        if a.recorded_bearing is not None and wrap_diff(bearing, a.recorded_bearing) >= th:
            hit = True
        if hit:
            flagged.add(i)
    return flagged


def hampel_reference(signal, window_half: int, n_sigmas: float):
    """Plain-loop Hampel identifier; returns (flags, replacements)."""
    x = [float(v) for v in signal]
    n = len(x)
    flags, repl = [], {}
    for i in range(n):
        window = sorted(x[max(0, i - window_half):min(n, i + window_half + 1)])
        m = _median(window)
        mad = _median(sorted(abs(v - m) for v in window))
        if abs(x[i] - m) > n_sigmas * 1.4826 * mad:
            flags.append(i)
            repl[i] = m
    return flags, repl


def _median(sorted_values) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return float(sorted_values[mid])
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2.0


def brute_lof(points_xy, k: int) -> list[float]:
    """Direct-definition LOF: k-distance neighborhoods with ties, loops only."""
    pts = [tuple(map(float, p)) for p in points_xy]
    n = len(pts)

    def dist(i, j):
        return sqrt(sum((pts[i][d] - pts[j][d]) ** 2 for d in range(len(pts[i]))))

    k_dist = []
    neighbors = []
    for i in range(n):
        ds = sorted(dist(i, j) for j in range(n) if j != i)
        kd = ds[k - 1]
        k_dist.append(kd)
        neighbors.append([j for j in range(n) if j != i and dist(i, j) <= kd])

    lrd = []
    for i in range(n):
        reach = [max(k_dist[j], dist(i, j)) for j in neighbors[i]]
        mean_reach = sum(reach) / len(reach)
        lrd.append(float("inf") if mean_reach == 0.0 else 1.0 / mean_reach)

    scores = []
    for i in range(n):
        mean_lrd = sum(lrd[j] for j in neighbors[i]) / len(neighbors[i])
        if lrd[i] == float("inf"):
            scores.append(1.0 if mean_lrd == float("inf") else mean_lrd / lrd[i])
        else:
            scores.append(mean_lrd / lrd[i])
    return scores


def exhaustive_speed_bounded(t, lat, lon, v_min: float, v_max: float) -> tuple[int, ...]:
    """Longest consistent subsequence by enumerating every index combination.

    Scans lengths from n down and, within a length, combinations in
    lexicographic order; the first consistent hit is therefore the
    lexicographically-smallest maximum, matching the documented tie-break.
    """
    n = len(t)

    def consistent(i, j):
        v = hav_distance(lat[i], lon[i], lat[j], lon[j]) / (t[j] - t[i])
        return v_min <= v <= v_max

    for length in range(n, 0, -1):
        for combo in combinations(range(n), length):
            if all(consistent(combo[i], combo[i + 1]) for i in range(length - 1)):
                return combo
    return ()


def kalman_transcript(x, y, t, sigma_a: float, sigma_m: float, gate: float):
    """Standalone constant-velocity filter transcript.

    Returns the list of (index, squared Mahalanobis innovation, flagged)
    entries for points 2..n-1, written as direct matrix arithmetic with no
    shared code.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    t = np.asarray(t, float)
    r = sigma_m ** 2

    dt0 = t[1] - t[0]
    state = np.array([x[1], y[1], (x[1] - x[0]) / dt0, (y[1] - y[0]) / dt0])
    cov = np.diag([r, r, 2 * r / dt0 ** 2, 2 * r / dt0 ** 2])
    t_state = t[1]

    out = []
    for i in range(2, len(t)):
        dt = t[i] - t_state
        f = np.array([[1, 0, dt, 0], [0, 1, 0, dt], [0, 0, 1, 0], [0, 0, 0, 1]], float)
        q_pos = dt ** 4 / 4.0
        q_cross = dt ** 3 / 2.0
        q_vel = dt ** 2
        q = sigma_a ** 2 * np.array(
            [
                [q_pos, 0, q_cross, 0],
                [0, q_pos, 0, q_cross],
                [q_cross, 0, q_vel, 0],
                [0, q_cross, 0, q_vel],
            ]
        )
        state = f @ state
        cov = f @ cov @ f.T + q
        t_state = t[i]

        nu = np.array([x[i] - state[0], y[i] - state[1]])
        s = cov[:2, :2] + r * np.eye(2)
        d2 = float(nu @ np.linalg.inv(s) @ nu)
        flagged = d2 > gate ** 2
        out.append((i, d2, flagged))
        if not flagged:
            h = np.array([[1, 0, 0, 0], [0, 1, 0, 0]], float)
            gain = cov @ h.T @ np.linalg.inv(s)
            state = state + gain @ nu
            cov = (np.eye(4) - gain @ h) @ cov
    return out


def confusion_recount(pred, truth, n: int) -> tuple[int, int, int, int]:
    """Set-algebra-free recount of confusion cells by scanning every index."""
    tp = fp = fn = tn = 0
    pred = list(pred)
    truth = list(truth)
    for i in range(n):
        in_pred = i in pred
        in_truth = i in truth
        if in_pred and in_truth:
            tp += 1
        elif in_pred:
            fp += 1
        elif in_truth:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn

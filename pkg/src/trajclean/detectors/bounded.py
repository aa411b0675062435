"""Speed-bounded consistent-subsequence cleaning in four variants.

Two points are *consistent* when the speed implied by traveling between them
lies inside [v_min, v_max].  Each variant keeps a subsequence of the
trajectory and flags the complement:

- greedy: single pass keeping each point consistent with the last kept point.
- smart_greedy: tracks multiple candidate subsequences; a point extends every
  candidate whose tail it is consistent with (longest candidates first), or
  starts a new candidate; the longest candidate wins.  The candidate set is
  capped (evict shortest, oldest first); the plain greedy chain is pinned and
  never evicted, so smart_greedy can never do worse than greedy.
- local_greedy: connects timestamp-successive consistent points and keeps a
  point iff its connected component reaches min_component vertices.  The kept
  output is not necessarily consistent across removal gaps.
- optimal: the longest subsequence whose consecutive kept pairs are all
  consistent, via dynamic programming over the consistency DAG; ties resolve
  to the lexicographically smallest index sequence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import asin, cos, sin, sqrt

import numpy as np

from trajclean.core import EARTH_RADIUS_M, ConfigError, LabelSet, SpeedBounds, Trajectory

VARIANTS = ("greedy", "smart_greedy", "local_greedy", "optimal")


@dataclass(frozen=True)
class SpeedBoundedConfig:
    bounds: SpeedBounds
    variant: str
    min_component: int | None = None  # local_greedy only
    max_candidates: int = 64          # smart_greedy candidate cap

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.variant == "local_greedy":
            if self.min_component is None or self.min_component < 1:
                raise ConfigError("local_greedy requires min_component >= 1")
        if self.max_candidates < 1:
            raise ConfigError(f"max_candidates must be >= 1, got {self.max_candidates}")


class _PairSpeeds:
    """Pairwise implied speeds over one trajectory, scalar or row-at-a-time."""

    def __init__(self, t: np.ndarray, lat: np.ndarray, lon: np.ndarray):
        self.t = t
        self.phi = np.radians(lat)
        self.lam = np.radians(lon)
        self.cphi = np.cos(self.phi)
        self._t_list = t.tolist()
        self._phi_list = self.phi.tolist()
        self._lam_list = self.lam.tolist()
        self._cphi_list = self.cphi.tolist()

    def speed(self, i: int, j: int) -> float:
        """Implied speed from point i to point j (requires i < j)."""
        half = (
            sin((self._phi_list[j] - self._phi_list[i]) / 2.0) ** 2
            + self._cphi_list[i]
            * self._cphi_list[j]
            * sin((self._lam_list[j] - self._lam_list[i]) / 2.0) ** 2
        )
        dist = 2.0 * EARTH_RADIUS_M * asin(sqrt(min(half, 1.0)))
        return dist / (self._t_list[j] - self._t_list[i])

    def row_from(self, i: int) -> np.ndarray:
        """Speeds from point i to every later point, vectorized."""
        sl = slice(i + 1, None)
        half = (
            np.sin((self.phi[sl] - self.phi[i]) / 2.0) ** 2
            + self.cphi[i] * self.cphi[sl] * np.sin((self.lam[sl] - self.lam[i]) / 2.0) ** 2
        )
        dist = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(half, 0.0, 1.0)))
        return dist / (self.t[sl] - self.t[i])


def _keep_greedy(pairs: _PairSpeeds, n: int, v_min: float, v_max: float) -> list[int]:
    kept = [0]
    for i in range(1, n):
        if v_min <= pairs.speed(kept[-1], i) <= v_max:
            kept.append(i)
    return kept


def _keep_smart_greedy(
    pairs: _PairSpeeds, n: int, v_min: float, v_max: float, max_candidates: int
) -> list[int]:
    # candidates: (indices, creation order); index 0 is the greedy chain.
    candidates: list[tuple[list[int], int]] = [([0], 0)]
    created = 1
    for i in range(1, n):
        order = sorted(range(len(candidates)), key=lambda c: (-len(candidates[c][0]), candidates[c][1]))
        extended = False
        for ci in order:
            chain = candidates[ci][0]
            if v_min <= pairs.speed(chain[-1], i) <= v_max:
                chain.append(i)
                extended = True
        if not extended:
            candidates.append(([i], created))
            created += 1
            if len(candidates) > max_candidates:
                evict = min(range(1, len(candidates)), key=lambda c: (len(candidates[c][0]), candidates[c][1]))
                del candidates[evict]
    best = max(candidates, key=lambda cand: (len(cand[0]), -cand[1]))
    return best[0]


def _keep_local_greedy(pairs: _PairSpeeds, n: int, v_min: float, v_max: float, min_component: int) -> list[int]:
    # Edges exist only between timestamp-successive points, so connected
    # components are maximal runs of consistent consecutive pairs.
    if n == 1:
        return [0] if min_component <= 1 else []
    consecutive = np.array([pairs.speed(j, j + 1) for j in range(n - 1)])
    edge_ok = (consecutive >= v_min) & (consecutive <= v_max)
    kept: list[int] = []
    start = 0
    for j in range(n - 1):
        if not edge_ok[j]:
            if j + 1 - start >= min_component:
                kept.extend(range(start, j + 1))
            start = j + 1
    if n - start >= min_component:
        kept.extend(range(start, n))
    return kept


def _keep_optimal(pairs: _PairSpeeds, n: int, v_min: float, v_max: float) -> list[int]:
    # chain_from[i]: length of the longest consistent chain starting at i.
    chain_from = np.ones(n, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        speeds = pairs.row_from(i)
        ok = (speeds >= v_min) & (speeds <= v_max)
        if ok.any():
            chain_from[i] = 1 + chain_from[i + 1:][ok].max()

    # Front-to-back reconstruction: at each slot take the smallest index that
    # can still complete a maximum-length chain.  This realizes the
    # lexicographically-smallest tie-break.
    remaining = int(chain_from.max())
    kept: list[int] = []
    first_candidates = np.flatnonzero(chain_from == remaining)
    current = int(first_candidates[0])
    kept.append(current)
    remaining -= 1
    while remaining > 0:
        speeds = pairs.row_from(current)
        ok = (speeds >= v_min) & (speeds <= v_max) & (chain_from[current + 1:] == remaining)
        current = current + 1 + int(np.flatnonzero(ok)[0])
        kept.append(current)
        remaining -= 1
    return kept


def detect_speed_bounded(trajectory: Trajectory, cfg: SpeedBoundedConfig):
    from trajclean.detectors import DetectionResult

    started = time.perf_counter()
    n = len(trajectory)
    if n < 2:
        return DetectionResult(LabelSet(), replacements=None, elapsed=time.perf_counter() - started)

    arr = trajectory.arrays()
    pairs = _PairSpeeds(arr.t, arr.lat, arr.lon)
    v_min, v_max = cfg.bounds.v_min, cfg.bounds.v_max
    if cfg.variant == "greedy":
        kept = _keep_greedy(pairs, n, v_min, v_max)
    elif cfg.variant == "smart_greedy":
        kept = _keep_smart_greedy(pairs, n, v_min, v_max, cfg.max_candidates)
    elif cfg.variant == "local_greedy":
        kept = _keep_local_greedy(pairs, n, v_min, v_max, cfg.min_component)
    else:
        kept = _keep_optimal(pairs, n, v_min, v_max)

    flags = sorted(set(range(n)) - set(kept))
    return DetectionResult(
        flags=LabelSet.of(flags),
        replacements=None,
        elapsed=time.perf_counter() - started,
    )

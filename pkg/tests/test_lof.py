import numpy as np
import pytest

from trajclean.core import ConfigError, Trajectory, from_local_xy
from trajclean.detectors import DegenerateNeighborhoodWarning, LofConfig, detect_lof, lof_scores

from oracles import brute_lof


def planar_trajectory(xy, object_id="v"):
    xy = np.asarray(xy, float)
    lat, lon = from_local_xy(xy[:, 0], xy[:, 1], 10.0, 10.0)
    return Trajectory.from_arrays(object_id, np.arange(len(xy), dtype=float), lat, lon)


class TestScores:
    def test_far_point_dominates(self):
        # Tight 2x5 unit grid (diameter ~4.1) plus a point ~100 diameters out.
        xs, ys = np.meshgrid(np.arange(5.0), np.arange(2.0))
        cluster = np.column_stack([xs.ravel(), ys.ravel()])
        xy = np.vstack([cluster, [[300.0, 300.0]]])
        scores = lof_scores(xy, k=3)
        assert np.argmax(scores) == 10
        assert scores[10] > 1.5
        assert all(scores[i] <= 1.5 for i in range(10))

    def test_uniform_grid_scores_near_one(self):
        xs, ys = np.meshgrid(np.arange(5.0), np.arange(5.0))
        xy = np.column_stack([xs.ravel(), ys.ravel()])
        scores = lof_scores(xy, k=3)
        assert np.all(scores >= 0.9) and np.all(scores <= 1.1)

    @pytest.mark.parametrize("k", [3, 5])
    def test_matches_brute_force(self, k):
        rng = np.random.default_rng(14)
        for _ in range(20)[:20]:
            n = int(rng.integers(k + 1, 40))
            xy = rng.uniform(-50.0, 50.0, size=(n, 2))
            ours = lof_scores(xy, k)
            reference = brute_lof(xy, k)
            np.testing.assert_allclose(ours, reference, rtol=1e-9)

    def test_ties_follow_canonical_neighborhoods(self):
        # Interior grid points have four equidistant nearest neighbors: the
        # k-distance neighborhood must include all of them, not just k.
        xs, ys = np.meshgrid(np.arange(4.0), np.arange(4.0))
        xy = np.column_stack([xs.ravel(), ys.ravel()])
        np.testing.assert_allclose(lof_scores(xy, 3), brute_lof(xy, 3), rtol=1e-9)

    def test_duplicate_points_score_one(self):
        # The duplicate pile is maximally dense (score 1.0 by convention);
        # a lone point whose whole neighborhood is the pile has a genuinely
        # infinite density ratio.
        xy = np.array([[0.0, 0.0]] * 4 + [[10.0, 0.0]])
        scores = lof_scores(xy, k=3)
        np.testing.assert_allclose(scores[:4], 1.0)
        assert np.isposinf(scores[4])
        np.testing.assert_allclose(scores, brute_lof(xy, 3))

    def test_too_few_points_raises(self):
        with pytest.raises(ValueError):
            lof_scores(np.zeros((3, 2)), k=3)


class TestDetector:
    def test_only_far_point_flagged(self):
        xs, ys = np.meshgrid(np.arange(5.0), np.arange(2.0))
        cluster = np.column_stack([xs.ravel(), ys.ravel()])
        xy = np.vstack([cluster, [[300.0, -120.0]]])
        result = detect_lof(planar_trajectory(xy), LofConfig(k=3, threshold=1.5))
        assert result.flags.to_set() == {10}

    def test_degenerate_neighborhood_warns_and_flags_nothing(self):
        xy = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        with pytest.warns(DegenerateNeighborhoodWarning):
            result = detect_lof(planar_trajectory(xy), LofConfig(k=3, threshold=1.5))
        assert len(result.flags) == 0

    def test_uniform_grid_unflagged(self):
        xs, ys = np.meshgrid(np.arange(5.0) * 10.0, np.arange(5.0) * 10.0)
        xy = np.column_stack([xs.ravel(), ys.ravel()])
        result = detect_lof(planar_trajectory(xy), LofConfig(k=3, threshold=1.5))
        assert len(result.flags) == 0

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        xy = rng.uniform(0.0, 100.0, size=(30, 2))
        trajectory = planar_trajectory(xy)
        cfg = LofConfig(k=4, threshold=1.3)
        assert detect_lof(trajectory, cfg).flags == detect_lof(trajectory, cfg).flags


class TestConfig:
    @pytest.mark.parametrize("kwargs", [dict(k=0, threshold=1.5), dict(k=3, threshold=1.0), dict(k=3, threshold=0.5)])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            LofConfig(**kwargs)

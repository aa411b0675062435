import numpy as np
import pytest

from trajclean.core import ConfigError, LabelSet, SpeedBounds, Trajectory, from_local_xy
from trajclean.detectors import (
    DetectionResult,
    HampelConfig,
    KalmanConfig,
    LofConfig,
    SpeedBoundedConfig,
    SpeedHeuristicConfig,
    config_from_options,
    detect,
    detect_speed_heuristic,
)
from trajclean.synth import SynthSpec, generate_trajectory

from oracles import chain_flags


def line_trajectory(xs, ts, object_id="v"):
    lats, lons = from_local_xy(np.asarray(xs, float), np.zeros(len(xs)), 0.0, 0.0)
    return Trajectory.from_arrays(object_id, ts, lats, lons)


class TestSpeedHeuristic:
    def test_fast_interior_point_flagged(self):
        # 1000 m in 1 s with v_max 50
        traj = line_trajectory([0, 10, 1010, 1030], [0, 1, 2, 3])
        result = detect_speed_heuristic(traj, SpeedHeuristicConfig(v_max=50.0))
        assert 2 in result.flags

    def test_all_within_bounds_unflagged(self):
        traj = line_trajectory(np.arange(20) * 10.0, np.arange(20))
        result = detect_speed_heuristic(traj, SpeedHeuristicConfig(v_max=50.0))
        assert len(result.flags) == 0

    def test_three_consecutive_displaced_all_flagged(self):
        xs = np.arange(12) * 10.0
        xs[5:8] += 5000.0
        traj = line_trajectory(xs, np.arange(12))
        cfg = SpeedHeuristicConfig(v_max=100.0)
        result = detect_speed_heuristic(traj, cfg)
        assert {5, 6, 7} <= result.flags.to_set()
        arr = traj.arrays()
        assert result.flags.to_set() == set(chain_flags(arr.t, arr.lat, arr.lon, cfg.v_min, cfg.v_max))

    def test_flagged_points_never_become_reference(self):
        # After the spike at 2, point 3 is compared against point 1 and kept.
        traj = line_trajectory([0, 10, 5000, 30], [0, 1, 2, 3])
        result = detect_speed_heuristic(traj, SpeedHeuristicConfig(v_max=100.0))
        assert result.flags.to_set() == {2}

    def test_v_min_flags_stalls(self):
        traj = line_trajectory([0, 10, 10.5, 30], [0, 1, 2, 3])
        result = detect_speed_heuristic(traj, SpeedHeuristicConfig(v_min=2.0, v_max=100.0))
        assert 2 in result.flags

    def test_short_trajectory_empty(self):
        traj = line_trajectory([0], [0])
        assert len(detect_speed_heuristic(traj, SpeedHeuristicConfig(v_max=10.0)).flags) == 0

    def test_matches_step_through_oracle_on_random_inputs(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            n = int(rng.integers(2, 60))
            xs = np.cumsum(rng.uniform(0.0, 30.0, n))
            spikes = rng.random(n) < 0.15
            xs[spikes] += rng.uniform(200.0, 5000.0, spikes.sum())
            traj = line_trajectory(xs, np.arange(n, dtype=float))
            cfg = SpeedHeuristicConfig(v_min=1.0, v_max=25.0)
            arr = traj.arrays()
            expected = set(chain_flags(arr.t, arr.lat, arr.lon, cfg.v_min, cfg.v_max))
            assert detect_speed_heuristic(traj, cfg).flags.to_set() == expected

    @pytest.mark.parametrize("vmin,vmax", [(-1.0, 10.0), (5.0, 5.0), (9.0, 5.0)])
    def test_invalid_config(self, vmin, vmax):
        with pytest.raises(ConfigError):
            SpeedHeuristicConfig(v_max=vmax, v_min=vmin)


class TestUniformInterface:
    @pytest.fixture()
    def trajectory(self):
        trajectory, _ = generate_trajectory(
            SynthSpec(n_points=60, outlier_rate=0.05, outlier_displacement=1000.0, seed=12)
        )
        return trajectory

    @pytest.mark.parametrize(
        "config",
        [
            SpeedHeuristicConfig(v_max=100.0),
            HampelConfig(window_half=3, n_sigmas=3.0, channel="speed"),
            HampelConfig(window_half=3, n_sigmas=3.0, channel="position"),
            KalmanConfig(process_noise_sigma=0.5, measurement_noise_sigma=2.0, gate=5.0),
            LofConfig(k=4, threshold=1.5),
            SpeedBoundedConfig(bounds=SpeedBounds(0.0, 100.0), variant="greedy"),
            SpeedBoundedConfig(bounds=SpeedBounds(0.0, 100.0), variant="smart_greedy"),
            SpeedBoundedConfig(bounds=SpeedBounds(0.0, 100.0), variant="local_greedy", min_component=2),
            SpeedBoundedConfig(bounds=SpeedBounds(0.0, 100.0), variant="optimal"),
        ],
    )
    def test_dispatch_and_contract(self, trajectory, config):
        result = detect(trajectory, config)
        assert isinstance(result, DetectionResult)
        assert result.elapsed >= 0.0
        n = len(trajectory)
        assert all(0 <= i < n for i in result.flags)
        if result.replacements:
            assert set(result.replacements) <= result.flags.to_set()
        # determinism: flags identical on a second run
        assert detect(trajectory, config).flags == result.flags

    def test_unknown_config_rejected(self, trajectory):
        with pytest.raises(ConfigError):
            detect(trajectory, object())

    def test_empty_and_single_point_never_flag(self):
        import warnings

        configs = [
            SpeedHeuristicConfig(v_max=10.0),
            HampelConfig(window_half=2, n_sigmas=3.0, channel="speed"),
            KalmanConfig(process_noise_sigma=0.5, measurement_noise_sigma=1.0, gate=3.0),
            LofConfig(k=3, threshold=1.5),
            SpeedBoundedConfig(bounds=SpeedBounds(0.0, 10.0), variant="optimal"),
            SpeedBoundedConfig(bounds=SpeedBounds(0.0, 10.0), variant="local_greedy", min_component=2),
        ]
        empty = Trajectory("v", ())
        single = line_trajectory([0.0], [0.0])
        for config in configs:
            for trajectory in (empty, single):
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")  # LOF degenerate-neighborhood warning
                    assert len(detect(trajectory, config).flags) == 0

    def test_replacement_keys_must_be_flagged(self):
        with pytest.raises(ValueError):
            DetectionResult(flags=LabelSet.of([1]), replacements={2: 5.0}, elapsed=0.0)


class TestConfigFromOptions:
    def test_each_type(self):
        assert config_from_options({"type": "speed_heuristic", "v_max": "50"}) == SpeedHeuristicConfig(v_max=50.0)
        assert config_from_options(
            {"type": "hampel", "window_half": "5", "n_sigmas": "3", "channel": "position"}
        ) == HampelConfig(window_half=5, n_sigmas=3.0, channel="position")
        assert config_from_options(
            {"type": "kalman", "process_noise_sigma": "0.5", "measurement_noise_sigma": "1", "gate": "3"}
        ) == KalmanConfig(process_noise_sigma=0.5, measurement_noise_sigma=1.0, gate=3.0)
        assert config_from_options({"type": "lof", "k": "3", "threshold": "1.5"}) == LofConfig(k=3, threshold=1.5)
        assert config_from_options(
            {"type": "speed_bounded", "v_max": "80", "variant": "local_greedy", "min_component": "2"}
        ) == SpeedBoundedConfig(bounds=SpeedBounds(0.0, 80.0), variant="local_greedy", min_component=2)

    @pytest.mark.parametrize(
        "options",
        [
            {},
            {"type": "nope"},
            {"type": "speed_heuristic"},
            {"type": "speed_heuristic", "v_max": "ten"},
            {"type": "lof", "k": "3", "threshold": "1.5", "extra": "1"},
            {"type": "speed_bounded", "v_max": "80", "variant": "local_greedy"},
        ],
    )
    def test_bad_options(self, options):
        with pytest.raises(ConfigError):
            config_from_options(options)

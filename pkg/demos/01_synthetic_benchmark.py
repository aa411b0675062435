"""
Synthetic benchmark in a dozen lines
====================================

Generate a labeled synthetic dataset, run a handful of detectors over it,
and print the precision/recall/F-beta table.  Everything is seeded, so the
numbers below reproduce exactly.
"""

from trajclean import (
    HampelConfig,
    KalmanConfig,
    LabeledDataset,
    LofConfig,
    SpeedBoundedConfig,
    SpeedBounds,
    SpeedHeuristicConfig,
    SynthSpec,
    evaluate_run,
    generate_dataset,
)

# 20 trajectories x 500 points at 10 m/s; 5% of interior points are thrown
# 1 km off the path in a random direction.  The generator returns the truth.
spec = SynthSpec(
    n_points=500,
    base_speed=10.0,
    base_bearing=60.0,
    sample_interval=1.0,
    position_noise_sigma=1.0,
    outlier_rate=0.05,
    outlier_displacement=1000.0,
    seed=42,
)
trajectories, truth = generate_dataset(spec, 20)
dataset = LabeledDataset(name="demo", trajectories=trajectories, truth=truth)

detectors = [
    ("speed_heuristic", SpeedHeuristicConfig(v_max=100.0)),
    ("hampel_position", HampelConfig(window_half=5, n_sigmas=3.0, channel="position")),
    ("kalman_gate3", KalmanConfig(process_noise_sigma=0.5, measurement_noise_sigma=2.0, gate=3.0)),
    ("lof_k4", LofConfig(k=4, threshold=1.5)),
    ("greedy_bound", SpeedBoundedConfig(bounds=SpeedBounds(0.0, 100.0), variant="greedy")),
    ("optimal_bound", SpeedBoundedConfig(bounds=SpeedBounds(0.0, 100.0), variant="optimal")),
]

report = evaluate_run(detectors, [dataset])

header = f"{'detector':<16} {'prec':>6} {'recall':>6} {'F0.5':>6} {'F1':>6} {'F2':>6} {'time':>8}"
print(header)
print("-" * len(header))
for cell in report.cells:
    print(
        f"{cell.detector:<16} {cell.precision:>6.3f} {cell.recall:>6.3f} "
        f"{cell.f_05:>6.3f} {cell.f_1:>6.3f} {cell.f_2:>6.3f} {cell.elapsed:>7.3f}s"
    )

print(
    "\nThe Kalman precision dip is real, not noise: one trajectory in this"
    "\nbatch has an injected outlier at index 1, inside the filter's two-point"
    "\ninitialization window.  The poisoned velocity estimate never recovers"
    "\n(gated points do not update the state), so the filter flags everything"
    "\ndownstream -- the classic sensitivity of Kalman filtering to corrupt"
    "\ninitial fixes."
)

"""trajclean: trajectory outlier detection, labeling and benchmarking.

The package splits into small layers: :mod:`trajclean.core` holds domain
types and spherical geometry, :mod:`trajclean.ingest` parses CSV datasets,
:mod:`trajclean.synth` generates labeled synthetic tracks,
:mod:`trajclean.groundtruth` cross-checks sensor channels into ground-truth
labels, :mod:`trajclean.detectors` contains the detectors behind one uniform
interface, and :mod:`trajclean.evaluate` scores predictions and aggregates
benchmark runs.  :mod:`trajclean.cli` wires everything into the ``trajclean``
command.
"""

__version__ = "0.1.0"

from trajclean.core import (
    EARTH_RADIUS_M,
    ConfigError,
    DegenerateBearingWarning,
    LabelSet,
    SpeedBounds,
    Trajectory,
    TrajectoryPoint,
    ZeroOrNegativeDurationError,
    circular_diff,
    haversine_distance,
    initial_bearing,
    segment_speed,
)
from trajclean.detectors import (
    DetectionResult,
    DetectorConfig,
    HampelConfig,
    KalmanConfig,
    LofConfig,
    SpeedBoundedConfig,
    SpeedHeuristicConfig,
    detect,
)
from trajclean.evaluate import (
    ConfusionMatrix,
    EvaluationReport,
    LabeledDataset,
    UndefinedMetricWarning,
    confusion,
    evaluate_run,
    fbeta,
)
from trajclean.groundtruth import GroundTruthConfig, label_outliers, label_trajectory
from trajclean.ingest import ColumnMapping, IngestReport, MappingError, parse_dataset
from trajclean.synth import SynthSpec, generate_dataset, generate_trajectory

__all__ = [
    "__version__",
    "EARTH_RADIUS_M",
    "ConfigError",
    "DegenerateBearingWarning",
    "ZeroOrNegativeDurationError",
    "TrajectoryPoint",
    "Trajectory",
    "SpeedBounds",
    "LabelSet",
    "haversine_distance",
    "initial_bearing",
    "segment_speed",
    "circular_diff",
    "ColumnMapping",
    "IngestReport",
    "MappingError",
    "parse_dataset",
    "SynthSpec",
    "generate_trajectory",
    "generate_dataset",
    "GroundTruthConfig",
    "label_trajectory",
    "label_outliers",
    "DetectorConfig",
    "DetectionResult",
    "SpeedHeuristicConfig",
    "HampelConfig",
    "KalmanConfig",
    "LofConfig",
    "SpeedBoundedConfig",
    "detect",
    "ConfusionMatrix",
    "confusion",
    "fbeta",
    "LabeledDataset",
    "EvaluationReport",
    "UndefinedMetricWarning",
    "evaluate_run",
]

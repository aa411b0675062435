"""Scoring predicted labels against ground truth and aggregating benchmark runs.

Confusion counts are pooled across every trajectory of a dataset before
scores are computed (micro-averaging), giving one precision/recall/F-beta
block per detector x dataset.  Degenerate denominators follow a warn-and-zero
convention rather than raising: datasets with very few true outliers make
empty prediction sets routine.
"""

from __future__ import annotations

import csv
import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from trajclean.core import LabelSet, Trajectory
from trajclean.detectors import DetectionResult, DetectorConfig, detect


class UndefinedMetricWarning(UserWarning):
    """A metric denominator was zero; the metric was defined as 0.0."""


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn", "tn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )


EMPTY_CONFUSION = ConfusionMatrix(0, 0, 0, 0)


def confusion(pred: LabelSet, truth: LabelSet, n_points: int) -> ConfusionMatrix:
    """Confusion counts for one trajectory of n_points points."""
    pred_set = pred.to_set()
    truth_set = truth.to_set()
    for name, indices in (("pred", pred_set), ("truth", truth_set)):
        if indices and max(indices) >= n_points:
            raise IndexError(f"{name} index {max(indices)} out of range for {n_points} points")
    tp = len(pred_set & truth_set)
    fp = len(pred_set - truth_set)
    fn = len(truth_set - pred_set)
    return ConfusionMatrix(tp, fp, fn, n_points - tp - fp - fn)


def precision_recall(cm: ConfusionMatrix) -> tuple[float, float]:
    """(precision, recall) with the warn-and-zero convention on empty denominators."""
    if cm.tp + cm.fp == 0:
        warnings.warn("no predicted positives; precision defined as 0.0", UndefinedMetricWarning, stacklevel=2)
        precision = 0.0
    else:
        precision = cm.tp / (cm.tp + cm.fp)
    if cm.tp + cm.fn == 0:
        warnings.warn("no true positives in reference; recall defined as 0.0", UndefinedMetricWarning, stacklevel=2)
        recall = 0.0
    else:
        recall = cm.tp / (cm.tp + cm.fn)
    return precision, recall


def fbeta(cm: ConfusionMatrix, beta: float) -> float:
    """F-beta score: (1 + beta^2) P R / (beta^2 P + R), in [0, 1].

    beta < 1 weights precision, beta > 1 weights recall.  Returns 0.0 when
    both precision and recall are zero.
    """
    if beta <= 0.0:
        raise ValueError(f"beta must be > 0, got {beta}")
    precision, recall = precision_recall(cm)
    denom = beta * beta * precision + recall
    if denom == 0.0:
        return 0.0
    return (1.0 + beta * beta) * precision * recall / denom


@dataclass
class LabeledDataset:
    """A named trajectory collection plus per-trajectory truth labels."""

    name: str
    trajectories: list[Trajectory]
    truth: dict[str, LabelSet]

    def total_points(self) -> int:
        return sum(len(tr) for tr in self.trajectories)

    def total_outliers(self) -> int:
        return sum(len(labels) for labels in self.truth.values())


@dataclass
class EvaluationCell:
    """Scores for one detector on one dataset."""

    detector: str
    dataset: str
    cm: ConfusionMatrix
    precision: float
    recall: float
    f_05: float
    f_1: float
    f_2: float
    elapsed: float
    points_evaluated: int
    true_outliers: int
    errors: list[str] = field(default_factory=list)


@dataclass
class EvaluationReport:
    cells: list[EvaluationCell]
    predictions: dict[tuple[str, str], dict[str, LabelSet]]

    def cell(self, detector: str, dataset: str) -> EvaluationCell:
        for cell in self.cells:
            if cell.detector == detector and cell.dataset == dataset:
                return cell
        raise KeyError((detector, dataset))

    def has_errors(self) -> bool:
        return any(cell.errors for cell in self.cells)

    def to_json_dict(self) -> dict:
        results: dict[str, dict] = {}
        for cell in self.cells:
            results.setdefault(cell.detector, {})[cell.dataset] = {
                "tp": cell.cm.tp,
                "fp": cell.cm.fp,
                "fn": cell.cm.fn,
                "tn": cell.cm.tn,
                "precision": cell.precision,
                "recall": cell.recall,
                "f_05": cell.f_05,
                "f_1": cell.f_1,
                "f_2": cell.f_2,
                "elapsed_s": cell.elapsed,
                "points_evaluated": cell.points_evaluated,
                "true_outliers": cell.true_outliers,
                "errors": list(cell.errors),
            }
        return {"results": results}

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def score_rows(self) -> list[list]:
        """Flat plot-ready rows, deliberately excluding timings so repeated
        runs of the same config produce byte-identical score files."""
        rows: list[list] = [[
            "detector", "dataset", "tp", "fp", "fn", "tn",
            "precision", "recall", "f_05", "f_1", "f_2",
            "points_evaluated", "true_outliers",
        ]]
        for cell in self.cells:
            rows.append([
                cell.detector, cell.dataset,
                cell.cm.tp, cell.cm.fp, cell.cm.fn, cell.cm.tn,
                repr(cell.precision), repr(cell.recall),
                repr(cell.f_05), repr(cell.f_1), repr(cell.f_2),
                cell.points_evaluated, cell.true_outliers,
            ])
        return rows

    def write_scores_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerows(self.score_rows())


def _run_one(config: DetectorConfig, trajectory: Trajectory) -> DetectionResult | str:
    try:
        return detect(trajectory, config)
    except Exception as exc:  # detector crash must not void the run
        return f"{trajectory.object_id}: {type(exc).__name__}: {exc}"


def evaluate_run(
    detectors: Sequence[tuple[str, DetectorConfig]],
    datasets: Sequence[LabeledDataset],
    jobs: int = 1,
) -> EvaluationReport:
    """Run every detector on every dataset and score against the truth labels.

    A detector failure on one trajectory is recorded in the cell's error list
    and that trajectory is excluded from the cell's pooled counts; the run
    continues.  Outputs are deterministic for any jobs value: aggregation
    order is fixed by detector order and object_id, not completion order.
    """
    tasks = [
        (d_index, ds_index, t_index)
        for d_index in range(len(detectors))
        for ds_index in range(len(datasets))
        for t_index in range(len(datasets[ds_index].trajectories))
    ]

    def run(task: tuple[int, int, int]) -> DetectionResult | str:
        d_index, ds_index, t_index = task
        return _run_one(detectors[d_index][1], datasets[ds_index].trajectories[t_index])

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, tasks))
    else:
        outcomes = [run(task) for task in tasks]
    by_task = dict(zip(tasks, outcomes))

    cells: list[EvaluationCell] = []
    predictions: dict[tuple[str, str], dict[str, LabelSet]] = {}
    for d_index, (detector_name, _) in enumerate(detectors):
        for ds_index, dataset in enumerate(datasets):
            pooled = EMPTY_CONFUSION
            elapsed = 0.0
            points_evaluated = 0
            errors: list[str] = []
            cell_predictions: dict[str, LabelSet] = {}
            order = sorted(
                range(len(dataset.trajectories)),
                key=lambda t_index: dataset.trajectories[t_index].object_id,
            )
            for t_index in order:
                trajectory = dataset.trajectories[t_index]
                outcome = by_task[(d_index, ds_index, t_index)]
                if isinstance(outcome, str):
                    errors.append(outcome)
                    continue
                truth = dataset.truth.get(trajectory.object_id, LabelSet())
                pooled = pooled + confusion(outcome.flags, truth, len(trajectory))
                elapsed += outcome.elapsed
                points_evaluated += len(trajectory)
                cell_predictions[trajectory.object_id] = outcome.flags
            precision, recall = precision_recall(pooled)
            cells.append(
                EvaluationCell(
                    detector=detector_name,
                    dataset=dataset.name,
                    cm=pooled,
                    precision=precision,
                    recall=recall,
                    f_05=fbeta(pooled, 0.5),
                    f_1=fbeta(pooled, 1.0),
                    f_2=fbeta(pooled, 2.0),
                    elapsed=elapsed,
                    points_evaluated=points_evaluated,
                    true_outliers=dataset.total_outliers(),
                    errors=errors,
                )
            )
            predictions[(detector_name, dataset.name)] = cell_predictions
    return EvaluationReport(cells=cells, predictions=predictions)

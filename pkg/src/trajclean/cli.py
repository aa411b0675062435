"""Batch command-line interface: synth, label, detect and eval subcommands.

Exit codes: 0 success, 2 bad configuration, 3 missing input file, 4 internal
detector error (partial results are still written).  All outputs are
deterministic given the config and seed; only timings vary between runs.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import sys
from pathlib import Path

from trajclean import __version__
from trajclean.core import ConfigError, LabelSet
from trajclean.detectors import DetectorConfig, config_from_options, detect
from trajclean.evaluate import LabeledDataset, evaluate_run
from trajclean.groundtruth import (
    GroundTruthConfig,
    label_outliers,
    read_label_file,
    write_index_file,
    write_label_file,
)
from trajclean.ingest import (
    STANDARD_MAPPING,
    MappingError,
    load_mapping,
    parse_dataset,
    write_dataset_csv,
    write_mapping,
)
from trajclean.synth import SynthSpec, generate_dataset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING_FILE = 3
EXIT_DETECTOR_ERROR = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trajclean",
        description="Trajectory outlier detection toolkit: synthesize, label, detect, evaluate.",
    )
    parser.add_argument("--version", action="version", version=f"trajclean {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="write a synthetic dataset with known outlier labels")
    synth.add_argument("--out", required=True, help="output directory")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--name", default="synth", help="output file stem")
    synth.add_argument("--trajectories", type=int, default=1)
    synth.add_argument("--points", type=int, default=1000)
    synth.add_argument("--base-speed", type=float, default=10.0, help="m/s")
    synth.add_argument("--base-bearing", type=float, default=90.0, help="degrees")
    synth.add_argument("--interval", type=float, default=1.0, help="seconds between fixes")
    synth.add_argument("--noise-sigma", type=float, default=1.0, help="position jitter, meters")
    synth.add_argument("--outlier-rate", type=float, default=0.05)
    synth.add_argument("--displacement", type=float, default=1000.0, help="outlier offset, meters")

    label = sub.add_parser("label", help="cross-check sensor channels and write ground-truth labels")
    label.add_argument("--dataset", required=True)
    label.add_argument("--mapping", required=True)
    label.add_argument("--ts", type=float, default=10.0, help="speed threshold, m/s")
    label.add_argument("--th", type=float, default=45.0, help="heading threshold, degrees")
    label.add_argument("--out", required=True, help="output label file")

    det = sub.add_parser("detect", help="run configured detectors, write predicted labels")
    det.add_argument("--config", required=True, help="detector config file (INI)")
    det.add_argument("--dataset", required=True)
    det.add_argument("--mapping", required=True)
    det.add_argument("--out", required=True, help="output directory")

    ev = sub.add_parser("eval", help="full pipeline: label, detect, score, report")
    ev.add_argument("--config", required=True, help="run config file (INI)")
    ev.add_argument("--out", required=True, help="output directory")
    ev.add_argument("--jobs", type=int, default=None, help="parallel workers (default: config or 1)")
    ev.add_argument("--dataset", help="single-dataset shortcut; overrides config datasets")
    ev.add_argument("--mapping", help="mapping for --dataset")
    ev.add_argument("--truth", help="truth label file for --dataset")
    return parser


def _read_config(path: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(delimiters=("=",), interpolation=None)
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise FileNotFoundError(path)
    return parser


def _detectors_from_config(config: configparser.ConfigParser) -> list[tuple[str, DetectorConfig]]:
    detectors: list[tuple[str, DetectorConfig]] = []
    for section in config.sections():
        if section.startswith("detector:"):
            name = section.split(":", 1)[1].strip()
            detectors.append((name, config_from_options(dict(config[section]))))
    return detectors


def _groundtruth_from_config(config: configparser.ConfigParser) -> GroundTruthConfig:
    if config.has_section("groundtruth"):
        section = config["groundtruth"]
        return GroundTruthConfig(
            speed_threshold=section.getfloat("ts", 10.0),
            heading_threshold=section.getfloat("th", 45.0),
        )
    return GroundTruthConfig()


def _load_labeled_dataset(
    name: str, path: str, mapping_path: str, truth_path: str | None, gt_cfg: GroundTruthConfig
) -> LabeledDataset:
    mapping = load_mapping(mapping_path)
    trajectories, _report = parse_dataset(path, mapping)
    if truth_path:
        try:
            truth = read_label_file(
                truth_path,
                default_object_id=trajectories[0].object_id if len(trajectories) == 1 else None,
            )
        except ValueError as exc:
            raise ConfigError(f"truth file {truth_path}: {exc}") from exc
    else:
        truth = label_outliers(trajectories, gt_cfg)
    return LabeledDataset(name=name, trajectories=trajectories, truth=truth)


def _cmd_synth(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = SynthSpec(
        n_points=args.points,
        base_speed=args.base_speed,
        base_bearing=args.base_bearing,
        sample_interval=args.interval,
        position_noise_sigma=args.noise_sigma,
        outlier_rate=args.outlier_rate,
        outlier_displacement=args.displacement,
        seed=args.seed,
    )
    trajectories, labels = generate_dataset(spec, args.trajectories)

    csv_path = out_dir / f"{args.name}.csv"
    labels_path = out_dir / f"{args.name}.labels"
    mapping_path = out_dir / f"{args.name}.mapping"
    write_dataset_csv(trajectories, csv_path)
    if args.trajectories == 1:
        write_index_file(labels_path, next(iter(labels.values())))
    else:
        write_label_file(labels_path, labels)
    write_mapping(mapping_path, STANDARD_MAPPING)
    total = sum(len(tr) for tr in trajectories)
    injected = sum(len(v) for v in labels.values())
    print(f"wrote {csv_path} ({total} points, {injected} injected outliers), {labels_path}, {mapping_path}")
    return EXIT_OK


def _cmd_label(args: argparse.Namespace) -> int:
    mapping = load_mapping(args.mapping)
    trajectories, report = parse_dataset(args.dataset, mapping)
    labels = label_outliers(trajectories, GroundTruthConfig(args.ts, args.th))
    write_label_file(args.out, labels)
    flagged = sum(len(v) for v in labels.values())
    print(
        f"read {report.rows_read} rows, accepted {report.points_accepted} points, "
        f"flagged {flagged} outliers -> {args.out}"
    )
    return EXIT_OK


def _cmd_detect(args: argparse.Namespace) -> int:
    config = _read_config(args.config)
    detectors = _detectors_from_config(config)
    if not detectors:
        raise ConfigError("no [detector:NAME] sections in config")
    mapping = load_mapping(args.mapping)
    trajectories, _report = parse_dataset(args.dataset, mapping)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.dataset).stem
    failures = 0
    for name, detector_cfg in detectors:
        predicted: dict[str, LabelSet] = {}
        for trajectory in trajectories:
            try:
                predicted[trajectory.object_id] = detect(trajectory, detector_cfg).flags
            except Exception as exc:
                failures += 1
                print(f"detector {name} failed on {trajectory.object_id}: {exc}", file=sys.stderr)
        path = out_dir / f"{stem}__{name}.labels"
        write_label_file(path, predicted)
        print(f"{name}: flagged {sum(len(v) for v in predicted.values())} points -> {path}")
    return EXIT_DETECTOR_ERROR if failures else EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    config = _read_config(args.config)
    detectors = _detectors_from_config(config)
    gt_cfg = _groundtruth_from_config(config)

    entries: list[dict] = []
    if args.dataset:
        if not args.mapping:
            raise ConfigError("--dataset shortcut requires --mapping")
        entries.append(
            {"name": Path(args.dataset).stem, "path": args.dataset, "mapping": args.mapping, "truth": args.truth}
        )
    else:
        for section in config.sections():
            if section.startswith("dataset:"):
                name = section.split(":", 1)[1].strip()
                entry = config[section]
                if "path" not in entry or "mapping" not in entry:
                    raise ConfigError(f"[{section}] needs 'path' and 'mapping' keys")
                entries.append(
                    {"name": name, "path": entry["path"], "mapping": entry["mapping"], "truth": entry.get("truth")}
                )
    datasets = [
        _load_labeled_dataset(e["name"], e["path"], e["mapping"], e["truth"], gt_cfg) for e in entries
    ]
    if not detectors:
        raise ConfigError("eval needs at least one [detector:NAME] section")
    if not datasets:
        raise ConfigError("eval needs at least one dataset ([dataset:NAME] section or --dataset)")

    jobs = args.jobs if args.jobs is not None else int(config.get("run", "jobs", fallback="1"))
    if jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {jobs}")

    out_dir = Path(args.out)
    labels_dir = out_dir / "labels"
    labels_dir.mkdir(parents=True, exist_ok=True)

    report = evaluate_run(detectors, datasets, jobs=jobs)

    for dataset in datasets:
        write_label_file(labels_dir / f"{dataset.name}__groundtruth.labels", dataset.truth)
    for (detector_name, dataset_name), predicted in report.predictions.items():
        write_label_file(labels_dir / f"{dataset_name}__{detector_name}.labels", predicted)
    report.write_json(out_dir / "report.json")
    report.write_scores_csv(out_dir / "scores.csv")

    # Config echo: everything needed to re-run this evaluation bit-identically
    # (timings aside).
    manifest = {
        "tool": "trajclean",
        "version": __version__,
        "jobs": jobs,
        "groundtruth": {
            "ts": gt_cfg.speed_threshold,
            "th": gt_cfg.heading_threshold,
        },
        "datasets": [
            {
                "name": entry["name"],
                "path": str(Path(entry["path"]).resolve()),
                "mapping": str(Path(entry["mapping"]).resolve()),
                "truth": str(Path(entry["truth"]).resolve()) if entry["truth"] else None,
                "trajectories": len(dataset.trajectories),
                "points": dataset.total_points(),
            }
            for entry, dataset in zip(entries, datasets)
        ],
        "detectors": {
            name: {"type": type(cfg).__name__, **dataclasses.asdict(cfg)} for name, cfg in detectors
        },
        "config_file": str(Path(args.config).resolve()),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    for cell in report.cells:
        print(
            f"{cell.detector} x {cell.dataset}: precision={cell.precision:.4f} "
            f"recall={cell.recall:.4f} f1={cell.f_1:.4f} ({cell.elapsed:.3f}s)"
        )
    if report.has_errors():
        for cell in report.cells:
            for error in cell.errors:
                print(f"detector error [{cell.detector} x {cell.dataset}]: {error}", file=sys.stderr)
        return EXIT_DETECTOR_ERROR
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "label": _cmd_label,
    "detect": _cmd_detect,
    "eval": _cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, MappingError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc}", file=sys.stderr)
        return EXIT_MISSING_FILE


if __name__ == "__main__":
    sys.exit(main())

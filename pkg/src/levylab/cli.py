"""Configuration-driven experiment runner.

Usage:
    levylab --list
    levylab --config cfg.json [--seed N] [--paths N] [--workers N] [--out DIR]

The config file names one registered experiment plus its parameters; flags
override the corresponding config fields. Each run writes results.csv (fixed
column order, 17-significant-digit floats), verdicts.json and manifest.json
into the output directory.

Exit codes: 0 success, 2 configuration error, 3 assumption violated by the
inputs, 4 a verified bound failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .errors import (AssumptionViolation, ConfigError, InfiniteMomentError,
                     MeasurabilityError, PreconditionError)
from .experiments import (COLUMNS, ExperimentResult, RunConfig, REGISTRY,
                          list_experiments, run_experiment)
from .serialize import validate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3
EXIT_VERDICT = 4


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def write_results_csv(path: Path, rows: list) -> None:
    lines = [",".join(COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col, "")) for col in COLUMNS))
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_artifacts(out_dir: Path, cfg_doc: dict, result: ExperimentResult,
                    wall_time: float) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.csv"
    verdicts_path = out_dir / "verdicts.json"
    write_results_csv(results_path, result.rows)
    verdicts_doc = {"verdicts": dict(sorted(result.verdicts.items())),
                    "overall": result.passed,
                    "notes": {k: _fmt(v) for k, v in sorted(result.notes.items())}}
    verdicts_path.write_bytes(
        (json.dumps(verdicts_doc, indent=2, sort_keys=True) + "\n").encode("utf-8"))
    manifest = {
        "config": cfg_doc,
        "artifacts": {"results.csv": _sha256(results_path),
                      "verdicts.json": _sha256(verdicts_path)},
        "verdicts": dict(sorted(result.verdicts.items())),
        "overall": result.passed,
        "wall_time_s": wall_time,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_from_config(cfg_doc: dict, out_dir: Path) -> int:
    cfg = RunConfig(
        experiment=cfg_doc["experiment"],
        seed=int(cfg_doc["seed"]),
        n_paths=int(cfg_doc.get("n_paths", 0)),
        truncation=int(cfg_doc.get("truncation", 0)),
        p=float(cfg_doc.get("p", 0.0)),
        workers=int(cfg_doc.get("workers", 1)),
        params=cfg_doc.get("params", {}),
    )
    start = time.perf_counter()
    try:
        result = run_experiment(cfg)
    except (AssumptionViolation, PreconditionError, InfiniteMomentError,
            MeasurabilityError) as exc:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "manifest.json").write_text(
            json.dumps({"config": cfg_doc, "error": str(exc),
                        "kind": type(exc).__name__}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        print(f"assumption failure: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    wall = time.perf_counter() - start
    write_artifacts(out_dir, cfg_doc, result, wall)
    for name, ok in sorted(result.verdicts.items()):
        print(f"{cfg.experiment}: {name}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if result.passed else EXIT_VERDICT


def print_registry() -> None:
    rows = list_experiments()
    width = max(len(r["id"]) for r in rows)
    print(f"{'id':<{width}}  runtime  checks")
    for r in rows:
        print(f"{r['id']:<{width}}  {r['runtime']:<8} {r['anchor']}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="levylab",
        description="Run a registered Monte Carlo verification experiment.")
    parser.add_argument("--config", type=Path, help="JSON experiment config")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--paths", type=int, help="override the path count")
    parser.add_argument("--workers", type=int, help="override the worker count")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--list", action="store_true",
                        help="print the experiment registry and exit")
    args = parser.parse_args(argv)

    if args.list:
        print_registry()
        return EXIT_OK
    if args.config is None:
        print("error: --config is required (or use --list)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg_doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg_doc["seed"] = args.seed
    if args.paths is not None:
        cfg_doc["n_paths"] = args.paths
    if args.workers is not None:
        cfg_doc["workers"] = args.workers
    try:
        validate(cfg_doc, "config")
        if cfg_doc["experiment"] not in REGISTRY:
            raise ConfigError(f"unknown experiment id {cfg_doc['experiment']!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out if args.out is not None else Path(
        cfg_doc.get("out_dir", f"runs/{cfg_doc['experiment']}"))
    return run_from_config(cfg_doc, out_dir)


if __name__ == "__main__":
    sys.exit(main())

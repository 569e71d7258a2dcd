"""Command-line surface: train, sweep, oracle, report.

All outputs land inside the --out directory next to a manifest.json
recording the config snapshot, seed, and a sha256 digest per file.
Identical config and seed reproduce every output byte for byte.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, published
from .grid_env import GridWorld, cell_label, new_grid
from .learner import BatchResult, LearnerConfig, run_batch, run_training
from .metrics import (
    average_distance_series,
    average_reward_series,
    scale_stats,
    success_rate_series,
    TOTAL_DISTANCE_MODES,
)
from .oracle import brute_force_min_distance
from .sweep import run_sweep

DEFAULT_OBJECTS = {2: (), 3: (4,), 4: (5, 6, 9, 10)}

CONFIG_KEYS = {
    "side",
    "object_cells",
    "alpha",
    "gamma",
    "epsilon",
    "scale",
    "max_iterations",
    "episodes_per_run",
    "runs",
    "seed",
    "total_distance_mode",
    "filter_threshold_pp",
}


class ConfigError(ValueError):
    pass


def parse_config(path: str | Path) -> tuple[GridWorld, LearnerConfig, dict]:
    """Load a JSON run config; unknown keys are rejected, absent learner
    fields get the calibrated defaults. Returns (world, config, extras)
    where extras holds the non-learner options (e.g. total_distance_mode).
    """
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise ConfigError(f"malformed JSON in {path}: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(raw).__name__}")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "side" not in raw:
        raise ConfigError("config must declare a grid side")
    side = int(raw["side"])
    objects = raw.get("object_cells", DEFAULT_OBJECTS.get(side, ()))
    world = new_grid(side, objects)
    learner_keys = {
        "alpha", "gamma", "epsilon", "scale",
        "max_iterations", "episodes_per_run", "runs", "seed",
    }
    overrides = {k: raw[k] for k in learner_keys if k in raw}
    try:
        cfg = LearnerConfig.for_world(world, **overrides)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    extras = {
        "total_distance_mode": raw.get("total_distance_mode", "tail_mean"),
        "filter_threshold_pp": float(raw.get("filter_threshold_pp", 5.0)),
    }
    if extras["total_distance_mode"] not in TOTAL_DISTANCE_MODES:
        raise ConfigError(
            f"total_distance_mode must be one of {TOTAL_DISTANCE_MODES}"
        )
    return world, cfg, extras


def config_to_dict(world: GridWorld, cfg: LearnerConfig, extras: dict) -> dict:
    out = {"side": world.side, "object_cells": sorted(world.object_cells)}
    out.update(asdict(cfg))
    out.update(extras)
    return out


def fmt(value: float) -> str:
    """6 significant digits, the precision used in every CSV."""
    return f"{value:.6g}"


class OutputDir:
    """Tracks files written under --out so a failed command can clean up,
    and finalizes with a digest manifest."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.written: list[Path] = []

    def file(self, relative: str) -> Path:
        target = self.path / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(target)
        return target

    def write_series_csv(self, relative: str, values: Sequence[float]) -> None:
        lines = ["episode,value"]
        lines += [f"{e},{fmt(v)}" for e, v in enumerate(values)]
        self.file(relative).write_text("\n".join(lines) + "\n")

    def discard(self) -> None:
        for f in self.written:
            try:
                f.unlink()
            except OSError:
                pass

    def finalize(self, config_snapshot: dict, seed: int) -> None:
        digests = {
            str(f.relative_to(self.path)): hashlib.sha256(f.read_bytes()).hexdigest()
            for f in self.written
        }
        manifest = {
            "artifact_version": __version__,
            "config": config_snapshot,
            "seed": seed,
            "created_unix": int(time.time()),
            "files": digests,
        }
        (self.path / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _resolve_workers(args) -> Optional[int]:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("QSD_WORKERS")
    if env:
        return int(env)
    return os.cpu_count()


def _world_and_config(args) -> tuple[GridWorld, LearnerConfig, dict]:
    if args.config:
        world, cfg, extras = parse_config(args.config)
    else:
        side = args.grid or 3
        objects = DEFAULT_OBJECTS.get(side, ())
        if args.objects is not None:
            objects = tuple(int(c) for c in args.objects.split(",") if c != "")
        world = new_grid(side, objects)
        cfg = LearnerConfig.for_world(world)
        extras = {"total_distance_mode": "tail_mean", "filter_threshold_pp": 5.0}
    overrides = {}
    for name in ("alpha", "gamma", "epsilon", "scale", "max_iterations",
                 "episodes_per_run", "runs", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if overrides:
        cfg = LearnerConfig.for_world(world, **{**asdict(cfg), **overrides})
    if getattr(args, "total_distance_mode", None):
        extras["total_distance_mode"] = args.total_distance_mode
    return world, cfg, extras


def _write_batch_series(out: OutputDir, batch: BatchResult, prefix: str = "") -> None:
    out.write_series_csv(prefix + "reward.csv", average_reward_series(batch))
    out.write_series_csv(prefix + "success.csv", success_rate_series(batch))
    out.write_series_csv(prefix + "avg_distance.csv", average_distance_series(batch))


def cmd_train(args) -> int:
    world, cfg, extras = _world_and_config(args)
    out = OutputDir(args.out)
    try:
        batch = run_batch(world, cfg, workers=_resolve_workers(args))
        _write_batch_series(out, batch)
        if args.export_qtable:
            series = run_training(world, cfg, run_index=0)
            lines = [",".join(["state"] + [cell_label(c) for c in range(world.n_cells)])]
            for s, row in enumerate(series.final_q):
                lines.append(",".join([str(s)] + [fmt(v) for v in row]))
            out.file("qtable.csv").write_text("\n".join(lines) + "\n")
    except Exception:
        out.discard()
        raise
    out.finalize(config_to_dict(world, cfg, extras), cfg.seed)
    return 0


def cmd_sweep(args) -> int:
    world, cfg, extras = _world_and_config(args)
    scales = tuple(float(s) for s in args.scales.split(","))
    if 0.0 not in scales:
        print("error: the scale list must include the 0 baseline", file=sys.stderr)
        return 2
    out = OutputDir(args.out)
    try:
        report = run_sweep(
            world,
            cfg,
            scales,
            workers=_resolve_workers(args),
            total_distance_mode=extras["total_distance_mode"],
            filter_threshold_pp=extras["filter_threshold_pp"],
        )
        for s, batch in zip(report.scales, report.batches):
            _write_batch_series(out, batch, prefix=f"scale_{s:g}/")
        stats_lines = [
            "scale,total_distance,min_distance,below_avg_count,max_success,episode_of_max"
        ]
        for st in report.stats:
            stats_lines.append(
                f"{st.scale:g},{fmt(st.total_distance)},{fmt(st.min_distance)},"
                f"{st.below_avg_episode_count},{fmt(st.max_success_rate)},"
                f"{st.episode_of_max_success}"
            )
        out.file("scale_stats.csv").write_text("\n".join(stats_lines) + "\n")
        norm_lines = ["scale,norm_total,norm_min,norm_count"]
        for i, s in enumerate(report.scales):
            norm_lines.append(
                f"{s:g},{fmt(report.norm_total[i])},{fmt(report.norm_min[i])},"
                f"{fmt(report.norm_count[i])}"
            )
        out.file("normalized.csv").write_text("\n".join(norm_lines) + "\n")
        out.file("selection.json").write_text(
            json.dumps(
                {
                    "selected_scale": report.selected_scale,
                    "criterion": "argmin(norm_total_distance + norm_below_avg_count)",
                    "filter_threshold_pp": report.filter_threshold_pp,
                },
                indent=2,
            )
            + "\n"
        )
    except Exception:
        out.discard()
        raise
    out.finalize(config_to_dict(world, cfg, extras), cfg.seed)
    return 0


def cmd_oracle(args) -> int:
    side = args.grid or 3
    objects = DEFAULT_OBJECTS.get(side, ())
    if args.objects is not None:
        objects = tuple(int(c) for c in args.objects.split(",") if c != "")
    world = new_grid(side, objects)
    result = brute_force_min_distance(
        world, method=args.method, force=args.force
    )
    payload = {
        "side": side,
        "object_cells": sorted(world.object_cells),
        "min_distance": result.min_distance,
        "optimal_order": list(result.optimal_order),
        "optimal_order_labels": [cell_label(c) for c in result.optimal_order],
        "orders_examined": result.orders_examined,
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        out = OutputDir(args.out)
        out.file("oracle.json").write_text(text + "\n")
        out.finalize({"side": side, "object_cells": sorted(world.object_cells)}, 0)
    return 0


def _load_scale_stats_csv(path: Path) -> list[dict]:
    rows = []
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    for line in lines[1:]:
        rows.append(dict(zip(header, (float(x) for x in line.split(",")))))
    return rows


def cmd_report(args) -> int:
    sweep_dir = Path(args.sweep_dir)
    stats_path = sweep_dir / "scale_stats.csv"
    if not stats_path.exists():
        print(f"error: {stats_path} not found; run the sweep first", file=sys.stderr)
        return 2
    grid = {"V": "3x3", "VI": "4x4", "3x3": "3x3", "4x4": "4x4"}.get(args.paper_table)
    if grid is None:
        print("error: --paper-table must be one of V, VI, 3x3, 4x4", file=sys.stderr)
        return 2
    computed = {r["scale"]: r for r in _load_scale_stats_csv(stats_path)}
    pub_rows = {st.scale: st for st in published.published_scale_stats(grid)}

    print(f"Scale-factor selection, {grid} grid: computed vs published")
    print(
        f"{'scale':>6} | {'total (ours)':>12} {'total (pub)':>11} {'delta':>8} | "
        f"{'min (ours)':>10} {'min (pub)':>9} | {'count (ours)':>12} {'count (pub)':>11} | "
        f"{'success (ours)':>14} {'success (pub)':>13}"
    )
    for scale in sorted(pub_rows):
        pub = pub_rows[scale]
        ours = computed.get(scale)
        if ours is None:
            print(f"{scale:>6g} | (not in sweep)")
            continue
        delta = ours["total_distance"] - pub.total_distance
        print(
            f"{scale:>6g} | {ours['total_distance']:>12.4g} {pub.total_distance:>11.4g} "
            f"{delta:>+8.3g} | {ours['min_distance']:>10.4g} {pub.min_distance:>9.4g} | "
            f"{int(ours['below_avg_count']):>12d} {pub.below_avg_episode_count:>11d} | "
            f"{ours['max_success']:>14.4g} {pub.max_success_rate:>13.4g}"
        )

    selection_path = sweep_dir / "selection.json"
    selected = None
    if selection_path.exists():
        selected = json.loads(selection_path.read_text())["selected_scale"]
        print(f"\nselected scale (this sweep): {selected:g}  "
              f"(published pick: {published.SELECTED_SCALE[grid]:g})")

    baseline = computed.get(0.0)
    target = computed.get(selected) if selected is not None else None
    if baseline and target and baseline is not target:
        drop = 100.0 * (baseline["total_distance"] - target["total_distance"]) / baseline["total_distance"]
        claimed = published.CLAIMED_DISTANCE_DROP_PCT[grid]
        print(f"distance reduction at selected scale vs baseline: {drop:.2f}%  "
              f"(published claim: {claimed}%)")
        if grid == "3x3":
            print("published selection table implies a "
                  f"{published.TABLE_IMPLIED_DROP_PCT_3X3}% total-distance delta; "
                  "the headline claim uses the per-iteration distance curve instead")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsd",
        description="Distance-penalized tabular Q-learning on grid cleaning tasks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_required=True):
        p.add_argument("--config", help="JSON run config path")
        p.add_argument("--grid", type=int, help="grid side length (default 3)")
        p.add_argument("--objects", help="comma-separated 0-based object cell indices")
        p.add_argument("--out", required=out_required, help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int, help="worker pool size (env QSD_WORKERS)")

    def learner_flags(p):
        p.add_argument("--alpha", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--max-iterations", dest="max_iterations", type=int)
        p.add_argument("--episodes", dest="episodes_per_run", type=int)
        p.add_argument("--runs", type=int)
        p.add_argument("--total-distance-mode", dest="total_distance_mode",
                       choices=TOTAL_DISTANCE_MODES)

    p_train = sub.add_parser("train", help="train one batch and write its learning curves")
    common(p_train)
    learner_flags(p_train)
    p_train.add_argument("--scale", type=float)
    p_train.add_argument("--export-qtable", action="store_true",
                         help="also write run 0's trained table as qtable.csv")
    p_train.set_defaults(func=cmd_train)

    p_sweep = sub.add_parser("sweep", help="train across scale factors and pick the best")
    common(p_sweep)
    learner_flags(p_sweep)
    p_sweep.add_argument("--scales", required=True,
                         help="comma-separated scale factors; must include 0")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="exact minimum cleaning travel distance")
    p_oracle.add_argument("--grid", type=int)
    p_oracle.add_argument("--objects")
    p_oracle.add_argument("--method", choices=("auto", "permutation", "dp"), default="auto")
    p_oracle.add_argument("--force", action="store_true",
                          help="allow permutation enumeration past the size guard")
    p_oracle.add_argument("--out", help="optional directory for oracle.json")
    p_oracle.set_defaults(func=cmd_oracle)

    p_report = sub.add_parser("report", help="compare a sweep against published values")
    p_report.add_argument("--sweep-dir", required=True)
    p_report.add_argument("--paper-table", default="V",
                          help="V/3x3 or VI/4x4 (which published table to compare)")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

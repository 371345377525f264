"""Run output persistence: metrics CSV, message log JSONL, run manifest.

Every writer is byte-deterministic for a given trial result: floats are
serialized with repr (shortest round-trip), JSON keys are sorted, and no
timestamps or environment data are recorded.  That property is what makes
manifest-driven replay a pure byte comparison.
"""

from __future__ import annotations

import json
from pathlib import Path

from .config import ScenarioConfig, from_dict
from .sim import TrialResult, run_trial

METRICS_FILE = "metrics.csv"
TEAM_FILE = "team.csv"
MESSAGES_FILE = "messages.jsonl"
MANIFEST_FILE = "manifest.json"
AGGREGATE_FILE = "aggregate.csv"
VIEWS_FILE = "views.csv"


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def metrics_csv_text(result: TrialResult) -> str:
    target_cells = [t.cell for t in result.targets]
    header = ["time", "robot", "x", "y", "cells_visited", "pct_unknown"]
    header += [f"views_{cell}" for cell in target_cells]
    lines = [",".join(header)]
    for row in result.metrics:
        fields = [
            _fmt(row.time),
            _fmt(row.robot),
            _fmt(row.x),
            _fmt(row.y),
            _fmt(row.cells_visited),
            _fmt(row.pct_unknown),
        ]
        fields += [_fmt(v) for v in row.views]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def team_csv_text(result: TrialResult) -> str:
    lines = ["time,covered_cells,pct_unknown"]
    for row in result.team:
        lines.append(",".join([_fmt(row.time), _fmt(row.covered_cells), _fmt(row.pct_unknown)]))
    return "\n".join(lines) + "\n"


def messages_jsonl_text(result: TrialResult) -> str:
    lines = [json.dumps(entry, sort_keys=True, separators=(",", ":")) for entry in result.message_log]
    return "\n".join(lines) + ("\n" if lines else "")


def manifest_dict(config: ScenarioConfig, trial_seeds: list[int], layout: str) -> dict:
    return {
        "format_version": 1,
        "layout": layout,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "trial_seeds": list(trial_seeds),
    }


def write_trial(result: TrialResult, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / METRICS_FILE).write_text(metrics_csv_text(result), newline="\n")
    (out / TEAM_FILE).write_text(team_csv_text(result), newline="\n")
    (out / MESSAGES_FILE).write_text(messages_jsonl_text(result), newline="\n")


def write_single_run(config: ScenarioConfig, trial_seed: int, out_dir) -> TrialResult:
    """Run one trial and persist it beside its manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_trial(config, trial_seed)
    write_trial(result, out)
    manifest = manifest_dict(config, [trial_seed], layout="single")
    (out / MANIFEST_FILE).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", newline="\n")
    return result


def write_batch(config: ScenarioConfig, out_dir) -> list[TrialResult]:
    """Run config.trials trials (seeds seed+k), persist each in its own
    subdirectory, and write aggregate team coverage plus view counts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seeds = [config.seed + k for k in range(config.trials)]
    results = []
    for s in seeds:
        result = run_trial(config, s)
        write_trial(result, out / f"trial_{s}")
        results.append(result)

    times = [row.time for row in results[0].team]
    lines = ["time,mean,min,max"]
    for i, t in enumerate(times):
        values = [res.team[i].pct_unknown for res in results]
        lines.append(
            ",".join([_fmt(t), _fmt(sum(values) / len(values)), _fmt(min(values)), _fmt(max(values))])
        )
    (out / AGGREGATE_FILE).write_text("\n".join(lines) + "\n", newline="\n")

    view_lines = ["trial_seed"]
    if results[0].targets:
        view_lines = ["trial_seed," + ",".join(f"views_{t.cell}" for t in results[0].targets)]
        for s, res in zip(seeds, results):
            view_lines.append(",".join([str(s)] + [str(t.view_count) for t in res.targets]))
    (out / VIEWS_FILE).write_text("\n".join(view_lines) + "\n", newline="\n")

    manifest = manifest_dict(config, seeds, layout="batch")
    (out / MANIFEST_FILE).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", newline="\n")
    return results


def load_manifest(path) -> tuple[ScenarioConfig, list[int], str, Path]:
    """Resolve a manifest path (file or directory) into (config, seeds,
    layout, run directory).  Verifies the recorded config hash."""
    p = Path(path)
    if p.is_dir():
        p = p / MANIFEST_FILE
    raw = json.loads(p.read_text())
    config = from_dict(raw["config"])
    if config.config_hash() != raw["config_hash"]:
        raise ValueError(
            f"manifest config hash mismatch: recorded {raw['config_hash']}, "
            f"recomputed {config.config_hash()}"
        )
    return config, [int(s) for s in raw["trial_seeds"]], raw.get("layout", "single"), p.parent


def replay_check(path) -> list[str]:
    """Re-run every trial a manifest records and byte-compare the outputs.

    Returns a list of mismatch descriptions; empty means the replay
    reproduced every persisted file exactly.
    """
    config, seeds, layout, run_dir = load_manifest(path)
    problems: list[str] = []
    for s in seeds:
        trial_dir = run_dir if layout == "single" else run_dir / f"trial_{s}"
        result = run_trial(config, s)
        expectations = {
            METRICS_FILE: metrics_csv_text(result),
            TEAM_FILE: team_csv_text(result),
            MESSAGES_FILE: messages_jsonl_text(result),
        }
        for name, fresh in expectations.items():
            stored_path = trial_dir / name
            if not stored_path.exists():
                problems.append(f"seed {s}: missing {stored_path}")
                continue
            stored = stored_path.read_text()
            if stored != fresh:
                problems.append(f"seed {s}: {name} differs from replay")
    return problems

"""Command-line entry points.

Subcommands: run (one trial), batch (all configured trials plus
aggregates), replay (byte-compare a persisted run against a fresh re-run of
its manifest), plot (static figures), and plan (one planner step as JSON,
for scripting layers that drive the core out of process).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .belief import em_posterior
from .config import load_config
from .errors import ActiveSearchError, ConfigError
from .guts import select_action
from .persist import replay_check, write_batch, write_single_run
from .sensing import RecordKind, SensingDataset, SensingRecord


def _cmd_run(args) -> int:
    config = load_config(args.config)
    seed = config.seed if args.seed is None else int(args.seed)
    out_dir = Path(args.out) if args.out else Path(f"run_{config.config_hash()[:8]}_s{seed}")
    result = write_single_run(config, seed, out_dir)
    final_team = result.team[-1]
    print(f"wrote {out_dir}")
    print(f"seed {seed}: team covered {final_team.covered_cells} cells "
          f"({final_team.pct_unknown:.1f}% of the zone) in {result.team[-1].time:.0f} s")
    for target in result.targets:
        print(f"target cell {target.cell} (c={target.confidence_c}): {target.view_count} views")
    return 0


def _cmd_batch(args) -> int:
    config = load_config(args.config)
    out_dir = Path(args.out) if args.out else Path(f"batch_{config.config_hash()[:8]}")
    results = write_batch(config, out_dir)
    finals = [res.team[-1].pct_unknown for res in results]
    print(f"wrote {out_dir} ({len(results)} trials)")
    print(f"final coverage: mean {np.mean(finals):.1f}%, min {min(finals):.1f}%, max {max(finals):.1f}%")
    return 0


def _cmd_replay(args) -> int:
    problems = replay_check(args.log)
    if problems:
        for p in problems:
            print(f"MISMATCH: {p}")
        return 1
    print("replay OK: all persisted outputs reproduced byte-for-byte")
    return 0


def _cmd_plot(args) -> int:
    from .plotting import plot_coverage, plot_trajectories

    cov = plot_coverage(args.indir)
    trj = plot_trajectories(args.indir)
    print(f"wrote {cov}")
    print(f"wrote {trj}")
    return 0


def _load_records(dataset: SensingDataset, path: str) -> None:
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        dataset.append(
            SensingRecord(
                cell_index=int(raw["cell"]),
                observation_y=float(raw["y"]),
                confidence_c=float(raw["c"]),
                source_robot=int(raw.get("robot", 0)),
                kind=RecordKind(raw.get("kind", "SelfPosition")),
            )
        )


def _cmd_plan(args) -> int:
    config = load_config(args.config)
    dataset = SensingDataset(config.grid)
    if args.records:
        _load_records(dataset, args.records)
    position = (float(args.x), float(args.y))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(args.seed))))
    posterior = em_posterior(dataset, config.grid, None)
    action, loss = select_action(
        dataset,
        config.grid,
        config.zone,
        position,
        posterior.responsibilities,
        rng,
        config.planner.guts(),
    )
    payload = {
        "goal_cell": action.goal_cell,
        "goal_point": list(action.goal_point),
        "traversed": list(action.traversed_cells),
        "loss": {
            "l2": loss.l2_term,
            "indicator": loss.indicator_term,
            "lambda": loss.lambda_weight,
            "total": loss.total,
        },
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="activesearch",
        description="Decentralized multi-robot active search simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one trial and persist its outputs")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(fn=_cmd_run)

    p_batch = sub.add_parser("batch", help="run all configured trials and aggregate")
    p_batch.add_argument("--config", required=True)
    p_batch.add_argument("--out", default=None)
    p_batch.set_defaults(fn=_cmd_batch)

    p_replay = sub.add_parser("replay", help="re-run a manifest and byte-compare outputs")
    p_replay.add_argument("--log", required=True, help="run directory or manifest.json path")
    p_replay.set_defaults(fn=_cmd_replay)

    p_plot = sub.add_parser("plot", help="render coverage and trajectory figures")
    p_plot.add_argument("--in", dest="indir", required=True)
    p_plot.set_defaults(fn=_cmd_plot)

    p_plan = sub.add_parser("plan", help="one planner step as JSON on stdout")
    p_plan.add_argument("--config", required=True)
    p_plan.add_argument("--x", required=True, type=float)
    p_plan.add_argument("--y", required=True, type=float)
    p_plan.add_argument("--seed", required=True, type=int)
    p_plan.add_argument("--records", default=None, help="JSONL of sensing records to preload")
    p_plan.set_defaults(fn=_cmd_plan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ActiveSearchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Deterministic multi-robot simulation loop.

Tick order: deliver pending messages, fuse them, step every robot (flying,
sensing, replanning), enqueue this tick's broadcasts, then record metrics.
All randomness flows from per-robot and per-channel generators seeded from
the trial seed, so a trial is a pure function of (config, trial_seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .actions import CandidateAction
from .belief import EmConfig, em_posterior
from .comms import MessageKind, MessageQueue, PeerMessage, fuse_message
from .config import ScenarioConfig
from .coverage import Done, VisitedMask, select_coverage_action
from .errors import ActiveSearchError
from .geometry import cells_in_zone, supercover_trace
from .grid import GridSpec
from .geometry import ZonePolygon
from .guts import select_action
from .sensing import RecordKind, SensingDataset, SensingRecord
from .trajectory import evaluate, plan_leg

CHANNEL_STREAM_TAG = 0x7FFF0001  # keeps the channel RNG clear of robot ids
DWELL_EPS = 1e-9


@dataclass
class Target:
    cell: int
    confidence_c: float
    view_count: int = 0


@dataclass(frozen=True)
class MetricsRow:
    time: float
    robot: int
    x: float
    y: float
    cells_visited: int
    pct_unknown: float
    views: tuple[int, ...]


@dataclass(frozen=True)
class TeamRow:
    time: float
    covered_cells: int
    pct_unknown: float


@dataclass
class TrialResult:
    config: ScenarioConfig
    trial_seed: int
    metrics: list[MetricsRow]
    team: list[TeamRow]
    message_log: list[dict]
    targets: list[Target]
    datasets: dict[int, SensingDataset]
    coverage_done: dict[int, bool]


@lru_cache(maxsize=64)
def _zone_cells(grid: GridSpec, zone: ZonePolygon) -> tuple[frozenset[int], frozenset[int]]:
    center_in, sliver = cells_in_zone(grid, zone)
    return frozenset(center_in), frozenset(sliver)


def sense(cell: int, targets: dict[int, Target], robot_id: int, rng=None) -> SensingRecord:
    """Observation for entering a cell: a target yields (y=1, c=target c)
    and bumps its view counter; empty terrain yields (y=0, c=1)."""
    target = targets.get(cell)
    if target is not None:
        target.view_count += 1
        return SensingRecord(
            cell_index=cell,
            observation_y=1.0,
            confidence_c=target.confidence_c,
            source_robot=robot_id,
            kind=RecordKind.SELF_DETECTION,
        )
    return SensingRecord(
        cell_index=cell,
        observation_y=0.0,
        confidence_c=1.0,
        source_robot=robot_id,
        kind=RecordKind.SELF_POSITION,
    )


@dataclass
class RobotSim:
    """Mutable per-robot state inside one trial."""

    spec: "object"
    grid: GridSpec
    zone: ZonePolygon
    rng: np.random.Generator
    dataset: SensingDataset
    visited: VisitedMask
    target_order: tuple[int, ...]
    position: tuple[float, float] = (0.0, 0.0)
    current_cell: int = -1
    self_sensed: set[int] = field(default_factory=set)
    own_views: dict[int, int] = field(default_factory=dict)
    seg_x: object = None
    seg_y: object = None
    seg_T: float = 0.0
    seg_t: float = 0.0
    goal_point: tuple[float, float] | None = None
    pending: CandidateAction | None = None
    pending_requested: bool = False
    done: bool = False
    done_after_segment: bool = False

    def flying(self) -> bool:
        return self.seg_x is not None


class TrialRunner:
    def __init__(self, config: ScenarioConfig, trial_seed: int):
        self.cfg = config
        self.trial_seed = int(trial_seed)
        self.grid = config.grid
        self.zone = config.zone
        center_in, sliver = _zone_cells(self.grid, self.zone)
        self.zone_cells = center_in | sliver
        self.targets = [Target(t.cell, t.confidence) for t in config.targets]
        self.target_map = {t.cell: t for t in self.targets}
        self.channel_rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.trial_seed, CHANNEL_STREAM_TAG)))
        )
        self.queues: dict[int, MessageQueue] = {}
        self.robots: list[RobotSim] = []
        for spec in config.robots:
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((self.trial_seed, spec.id))))
            robot = RobotSim(
                spec=spec,
                grid=self.grid,
                zone=self.zone,
                rng=rng,
                dataset=SensingDataset(self.grid),
                visited=VisitedMask(grid=self.grid, allowed=frozenset(self.zone_cells)),
                target_order=tuple(t.cell for t in self.targets),
                position=tuple(spec.start),
                own_views={t.cell: 0 for t in self.targets},
            )
            robot.current_cell = self.grid.cell_of_point(*spec.start)
            self.robots.append(robot)
            self.queues[spec.id] = MessageQueue(config.channel, self.channel_rng)
        self.metrics: list[MetricsRow] = []
        self.team_rows: list[TeamRow] = []
        self.message_log: list[dict] = []
        self.outbox: list[PeerMessage] = []
        self.em_cfg = EmConfig(max_iters=config.planner.em_max_iters, tol=config.planner.em_tol)
        self.guts_cfg = config.planner.guts()

    # ------------------------------------------------------------------ plumbing

    def _broadcast(self, msg: PeerMessage, tick_index: int):
        """Fan a message out to every other robot through its queue."""
        if not self.cfg.channel.enabled:
            return
        for robot in self.robots:
            if robot.spec.id == msg.sender:
                continue
            delivered = self.queues[robot.spec.id].push(msg)
            self.message_log.append(
                {
                    "tick": tick_index,
                    "sender": msg.sender,
                    "receiver": robot.spec.id,
                    "kind": msg.kind.value,
                    "payload": _payload_dict(msg),
                    "delivered": delivered,
                }
            )

    def _fuse_incoming(self, robot: RobotSim, now: float):
        for msg in self.queues[robot.spec.id].deliver(now):
            fuse_message(robot.dataset, msg, self.cfg.fusion)
            if msg.kind == MessageKind.POSE:
                robot.visited.mark_traversed([msg.cell_index])
            elif msg.kind == MessageKind.GOAL:
                robot.visited.mark_traversed(msg.cells)

    def _record_sense(self, robot: RobotSim, cell: int, now: float):
        record = sense(cell, self.target_map, robot.spec.id)
        robot.dataset.append(record)
        robot.self_sensed.add(cell)
        robot.visited.mark_traversed([cell])
        if record.kind == RecordKind.SELF_DETECTION:
            robot.own_views[cell] = robot.own_views.get(cell, 0) + 1
            self.outbox.append(
                PeerMessage(
                    kind=MessageKind.TRACK,
                    sender=robot.spec.id,
                    timestamp=now,
                    cell_index=cell,
                    observation_y=record.observation_y,
                    confidence_c=record.confidence_c,
                )
            )

    # ------------------------------------------------------------------ planning

    def _compute_plan(self, robot: RobotSim, from_point) -> CandidateAction | Done | None:
        if robot.spec.planner == "coverage":
            return select_coverage_action(robot.visited, self.grid, self.zone, from_point)
        posterior = em_posterior(robot.dataset, self.grid, self.em_cfg)
        action, _ = select_action(
            robot.dataset,
            self.grid,
            self.zone,
            from_point,
            posterior.responsibilities,
            robot.rng,
            self.guts_cfg,
            robot_id=robot.spec.id,
        )
        return action

    def _adopt_plan(self, robot: RobotSim, plan: CandidateAction, now: float):
        gx, gy = plan.goal_point
        px, py = robot.position
        self.outbox.append(
            PeerMessage(
                kind=MessageKind.GOAL,
                sender=robot.spec.id,
                timestamp=now,
                cells=tuple(plan.traversed_cells),
            )
        )
        if abs(gx - px) < DWELL_EPS and abs(gy - py) < DWELL_EPS:
            # dwell: sense the spot once more and replan next tick
            self._record_sense(robot, robot.current_cell, now)
            robot.seg_x = robot.seg_y = None
            robot.goal_point = None
            return
        seg_x, seg_y, shared_t = plan_leg(robot.position, (gx, gy), robot.spec.v_max, robot.spec.a_max)
        robot.seg_x, robot.seg_y = seg_x, seg_y
        robot.seg_T = shared_t
        robot.seg_t = 0.0
        robot.goal_point = (gx, gy)
        robot.pending = None
        robot.pending_requested = False

    def _step_robot(self, robot: RobotSim, now: float):
        if robot.done:
            return
        if not robot.flying():
            plan = robot.pending
            robot.pending = None
            robot.pending_requested = False
            if plan is None:
                plan = self._compute_plan(robot, robot.position)
            if isinstance(plan, Done):
                robot.done = True
                return
            self._adopt_plan(robot, plan, now)
            return

        robot.seg_t = min(robot.seg_t + self.cfg.tick, robot.seg_T)
        new_pos = (
            float(evaluate(robot.seg_x, robot.seg_t).position),
            float(evaluate(robot.seg_y, robot.seg_t).position),
        )
        prev_pos = robot.position
        robot.position = new_pos
        trace = supercover_trace(self.grid, prev_pos, new_pos)
        for cell in trace[1:]:
            self._record_sense(robot, cell, now)
        if trace[-1] != robot.current_cell:
            robot.current_cell = trace[-1]

        remaining = robot.seg_T - robot.seg_t
        if remaining <= self.cfg.replan_lead and not robot.pending_requested:
            robot.pending_requested = True
            plan = self._compute_plan(robot, robot.goal_point)
            if isinstance(plan, Done):
                robot.pending = None
                robot.done_after_segment = True
            else:
                robot.pending = plan
        if robot.seg_t >= robot.seg_T:
            robot.position = robot.goal_point
            robot.current_cell = self.grid.cell_of_point(*robot.goal_point)
            robot.seg_x = robot.seg_y = None
            robot.goal_point = None
            if robot.done_after_segment:
                robot.done = True

    # ------------------------------------------------------------------ metrics

    def _record_metrics(self, now: float):
        denom = max(1, len(self.zone_cells))
        for robot in self.robots:
            known = len(
                set(np.flatnonzero(robot.dataset.touched_mask()).tolist()) & self.zone_cells
            )
            self.metrics.append(
                MetricsRow(
                    time=now,
                    robot=robot.spec.id,
                    x=robot.position[0],
                    y=robot.position[1],
                    cells_visited=len(robot.self_sensed & self.zone_cells),
                    pct_unknown=100.0 * known / denom,
                    views=tuple(robot.own_views[c] for c in robot.target_order),
                )
            )
        union: set[int] = set()
        for robot in self.robots:
            union |= robot.self_sensed
        union &= self.zone_cells
        self.team_rows.append(
            TeamRow(time=now, covered_cells=len(union), pct_unknown=100.0 * len(union) / denom)
        )

    # ------------------------------------------------------------------ main loop

    def run(self) -> TrialResult:
        now = 0.0
        for robot in self.robots:
            self._record_sense(robot, robot.current_cell, now)
            self.outbox.append(
                PeerMessage(
                    kind=MessageKind.POSE,
                    sender=robot.spec.id,
                    timestamp=now,
                    cell_index=robot.current_cell,
                )
            )
        self._flush_outbox(0)
        self._record_metrics(now)

        n_ticks = int(round(self.cfg.duration / self.cfg.tick))
        for k in range(1, n_ticks + 1):
            now = k * self.cfg.tick
            for robot in self.robots:
                self._fuse_incoming(robot, now)
            for robot in self.robots:
                self._step_robot(robot, now)
                self.outbox.append(
                    PeerMessage(
                        kind=MessageKind.POSE,
                        sender=robot.spec.id,
                        timestamp=now,
                        cell_index=robot.current_cell,
                    )
                )
            self._flush_outbox(k)
            self._record_metrics(now)

        return TrialResult(
            config=self.cfg,
            trial_seed=self.trial_seed,
            metrics=self.metrics,
            team=self.team_rows,
            message_log=self.message_log,
            targets=self.targets,
            datasets={r.spec.id: r.dataset for r in self.robots},
            coverage_done={r.spec.id: r.done for r in self.robots},
        )

    def _flush_outbox(self, tick_index: int):
        for msg in self.outbox:
            self._broadcast(msg, tick_index)
        self.outbox.clear()


def _payload_dict(msg: PeerMessage) -> dict:
    if msg.kind == MessageKind.POSE:
        return {"cell": msg.cell_index}
    if msg.kind == MessageKind.GOAL:
        return {"cells": list(msg.cells)}
    return {"cell": msg.cell_index, "y": msg.observation_y, "c": msg.confidence_c}


def run_trial(config: ScenarioConfig, trial_seed: int) -> TrialResult:
    """One deterministic trial; equal (config, trial_seed) gives equal output."""
    try:
        return TrialRunner(config, trial_seed).run()
    except ActiveSearchError as exc:
        raise ActiveSearchError(f"trial with seed {trial_seed} aborted: {exc}") from exc


def run_batch(config: ScenarioConfig) -> dict:
    """Run config.trials trials with seeds seed+k and aggregate.

    Returns a dict with the per-trial results, a per-time-bin team coverage
    aggregate (mean/min/max across trials), and per-target view counts.
    """
    results = [run_trial(config, config.seed + k) for k in range(config.trials)]
    times = [row.time for row in results[0].team]
    coverage = np.array([[row.pct_unknown for row in res.team] for res in results])
    aggregate = {
        "time": times,
        "mean": coverage.mean(axis=0).tolist(),
        "min": coverage.min(axis=0).tolist(),
        "max": coverage.max(axis=0).tolist(),
    }
    views = {
        f"target_{t.cell}": [res.targets[i].view_count for i, res in _enum_targets(results, t.cell)]
        for t in results[0].targets
    }
    return {"trials": results, "coverage": aggregate, "views": views}


def _enum_targets(results: list[TrialResult], cell: int):
    for res in results:
        for i, t in enumerate(res.targets):
            if t.cell == cell:
                yield i, res
                break

"""Scenario configuration: TOML loading, validation, canonical hashing.

A scenario file is plain TOML with nested tables.  Everything has a default
except the robot list, so minimal configs stay short.  The canonical dict
form feeds both the run manifest and the config hash used for replay.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .comms import ChannelConfig, FusionConfig
from .errors import ConfigError
from .geometry import ZonePolygon, cells_in_zone
from .grid import GridSpec
from .guts import GutsConfig

PLANNER_KINDS = ("guts", "coverage")


@dataclass(frozen=True)
class RobotSpec:
    id: int
    start: tuple[float, float]
    v_max: float = 10.0
    a_max: float = 5.0
    planner: str = "guts"

    def __post_init__(self):
        if self.planner not in PLANNER_KINDS:
            raise ConfigError(f"robot {self.id}: planner must be one of {PLANNER_KINDS}")
        if self.v_max <= 0:
            raise ConfigError(f"robot {self.id}: v_max must be positive")
        if self.a_max <= 0:
            raise ConfigError(f"robot {self.id}: a_max must be positive")


@dataclass(frozen=True)
class TargetSpec:
    cell: int
    confidence: float

    def __post_init__(self):
        if not 0.0 < self.confidence <= 1.0:
            raise ConfigError(f"target at cell {self.cell}: confidence must lie in (0, 1]")


@dataclass(frozen=True)
class PlannerConfig:
    lambda_weight: float = 0.01
    c_plan: float = 1.0
    em_max_iters: int = 100
    em_tol: float = 1e-6

    def guts(self) -> GutsConfig:
        return GutsConfig(lambda_weight=self.lambda_weight, c_plan=self.c_plan)


@dataclass(frozen=True)
class ScenarioConfig:
    grid: GridSpec
    zone: ZonePolygon
    robots: tuple[RobotSpec, ...]
    targets: tuple[TargetSpec, ...] = ()
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    duration: float = 800.0
    tick: float = 0.1
    replan_lead: float = 0.5
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.duration <= 0:
            raise ConfigError("duration must be positive")
        if self.tick <= 0:
            raise ConfigError("tick must be positive")
        if self.replan_lead < 0:
            raise ConfigError("replan_lead must be nonnegative")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.robots:
            raise ConfigError("at least one robot is required")
        ids = [r.id for r in self.robots]
        if len(set(ids)) != len(ids):
            raise ConfigError("robot ids must be unique")
        center_in, sliver = cells_in_zone(self.grid, self.zone)
        zone_cells = center_in | sliver
        for r in self.robots:
            if not self.zone.contains(*r.start):
                raise ConfigError(f"robot {r.id} starts outside the zone")
            if not self.grid.contains_point(*r.start):
                raise ConfigError(f"robot {r.id} starts outside the grid")
        for t in self.targets:
            if not 0 <= t.cell < self.grid.num_cells:
                raise ConfigError(f"target cell {t.cell} outside the grid")
            if t.cell not in zone_cells:
                raise ConfigError(f"target cell {t.cell} outside the zone")

    def to_dict(self) -> dict:
        """Canonical plain-type form used for manifests and hashing."""
        return {
            "grid": {
                "width_cells": self.grid.width_cells,
                "height_cells": self.grid.height_cells,
                "cell_size": self.grid.cell_size,
                "origin": list(self.grid.origin),
            },
            "zone": {"vertices": [list(v) for v in self.zone.vertices]},
            "robots": [
                {
                    "id": r.id,
                    "start": list(r.start),
                    "v_max": r.v_max,
                    "a_max": r.a_max,
                    "planner": r.planner,
                }
                for r in self.robots
            ],
            "targets": [{"cell": t.cell, "confidence": t.confidence} for t in self.targets],
            "channel": {
                "enabled": self.channel.enabled,
                "drop_probability": self.channel.drop_probability,
                "latency": self.channel.latency,
            },
            "fusion": {
                "c_peer_pose": self.fusion.c_peer_pose,
                "c_goal": self.fusion.c_goal,
                "y_empty": self.fusion.y_empty,
            },
            "planner": {
                "lambda": self.planner.lambda_weight,
                "c_plan": self.planner.c_plan,
                "em_max_iters": self.planner.em_max_iters,
                "em_tol": self.planner.em_tol,
            },
            "sim": {
                "duration": self.duration,
                "tick": self.tick,
                "replan_lead": self.replan_lead,
                "trials": self.trials,
                "seed": self.seed,
            },
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _get(table: dict, key: str, default=None):
    return table[key] if key in table else default


def from_dict(raw: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from plain nested dicts."""
    try:
        g = raw["grid"]
        grid = GridSpec(
            width_cells=int(g["width_cells"]),
            height_cells=int(g["height_cells"]),
            cell_size=float(_get(g, "cell_size", 15.0)),
            origin=tuple(float(v) for v in _get(g, "origin", (0.0, 0.0))),
        )
    except KeyError as exc:
        raise ConfigError(f"grid table missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid grid table: {exc}") from exc

    zone_table = _get(raw, "zone")
    if zone_table and "vertices" in zone_table:
        try:
            zone = ZonePolygon.from_points(zone_table["vertices"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid zone: {exc}") from exc
    else:
        ox, oy = grid.origin
        w = grid.width_cells * grid.cell_size
        h = grid.height_cells * grid.cell_size
        zone = ZonePolygon.from_points([(ox, oy), (ox + w, oy), (ox + w, oy + h), (ox, oy + h)])

    robots_raw = _get(raw, "robots", [])
    robots = []
    for r in robots_raw:
        try:
            robots.append(
                RobotSpec(
                    id=int(r["id"]),
                    start=tuple(float(v) for v in r["start"]),
                    v_max=float(_get(r, "v_max", 10.0)),
                    a_max=float(_get(r, "a_max", 5.0)),
                    planner=str(_get(r, "planner", "guts")),
                )
            )
        except KeyError as exc:
            raise ConfigError(f"robot table missing key {exc}") from exc

    targets = []
    for t in _get(raw, "targets", []):
        try:
            targets.append(TargetSpec(cell=int(t["cell"]), confidence=float(t["confidence"])))
        except KeyError as exc:
            raise ConfigError(f"target table missing key {exc}") from exc

    ch = _get(raw, "channel", {})
    try:
        channel = ChannelConfig(
            enabled=bool(_get(ch, "enabled", False)),
            drop_probability=float(_get(ch, "drop_probability", 0.0)),
            latency=float(_get(ch, "latency", 0.0)),
        )
        fu = _get(raw, "fusion", {})
        fusion = FusionConfig(
            c_peer_pose=float(_get(fu, "c_peer_pose", 1.0)),
            c_goal=float(_get(fu, "c_goal", 0.5)),
            y_empty=float(_get(fu, "y_empty", 0.0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    pl = _get(raw, "planner", {})
    planner = PlannerConfig(
        lambda_weight=float(_get(pl, "lambda", 0.01)),
        c_plan=float(_get(pl, "c_plan", 1.0)),
        em_max_iters=int(_get(pl, "em_max_iters", 100)),
        em_tol=float(_get(pl, "em_tol", 1e-6)),
    )

    sim = _get(raw, "sim", {})
    return ScenarioConfig(
        grid=grid,
        zone=zone,
        robots=tuple(robots),
        targets=tuple(targets),
        channel=channel,
        fusion=fusion,
        planner=planner,
        duration=float(_get(sim, "duration", 800.0)),
        tick=float(_get(sim, "tick", 0.1)),
        replan_lead=float(_get(sim, "replan_lead", 0.5)),
        trials=int(_get(sim, "trials", 1)),
        seed=int(_get(sim, "seed", 0)),
    )


def load_config(path) -> ScenarioConfig:
    """Parse a TOML scenario file into a validated ScenarioConfig."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        with open(p, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {p}: {exc}") from exc
    return from_dict(raw)

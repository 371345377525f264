"""Inter-robot channel model and message fusion.

Robots exchange three message kinds: their own position, the cells of a
newly adopted goal path, and target detections.  Each delivered message is
folded into the receiver's dataset as ordinary sensing rows, so peer
information and self-sensing flow through the same posterior update.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .sensing import RecordKind, SensingDataset, SensingRecord

DEFAULT_C_PEER_POSE = 1.0
DEFAULT_C_GOAL = 0.5
DEFAULT_Y_EMPTY = 0.0


class MessageKind(str, Enum):
    POSE = "Pose"
    GOAL = "Goal"
    TRACK = "Track"


@dataclass(frozen=True)
class PeerMessage:
    """One broadcast unit.  Payload shape depends on kind:
    Pose -> single cell index; Goal -> ordered cell index tuple;
    Track -> (cell index, observation_y, confidence_c)."""

    kind: MessageKind
    sender: int
    timestamp: float
    cell_index: int | None = None
    cells: tuple[int, ...] | None = None
    observation_y: float | None = None
    confidence_c: float | None = None

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError("timestamp must be nonnegative")
        if self.kind == MessageKind.POSE:
            if self.cell_index is None:
                raise ValueError("Pose message needs a cell index")
        elif self.kind == MessageKind.GOAL:
            if not self.cells:
                raise ValueError("Goal message needs a non-empty cell list")
        elif self.kind == MessageKind.TRACK:
            if self.cell_index is None or self.observation_y is None:
                raise ValueError("Track message needs cell and observation")
            if self.confidence_c is None or self.confidence_c <= 0:
                raise ValueError("Track confidence must be positive")


@dataclass(frozen=True)
class ChannelConfig:
    enabled: bool = False
    drop_probability: float = 0.0
    latency: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError("drop_probability must lie in [0, 1]")
        if self.latency < 0:
            raise ValueError("latency must be nonnegative")


@dataclass(frozen=True)
class FusionConfig:
    c_peer_pose: float = DEFAULT_C_PEER_POSE
    c_goal: float = DEFAULT_C_GOAL
    y_empty: float = DEFAULT_Y_EMPTY

    def __post_init__(self):
        if self.c_peer_pose <= 0 or self.c_goal <= 0:
            raise ValueError("fusion confidences must be positive")


def fuse_message(
    dataset: SensingDataset,
    msg: PeerMessage,
    cfg: FusionConfig | None = None,
) -> SensingDataset:
    """Append the rows a delivered message implies, in payload order.

    Pose marks one cell as swept by the peer; Goal marks each planned cell
    at reduced confidence; Track carries the sender's reported observation
    and confidence verbatim.
    """
    if cfg is None:
        cfg = FusionConfig()
    if msg.kind == MessageKind.POSE:
        dataset.append(
            SensingRecord(
                cell_index=msg.cell_index,
                observation_y=cfg.y_empty,
                confidence_c=cfg.c_peer_pose,
                source_robot=msg.sender,
                kind=RecordKind.PEER_POSITION,
            )
        )
    elif msg.kind == MessageKind.GOAL:
        for m in msg.cells:
            dataset.append(
                SensingRecord(
                    cell_index=m,
                    observation_y=cfg.y_empty,
                    confidence_c=cfg.c_goal,
                    source_robot=msg.sender,
                    kind=RecordKind.PEER_GOAL_CELL,
                )
            )
    elif msg.kind == MessageKind.TRACK:
        dataset.append(
            SensingRecord(
                cell_index=msg.cell_index,
                observation_y=msg.observation_y,
                confidence_c=msg.confidence_c,
                source_robot=msg.sender,
                kind=RecordKind.PEER_DETECTION,
            )
        )
    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(f"unknown message kind {msg.kind}")
    return dataset


@dataclass
class _QueuedMessage:
    message: PeerMessage
    dropped: bool


class MessageQueue:
    """Per-receiver queue applying drop and latency exactly once per message.

    The drop decision is drawn the moment a message is enqueued, so delivery
    results do not depend on how often or when deliver() is polled.
    """

    def __init__(self, cfg: ChannelConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.rng = rng
        self._pending: list[_QueuedMessage] = []

    def push(self, msg: PeerMessage) -> bool:
        """Enqueue; returns False if the channel dropped the message."""
        if not self.cfg.enabled:
            return False
        dropped = bool(self.rng.random() < self.cfg.drop_probability)
        self._pending.append(_QueuedMessage(msg, dropped))
        return not dropped

    def deliver(self, now: float) -> list[PeerMessage]:
        """All surviving messages due by `now`, sorted by (timestamp, sender)."""
        if not self.cfg.enabled:
            self._pending.clear()
            return []
        due: list[PeerMessage] = []
        keep: list[_QueuedMessage] = []
        for qm in self._pending:
            if qm.message.timestamp + self.cfg.latency <= now:
                if not qm.dropped:
                    due.append(qm.message)
            else:
                keep.append(qm)
        self._pending = keep
        due.sort(key=lambda m: (m.timestamp, m.sender))
        return due


def deliver(
    queue: list[PeerMessage],
    cfg: ChannelConfig,
    now: float,
    rng: np.random.Generator,
) -> list[PeerMessage]:
    """One-shot channel application to a message list.

    Disabled channel delivers nothing.  Each message is independently
    dropped with drop_probability; survivors whose timestamp + latency has
    passed are returned sorted by (timestamp, sender).
    """
    if not cfg.enabled:
        return []
    delivered = []
    for msg in queue:
        dropped = bool(rng.random() < cfg.drop_probability)
        if not dropped and msg.timestamp + cfg.latency <= now:
            delivered.append(msg)
    delivered.sort(key=lambda m: (m.timestamp, m.sender))
    return delivered

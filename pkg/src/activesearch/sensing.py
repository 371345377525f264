"""Sensing records and the append-only dataset backing the belief."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCell, NonPositiveConfidence
from .grid import GridSpec


class RecordKind(enum.Enum):
    SELF_POSITION = "SelfPosition"
    SELF_DETECTION = "SelfDetection"
    PEER_POSITION = "PeerPosition"
    PEER_GOAL_CELL = "PeerGoalCell"
    PEER_DETECTION = "PeerDetection"


@dataclass(frozen=True)
class SensingRecord:
    """One one-hot observation: a cell index, a scalar measurement, and a confidence.

    The confidence plays the role of an observation precision: the implied
    noise variance is 1 / confidence_c, so confidence_c must be positive.
    """

    cell_index: int
    observation_y: float
    confidence_c: float
    source_robot: int
    kind: RecordKind

    def __post_init__(self):
        if self.confidence_c <= 0:
            raise NonPositiveConfidence(f"confidence {self.confidence_c} must be > 0")


class SensingDataset:
    """Ordered, append-only list of sensing records.

    Keeps per-cell sufficient statistics incrementally so the belief update
    never re-scans the record list:

    - weight_sums[m]   = sum of confidences of records touching cell m
    - weighted_obs[m]  = sum of confidence * observation over those records
    """

    def __init__(self, grid: GridSpec, records=None):
        self.grid = grid
        self._records: list[SensingRecord] = []
        self._weight_sums = np.zeros(grid.num_cells)
        self._weighted_obs = np.zeros(grid.num_cells)
        self._touched = np.zeros(grid.num_cells, dtype=bool)
        if records:
            for rec in records:
                self.append(rec)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    @property
    def records(self) -> tuple[SensingRecord, ...]:
        return tuple(self._records)

    def append(self, record: SensingRecord) -> None:
        if not (0 <= record.cell_index < self.grid.num_cells):
            raise InvalidCell(f"cell index {record.cell_index} outside grid with {self.grid.num_cells} cells")
        self._records.append(record)
        m = record.cell_index
        self._weight_sums[m] += record.confidence_c
        self._weighted_obs[m] += record.confidence_c * record.observation_y
        self._touched[m] = True

    def extend(self, records) -> None:
        for rec in records:
            self.append(rec)

    def copy(self) -> "SensingDataset":
        out = SensingDataset(self.grid)
        out._records = list(self._records)
        out._weight_sums = self._weight_sums.copy()
        out._weighted_obs = self._weighted_obs.copy()
        out._touched = self._touched.copy()
        return out

    def weight_sums(self) -> np.ndarray:
        """Per-cell sum of observation precisions (read-only view)."""
        return self._weight_sums

    def weighted_observations(self) -> np.ndarray:
        """Per-cell precision-weighted observation sums (read-only view)."""
        return self._weighted_obs

    def touched_mask(self) -> np.ndarray:
        return self._touched

    def known_cells(self) -> set[int]:
        return set(np.flatnonzero(self._touched).tolist())

    def design_matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Materialize the stacked one-hot rows, observations, and confidences.

        Returns (X, y, c) with X of shape (n_records, M).  Intended for
        small problems and cross-checks; the belief update itself uses the
        incremental per-cell sums.
        """
        n = len(self._records)
        X = np.zeros((n, self.grid.num_cells))
        y = np.zeros(n)
        c = np.zeros(n)
        for i, rec in enumerate(self._records):
            X[i, rec.cell_index] = 1.0
            y[i] = rec.observation_y
            c[i] = rec.confidence_c
        return X, y, c

"""Greedy coverage baseline.

Picks the unvisited goal cell whose approach sweeps the most unvisited
cells, breaking ties toward the lowest flattened goal index, and halts once
every center-in-zone cell has been visited.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .actions import CandidateAction, enumerate_candidates
from .errors import InvalidCell
from .geometry import ZonePolygon, cells_in_zone
from .grid import GridSpec


class Done:
    """Sentinel returned once all center-in-zone cells are visited."""

    def __repr__(self):
        return "Done"

    def __eq__(self, other):
        return isinstance(other, Done)

    def __hash__(self):
        return hash(Done)


DONE = Done()


@dataclass
class VisitedMask:
    """Monotone record of which zone cells a robot has visited."""

    grid: GridSpec
    allowed: frozenset[int]
    _mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._mask = np.zeros(self.grid.num_cells, dtype=bool)

    @classmethod
    def for_zone(cls, grid: GridSpec, zone: ZonePolygon) -> "VisitedMask":
        center_in, sliver = cells_in_zone(grid, zone)
        return cls(grid=grid, allowed=frozenset(center_in | sliver))

    def mark(self, cell_index: int) -> bool:
        """Mark a zone cell visited; returns True if it was new.
        Cells outside the zone are rejected."""
        if cell_index not in self.allowed:
            raise InvalidCell(f"cell {cell_index} is not a zone cell")
        was_new = not self._mask[cell_index]
        self._mask[cell_index] = True
        return was_new

    def mark_traversed(self, cells) -> int:
        """Mark every zone cell in an iterable; non-zone cells are skipped
        (a traversal may clip a corner outside the zone).  Returns the
        number of newly visited cells."""
        new = 0
        for m in cells:
            if m in self.allowed and not self._mask[m]:
                self._mask[m] = True
                new += 1
        return new

    def is_visited(self, cell_index: int) -> bool:
        return bool(self._mask[cell_index])

    def visited_count(self) -> int:
        return int(self._mask.sum())

    def visited_cells(self) -> set[int]:
        return set(np.flatnonzero(self._mask).tolist())

    def copy(self) -> "VisitedMask":
        dup = VisitedMask(grid=self.grid, allowed=self.allowed)
        dup._mask = self._mask.copy()
        return dup


def select_coverage_action(
    visited: VisitedMask,
    grid: GridSpec,
    zone: ZonePolygon,
    position,
) -> CandidateAction | Done:
    """Greedy most-new-cells goal choice over unvisited center-in cells."""
    center_in, _ = cells_in_zone(grid, zone)
    unvisited_goals = [m for m in sorted(center_in) if not visited.is_visited(m)]
    if not unvisited_goals:
        return DONE
    candidates = enumerate_candidates(grid, zone, position)
    by_goal = {c.goal_cell: c for c in candidates}
    best: CandidateAction | None = None
    best_new = -1
    for goal in unvisited_goals:
        cand = by_goal[goal]
        new_count = sum(
            1 for m in cand.traversed_cells if m in visited.allowed and not visited.is_visited(m)
        )
        if new_count > best_new:
            best = cand
            best_new = new_count
    return best

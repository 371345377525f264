"""Candidate action enumeration for the samplers.

A candidate is a straight run from the robot's position to the center of a
zone cell.  Because the zone is convex, the whole segment stays inside it,
so every traversed cell is available for sensing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoCandidates, OutOfBounds
from .geometry import ZonePolygon, cells_in_zone, supercover_trace
from .grid import GridSpec
from .sensing import RecordKind, SensingRecord


@dataclass(frozen=True)
class CandidateAction:
    """One evaluable goal choice: the goal cell, the cells swept on the way
    there, and the sensing rows the planner pretends to collect."""

    goal_cell: int
    goal_point: tuple[float, float]
    start_point: tuple[float, float]
    traversed_cells: tuple[int, ...]
    planned_rows: tuple[SensingRecord, ...] = field(repr=False)


def enumerate_candidates(
    grid: GridSpec,
    zone: ZonePolygon,
    position,
    c_plan: float = 1.0,
    robot_id: int = 0,
) -> list[CandidateAction]:
    """One candidate per center-in-zone cell, ordered by flattened cell index.

    Raises NoCandidates when the zone contains no cell centers and
    OutOfBounds when the robot position lies outside the zone.
    """
    px, py = float(position[0]), float(position[1])
    if not zone.contains(px, py):
        raise OutOfBounds(f"robot position ({px}, {py}) outside zone")
    center_in, _ = cells_in_zone(grid, zone)
    if not center_in:
        raise NoCandidates("zone contains no cell centers")
    candidates = []
    for goal_cell in sorted(center_in):
        gx, gy = grid.cell_center(goal_cell)
        trace = supercover_trace(grid, (px, py), (gx, gy))
        rows = tuple(
            SensingRecord(
                cell_index=m,
                observation_y=0.0,
                confidence_c=c_plan,
                source_robot=robot_id,
                kind=RecordKind.SELF_POSITION,
            )
            for m in trace
        )
        candidates.append(
            CandidateAction(
                goal_cell=goal_cell,
                goal_point=(gx, gy),
                start_point=(px, py),
                traversed_cells=tuple(trace),
                planned_rows=rows,
            )
        )
    return candidates

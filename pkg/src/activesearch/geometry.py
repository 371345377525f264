"""Zone polygons and grid/segment geometry.

The traversal model is supercover: a segment touches every cell whose closed
square it intersects, including cells grazed at a single corner.  A
corner-touch tolerance of 1e-9 m makes tie handling deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateZone, OutOfBounds
from .grid import GridSpec

CORNER_TOL = 1e-9


@dataclass(frozen=True)
class ZonePolygon:
    """Convex, counter-clockwise polygon bounding the searchable area."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("zone polygon needs at least 3 vertices")
        if self.area() <= 0:
            raise ValueError("zone polygon must be counter-clockwise with nonzero area")
        v = np.asarray(self.vertices)
        edges = np.roll(v, -1, axis=0) - v
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        if np.any(cross < -CORNER_TOL):
            raise ValueError("zone polygon must be convex")

    @classmethod
    def from_points(cls, points) -> "ZonePolygon":
        return cls(tuple((float(x), float(y)) for x, y in points))

    def area(self) -> float:
        v = np.asarray(self.vertices)
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def contains(self, x: float, y: float, tol: float = CORNER_TOL) -> bool:
        """Point-in-polygon with the boundary counted as inside."""
        v = np.asarray(self.vertices)
        nxt = np.roll(v, -1, axis=0)
        cross = (nxt[:, 0] - v[:, 0]) * (y - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (x - v[:, 0])
        return bool(np.all(cross >= -tol))

    def bounds(self) -> tuple[float, float, float, float]:
        v = np.asarray(self.vertices)
        return (float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max()))


def _box_overlaps_polygon(zone: ZonePolygon, box, tol: float = CORNER_TOL) -> bool:
    """Closed-set intersection test (separating axis) between an axis-aligned
    box (xmin, ymin, xmax, ymax) and a convex polygon."""
    xmin, ymin, xmax, ymax = box
    verts = np.asarray(zone.vertices)
    # box axes
    if verts[:, 0].max() < xmin - tol or verts[:, 0].min() > xmax + tol:
        return False
    if verts[:, 1].max() < ymin - tol or verts[:, 1].min() > ymax + tol:
        return False
    # polygon edge normals
    corners = np.array([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]])
    nxt = np.roll(verts, -1, axis=0)
    edges = nxt - verts
    normals = np.stack([-edges[:, 1], edges[:, 0]], axis=1)  # inward for CCW
    for n, v in zip(normals, verts):
        poly_proj = (verts - v) @ n
        box_proj = (corners - v) @ n
        if poly_proj.max() < box_proj.min() - tol or poly_proj.min() > box_proj.max() + tol:
            return False
    return True


def cells_in_zone(grid: GridSpec, zone: ZonePolygon) -> tuple[set[int], set[int]]:
    """Split grid cells into center-in-zone cells and sliver cells.

    Center-in: the cell center is inside the polygon (boundary counts).
    Sliver: the cell square intersects the polygon but its center is outside.
    Cells with no intersection at all are in neither set.
    """
    cell_area = grid.cell_size**2
    if zone.area() < cell_area:
        raise DegenerateZone(f"zone area {zone.area():.3f} smaller than one cell ({cell_area:.3f})")
    center_in: set[int] = set()
    sliver: set[int] = set()
    zx0, zy0, zx1, zy1 = zone.bounds()
    ox, oy = grid.origin
    col_lo = max(0, int(np.floor((zx0 - ox) / grid.cell_size)) - 1)
    col_hi = min(grid.width_cells - 1, int(np.ceil((zx1 - ox) / grid.cell_size)))
    row_lo = max(0, int(np.floor((zy0 - oy) / grid.cell_size)) - 1)
    row_hi = min(grid.height_cells - 1, int(np.ceil((zy1 - oy) / grid.cell_size)))
    for row in range(row_lo, row_hi + 1):
        for col in range(col_lo, col_hi + 1):
            m = grid.flatten(col, row)
            cx, cy = grid.cell_center(m)
            if zone.contains(cx, cy):
                center_in.add(m)
            elif _box_overlaps_polygon(zone, grid.cell_bounds(m)):
                sliver.add(m)
    return center_in, sliver


def clip_segment_to_zone(zone: ZonePolygon, p0, p1):
    """Clip segment p0->p1 to the convex zone; returns (q0, q1) or None."""
    verts = np.asarray(zone.vertices)
    nxt = np.roll(verts, -1, axis=0)
    edges = nxt - verts
    normals = np.stack([-edges[:, 1], edges[:, 0]], axis=1)  # inward
    p0 = np.asarray(p0, dtype=float)
    d = np.asarray(p1, dtype=float) - p0
    t_lo, t_hi = 0.0, 1.0
    for n, v in zip(normals, verts):
        denom = float(n @ d)
        num = float(n @ (p0 - v))  # >= 0 means inside this half-plane
        if abs(denom) < 1e-15:
            if num < -CORNER_TOL:
                return None
            continue
        t = -num / denom
        if denom > 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo > t_hi:
            return None
    return tuple(p0 + t_lo * d), tuple(p0 + t_hi * d)


def supercover_trace(grid: GridSpec, start, end) -> list[int]:
    """All cells whose closed square the segment intersects, ordered start->end.

    Cells are ordered by the parameter at which the segment first touches
    them; simultaneous touches (corner grazes) break ties by flattened index.
    The trace is computed in a canonical orientation so that reversing the
    endpoints exactly reverses the cell order.
    """
    sx, sy = float(start[0]), float(start[1])
    ex, ey = float(end[0]), float(end[1])
    if not grid.contains_point(sx, sy):
        raise OutOfBounds(f"start {start} outside grid")
    if not grid.contains_point(ex, ey):
        raise OutOfBounds(f"end {end} outside grid")

    flipped = (ex, ey) < (sx, sy)
    if flipped:
        sx, sy, ex, ey = ex, ey, sx, sy

    ox, oy = grid.origin
    cs = grid.cell_size
    col_lo = max(0, int(np.floor((min(sx, ex) - CORNER_TOL - ox) / cs)))
    col_hi = min(grid.width_cells - 1, int(np.floor((max(sx, ex) + CORNER_TOL - ox) / cs)))
    row_lo = max(0, int(np.floor((min(sy, ey) - CORNER_TOL - oy) / cs)))
    row_hi = min(grid.height_cells - 1, int(np.floor((max(sy, ey) + CORNER_TOL - oy) / cs)))

    cols = np.arange(col_lo, col_hi + 1)
    rows = np.arange(row_lo, row_hi + 1)
    cgrid, rgrid = np.meshgrid(cols, rows)
    cgrid = cgrid.ravel()
    rgrid = rgrid.ravel()

    x0 = ox + cgrid * cs - CORNER_TOL
    x1 = ox + (cgrid + 1) * cs + CORNER_TOL
    y0 = oy + rgrid * cs - CORNER_TOL
    y1 = oy + (rgrid + 1) * cs + CORNER_TOL

    dx = ex - sx
    dy = ey - sy
    with np.errstate(divide="ignore", invalid="ignore"):
        if dx != 0.0:
            tx_a = (x0 - sx) / dx
            tx_b = (x1 - sx) / dx
            tx_lo = np.minimum(tx_a, tx_b)
            tx_hi = np.maximum(tx_a, tx_b)
        else:
            inside = (x0 <= sx) & (sx <= x1)
            tx_lo = np.where(inside, -np.inf, np.inf)
            tx_hi = np.where(inside, np.inf, -np.inf)
        if dy != 0.0:
            ty_a = (y0 - sy) / dy
            ty_b = (y1 - sy) / dy
            ty_lo = np.minimum(ty_a, ty_b)
            ty_hi = np.maximum(ty_a, ty_b)
        else:
            inside = (y0 <= sy) & (sy <= y1)
            ty_lo = np.where(inside, -np.inf, np.inf)
            ty_hi = np.where(inside, np.inf, -np.inf)

    t_enter = np.maximum(np.maximum(tx_lo, ty_lo), 0.0)
    t_exit = np.minimum(np.minimum(tx_hi, ty_hi), 1.0)
    hit = t_enter <= t_exit
    if not np.any(hit):
        # start==end confined to one cell, or numerical corner case
        m = grid.cell_of_point(sx, sy)
        return [m]

    flat = rgrid[hit] * grid.width_cells + cgrid[hit]
    order = np.lexsort((flat, t_enter[hit]))
    trace = flat[order].tolist()
    if flipped:
        trace.reverse()
    return trace

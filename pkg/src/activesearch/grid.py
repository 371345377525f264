"""Discrete world grid: square cells, row-major flattening, world/cell transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfBounds


@dataclass(frozen=True)
class GridSpec:
    """A rectangular grid of square cells over the world plane.

    Cells are indexed by (col, row) with the origin at the lower-left corner
    of cell (0, 0).  The flattened index is row-major: m = row * width + col.
    """

    width_cells: int
    height_cells: int
    cell_size: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.width_cells < 1 or self.height_cells < 1:
            raise ValueError("grid must be at least 1x1")
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")

    @property
    def num_cells(self) -> int:
        return self.width_cells * self.height_cells

    def flatten(self, col: int, row: int) -> int:
        if not (0 <= col < self.width_cells and 0 <= row < self.height_cells):
            raise OutOfBounds(f"cell ({col}, {row}) outside {self.width_cells}x{self.height_cells} grid")
        return row * self.width_cells + col

    def unflatten(self, index: int) -> tuple[int, int]:
        if not (0 <= index < self.num_cells):
            raise OutOfBounds(f"cell index {index} outside [0, {self.num_cells})")
        return index % self.width_cells, index // self.width_cells

    def cell_center(self, index: int) -> tuple[float, float]:
        col, row = self.unflatten(index)
        ox, oy = self.origin
        return (ox + (col + 0.5) * self.cell_size, oy + (row + 0.5) * self.cell_size)

    def cell_bounds(self, index: int) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) of the cell's closed square."""
        col, row = self.unflatten(index)
        ox, oy = self.origin
        x0 = ox + col * self.cell_size
        y0 = oy + row * self.cell_size
        return (x0, y0, x0 + self.cell_size, y0 + self.cell_size)

    def cell_of_point(self, x: float, y: float) -> int:
        """Flattened index of the cell containing (x, y); on-boundary points
        resolve to the higher cell except at the top/right grid edge."""
        ox, oy = self.origin
        col = int(math.floor((x - ox) / self.cell_size))
        row = int(math.floor((y - oy) / self.cell_size))
        # points exactly on the outer edge belong to the last cell
        if col == self.width_cells and abs((x - ox) - self.width_cells * self.cell_size) < 1e-12 * max(1.0, abs(x)):
            col -= 1
        if row == self.height_cells and abs((y - oy) - self.height_cells * self.cell_size) < 1e-12 * max(1.0, abs(y)):
            row -= 1
        return self.flatten(col, row)

    def contains_point(self, x: float, y: float) -> bool:
        ox, oy = self.origin
        return (ox <= x <= ox + self.width_cells * self.cell_size
                and oy <= y <= oy + self.height_cells * self.cell_size)

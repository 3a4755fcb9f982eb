"""Pixel grids over a planar window, and PGM emission.

The window is an axis-aligned rectangle given by center and extent.  Pixels
are indexed row-major with row 0 at the top (y max); the left and top edges
are inclusive, the right and bottom exclusive.  Points outside the window
(and the point at infinity, which has no planar position) are counted in a
separate overflow tally rather than drawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, slots=True)
class Window:
    cx: float
    cy: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError("window extent must be positive")

    @property
    def x_min(self) -> float:
        return self.cx - self.width / 2

    @property
    def x_max(self) -> float:
        return self.cx + self.width / 2

    @property
    def y_min(self) -> float:
        return self.cy - self.height / 2

    @property
    def y_max(self) -> float:
        return self.cy + self.height / 2


@dataclass(frozen=True, slots=True)
class Resolution:
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("resolution must be at least 1x1")


@dataclass(slots=True)
class RasterGrid:
    window: Window
    resolution: Resolution
    cells: np.ndarray = field(default=None)  # (height, width) occupancy counts
    overflow: int = 0

    def __post_init__(self) -> None:
        shape = (self.resolution.height, self.resolution.width)
        if self.cells is None:
            self.cells = np.zeros(shape, dtype=np.int64)
        else:
            self.cells = np.asarray(self.cells, dtype=np.int64)
            if self.cells.shape != shape:
                raise ValueError(f"cells shape {self.cells.shape} != resolution {shape}")
        if (self.cells < 0).any():
            raise ValueError("negative occupancy count")

    def occupied(self) -> np.ndarray:
        return self.cells > 0

    def cell_size(self) -> tuple[float, float]:
        return (
            self.window.width / self.resolution.width,
            self.window.height / self.resolution.height,
        )


def point_indices(
    points: np.ndarray, window: Window, resolution: Resolution
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(rows, cols, inside-mask) for an array of finite complex points."""
    z = np.asarray(points, dtype=np.complex128)
    fx = (z.real - window.x_min) / window.width * resolution.width
    fy = (window.y_max - z.imag) / window.height * resolution.height
    cols = np.floor(fx).astype(np.int64)
    rows = np.floor(fy).astype(np.int64)
    inside = (
        np.isfinite(fx)
        & np.isfinite(fy)
        & (cols >= 0)
        & (cols < resolution.width)
        & (rows >= 0)
        & (rows < resolution.height)
    )
    return rows, cols, inside


def rasterize_points(
    points: np.ndarray, n_infinite: int, window: Window, resolution: Resolution
) -> RasterGrid:
    """Accumulate occupancy counts; off-window points and infinity overflow."""
    grid = RasterGrid(window, resolution)
    rows, cols, inside = point_indices(points, window, resolution)
    np.add.at(grid.cells, (rows[inside], cols[inside]), 1)
    grid.overflow = int(n_infinite + (~inside).sum())
    return grid


def to_pgm_bytes(grid: RasterGrid) -> bytes:
    """Binary 8-bit PGM (P5), occupancy counts log-scaled to 0..255."""
    counts = grid.cells
    peak = counts.max()
    if peak > 0:
        scaled = np.round(255.0 * np.log1p(counts) / math.log1p(float(peak)))
        pixels = scaled.astype(np.uint8)
    else:
        pixels = np.zeros_like(counts, dtype=np.uint8)
    header = f"P5\n{grid.resolution.width} {grid.resolution.height}\n255\n".encode("ascii")
    return header + pixels.tobytes()

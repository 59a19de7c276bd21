"""Node grid over the site and per-mover walkability masks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .geometry import OrientedRect, Pose, separating_axes
from .scene import Bounds, Scene

# Blocked-node layer: flat bool array in row-major node order, True = unwalkable.
BlockedMask = np.ndarray

# Absorbs float noise in extent/pitch so exactly divisible bounds stay exact.
_CEIL_SLACK = 1e-9


class SnapError(RuntimeError):
    """No walkable node near a pose."""

    def __init__(self, message: str, which: str = "start"):
        super().__init__(message)
        self.which = which


@dataclass(frozen=True)
class Grid:
    origin_x: float
    origin_y: float
    radius: float
    cols: int
    rows: int

    @property
    def pitch(self) -> float:
        return 2.0 * self.radius

    @property
    def n_nodes(self) -> int:
        return self.cols * self.rows

    def index(self, i: int, j: int) -> int:
        return j * self.cols + i

    def ij(self, idx: int) -> tuple[int, int]:
        return idx % self.cols, idx // self.cols

    def center(self, idx: int) -> tuple[float, float]:
        i, j = self.ij(idx)
        return (self.origin_x + (i + 0.5) * self.pitch, self.origin_y + (j + 0.5) * self.pitch)

    @cached_property
    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Node center coordinates as two flat arrays (row-major)."""
        i = np.arange(self.cols, dtype=float)
        j = np.arange(self.rows, dtype=float)
        xs = self.origin_x + (i + 0.5) * self.pitch
        ys = self.origin_y + (j + 0.5) * self.pitch
        gx, gy = np.meshgrid(xs, ys)
        return gx.ravel(), gy.ravel()


@dataclass(slots=True)
class GridNode:
    """A* bookkeeping for one node."""

    index: int
    g: float = math.inf
    h: float = 0.0
    parent: Optional[int] = None
    closed: bool = False

    @property
    def f(self) -> float:
        return self.g + self.h


def build_grid(bounds: Bounds, radius: float) -> Grid:
    if not (math.isfinite(radius) and radius > 0):
        raise ValueError(f"grid radius must be positive, got {radius!r}")
    if not (bounds.width > 0 and bounds.height > 0):
        raise ValueError("world bounds have zero area")
    pitch = 2.0 * radius
    cols = max(1, math.ceil(bounds.width / pitch - _CEIL_SLACK))
    rows = max(1, math.ceil(bounds.height / pitch - _CEIL_SLACK))
    return Grid(bounds.min_x, bounds.min_y, radius, cols, rows)


def obstacle_rects(scene: Scene, moving_wall: str | None = None) -> list[tuple[str, OrientedRect]]:
    """Standing walls (except the mover) and static obstacles, inflated by the scene margin."""
    m = scene.inflation_margin
    out = [(w.id, OrientedRect(w.placed_pose, w.footprint.inflated(m)))
           for w in scene.walls if w.id != moving_wall]
    out += [(o.id, OrientedRect(o.pose, o.footprint.inflated(m))) for o in scene.obstacles]
    return out


def occupancy_mask(grid: Grid, scene: Scene, moving_wall: str, yaw: float | None = None) -> BlockedMask:
    """Nodes where the mover, centered there at ``yaw``, would overlap something.

    ``yaw`` defaults to the wall's staging yaw (the transit orientation of a
    removal move). The mover never blocks itself.
    """
    wall = scene.wall(moving_wall)
    if yaw is None:
        yaw = wall.staging_pose.yaw
    xs, ys = grid.centers
    mover = OrientedRect(Pose(0.0, 0.0, yaw), wall.footprint)
    blocked = np.zeros(grid.n_nodes, dtype=bool)
    for _, obs in obstacle_rects(scene, moving_wall):
        dx = obs.pose.x - xs
        dy = obs.pose.y - ys
        hit = np.ones(grid.n_nodes, dtype=bool)
        for (ax, ay), reach in separating_axes(mover, obs):
            hit &= ~(np.abs(dx * ax + dy * ay) > reach)
        blocked |= hit
    return blocked


def snap_to_node(grid: Grid, mask: BlockedMask, x: float, y: float, which: str = "start") -> int:
    """Nearest walkable node: the closest node, else the best of its 8 neighbors.

    Distance ties break toward the lower row-major index.
    """
    fi = min(max(math.floor((x - grid.origin_x) / grid.pitch), 0), grid.cols - 1)
    fj = min(max(math.floor((y - grid.origin_y) / grid.pitch), 0), grid.rows - 1)

    def ring(ci: int, cj: int, include_center: bool) -> list[tuple[float, int]]:
        out = []
        for dj in (-1, 0, 1):
            for di in (-1, 0, 1):
                if di == 0 and dj == 0 and not include_center:
                    continue
                i, j = ci + di, cj + dj
                if 0 <= i < grid.cols and 0 <= j < grid.rows:
                    idx = grid.index(i, j)
                    cx, cy = grid.center(idx)
                    out.append((math.hypot(cx - x, cy - y), idx))
        return sorted(out)

    nearest = ring(fi, fj, include_center=True)[0][1]
    if not mask[nearest]:
        return nearest
    ni, nj = grid.ij(nearest)
    for _, idx in ring(ni, nj, include_center=False):
        if not mask[idx]:
            return idx
    raise SnapError(f"no walkable node near ({x:.3f}, {y:.3f})", which)

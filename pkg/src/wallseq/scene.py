"""Site description: movable walls and static obstacles inside world bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .geometry import Footprint, OrientedRect, Pose, rect_overlap


class SceneError(ValueError):
    """A scene violates one of its structural invariants."""


@dataclass(frozen=True)
class Bounds:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self) -> None:
        vals = (self.min_x, self.min_y, self.max_x, self.max_y)
        if not all(math.isfinite(v) for v in vals):
            raise SceneError(f"bounds must be finite, got {vals}")
        if not (self.max_x > self.min_x and self.max_y > self.min_y):
            raise SceneError(f"bounds have zero area: {vals}")

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    def contains(self, x: float, y: float) -> bool:
        return self.min_x <= x <= self.max_x and self.min_y <= y <= self.max_y


@dataclass(frozen=True)
class Wall:
    id: str
    footprint: Footprint
    placed_pose: Pose
    staging_pose: Pose

    def placed_rect(self) -> OrientedRect:
        return OrientedRect(self.placed_pose, self.footprint)

    def staged_rect(self) -> OrientedRect:
        return OrientedRect(self.staging_pose, self.footprint)


@dataclass(frozen=True)
class Obstacle:
    id: str
    footprint: Footprint
    pose: Pose

    def rect(self) -> OrientedRect:
        return OrientedRect(self.pose, self.footprint)


@dataclass(frozen=True)
class Scene:
    bounds: Bounds
    walls: tuple[Wall, ...]
    obstacles: tuple[Obstacle, ...] = ()
    inflation_margin: float = 0.0
    name: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "walls", tuple(self.walls))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        validate_scene(self)

    @property
    def wall_ids(self) -> list[str]:
        return [w.id for w in self.walls]

    def wall(self, wall_id: str) -> Wall:
        for w in self.walls:
            if w.id == wall_id:
                return w
        raise KeyError(f"unknown wall id {wall_id!r}")

    def without(self, wall_ids: Iterable[str]) -> Scene:
        """Scene with the given walls taken off site."""
        gone = set(wall_ids)
        return Scene(self.bounds, tuple(w for w in self.walls if w.id not in gone),
                     self.obstacles, self.inflation_margin, self.name, self.metadata)

    def min_half_thickness(self) -> float:
        return min((w.footprint.half_thickness for w in self.walls), default=math.inf)


def validate_scene(scene: Scene) -> None:
    if not (math.isfinite(scene.inflation_margin) and scene.inflation_margin >= 0):
        raise SceneError(f"inflation_margin must be >= 0, got {scene.inflation_margin!r}")

    seen: set[str] = set()
    for item in (*scene.walls, *scene.obstacles):
        if item.id in seen:
            raise SceneError(f"duplicate id {item.id!r}")
        seen.add(item.id)

    b = scene.bounds
    for w in scene.walls:
        for label, pose in (("placed_pose", w.placed_pose), ("staging_pose", w.staging_pose)):
            if not b.contains(pose.x, pose.y):
                raise SceneError(f"wall {w.id!r}: {label} ({pose.x}, {pose.y}) lies outside bounds")
    for o in scene.obstacles:
        if not b.contains(o.pose.x, o.pose.y):
            raise SceneError(f"obstacle {o.id!r}: pose ({o.pose.x}, {o.pose.y}) lies outside bounds")

    for a, c in itertools.combinations(scene.walls, 2):
        if rect_overlap(a.placed_rect(), c.placed_rect()):
            raise SceneError(f"placed walls {a.id!r} and {c.id!r} overlap")
        if rect_overlap(a.staged_rect(), c.staged_rect()):
            raise SceneError(f"staging poses of walls {a.id!r} and {c.id!r} overlap")
    for w in scene.walls:
        for o in scene.obstacles:
            if rect_overlap(w.placed_rect(), o.rect()):
                raise SceneError(f"placed wall {w.id!r} overlaps obstacle {o.id!r}")

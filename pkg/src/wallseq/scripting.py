"""Expand an assembly plan into tilt-up construction events."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Literal, NamedTuple, Sequence

from .geometry import segment_distance
from .planner import Plan
from .scene import Scene, Wall

EventKind = Literal["transport", "tilt_up", "place", "install_brace", "verify_angle", "remove_brace"]

DEFAULT_ANGLE_TOLERANCE = 0.5


class WrongDirectionError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    kind: EventKind
    walls: tuple[str, ...]
    angle: float | None = None
    corner: str | None = None
    passed: bool | None = None
    waypoints: tuple[tuple[float, float], ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "walls": list(self.walls)}
        if self.angle is not None:
            out["angle_deg"] = self.angle
            out["corner"] = self.corner
            out["passed"] = self.passed
        if self.waypoints is not None:
            out["waypoints"] = [list(p) for p in self.waypoints]
        return out

    def describe(self) -> str:
        names = " & ".join(self.walls)
        if self.kind == "verify_angle":
            status = "ok" if self.passed else "FAIL"
            return f"verify_angle {names}: {self.angle:.2f} deg [{status}]"
        if self.kind == "transport":
            return f"transport {names} ({len(self.waypoints or ())} waypoints)"
        return f"{self.kind} {names}"


EventScript = list[Event]


class CornerCheck(NamedTuple):
    corner: str
    angle: float
    passed: bool
    walls: tuple[str, str]


def corner_angle(a: Wall, b: Wall) -> float:
    """Absolute yaw difference in degrees, folded into [0, 180]."""
    diff = math.degrees(abs(a.placed_pose.yaw - b.placed_pose.yaw)) % 360.0
    return 360.0 - diff if diff > 180.0 else diff


def are_adjacent(a: Wall, b: Wall) -> bool:
    """End caps within one wall thickness of each other."""
    reach = 2.0 * max(a.footprint.half_thickness, b.footprint.half_thickness)
    return any(segment_distance(p, q) <= reach
               for p in a.placed_rect().end_caps() for q in b.placed_rect().end_caps())


def corner_id(a: Wall, b: Wall) -> str:
    return f"{a.id}|{b.id}"


def check_corner_angles(scene: Scene, tolerance: float = DEFAULT_ANGLE_TOLERANCE,
                        walls: Sequence[str] | None = None) -> list[CornerCheck]:
    chosen = scene.walls if walls is None else [scene.wall(w) for w in walls]
    checks = []
    for a, b in itertools.combinations(chosen, 2):
        if are_adjacent(a, b):
            angle = corner_angle(a, b)
            checks.append(CornerCheck(corner_id(a, b), angle, abs(angle - 90.0) <= tolerance, (a.id, b.id)))
    return checks


def generate_script(plan: Plan, scene: Scene, tolerance: float = DEFAULT_ANGLE_TOLERANCE) -> EventScript:
    if plan.direction != "assembly":
        raise WrongDirectionError("event scripts are generated from assembly plans only")
    events: EventScript = []
    placed: list[Wall] = []
    for move in plan.moves:
        wall = scene.wall(move.wall_id)
        events += [
            Event("transport", (wall.id,), waypoints=move.waypoints),
            Event("tilt_up", (wall.id,)),
            Event("place", (wall.id,)),
            Event("install_brace", (wall.id,)),
        ]
        if placed:
            partner = next((p for p in reversed(placed) if are_adjacent(p, wall)), placed[-1])
            angle = corner_angle(partner, wall)
            events.append(Event("verify_angle", (partner.id, wall.id), angle,
                                corner_id(partner, wall) if are_adjacent(partner, wall) else None,
                                abs(angle - 90.0) <= tolerance))
        placed.append(wall)

    events += [Event("remove_brace", (w.id,)) for w in placed]
    for check in check_corner_angles(scene, tolerance, [w.id for w in placed]):
        events.append(Event("verify_angle", check.walls, check.angle,
                            check.corner, check.passed))
    return events

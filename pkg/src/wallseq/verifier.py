"""Independent checks on plans and on the search itself.

Nothing here reads planner masks: plans are replayed against the raw wall
geometry with a sampled sweep, and ``dijkstra_cost`` re-derives least path
costs with its own neighbor expansion.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Any

from .geometry import OrientedRect, Pose, swept_collides
from .grid import BlockedMask, Grid
from .planner import Plan
from .scene import Scene


@dataclass(frozen=True)
class Violation:
    move_index: int
    segment_index: int
    pose: Pose
    obstacle_id: str


@dataclass(frozen=True)
class VerificationReport:
    plan_id: str
    violations: tuple[Violation, ...]
    sample_step: float
    final_obstacles: tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> str:
        return "clean" if not self.violations else "collisions_found"

    @property
    def collision_count(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict[str, Any]:
        return {
            "plan_id": self.plan_id,
            "verdict": self.verdict,
            "sample_step": self.sample_step,
            "violations": [
                {"move_index": v.move_index, "segment_index": v.segment_index,
                 "pose": {"x": v.pose.x, "y": v.pose.y, "yaw": v.pose.yaw},
                 "obstacle_id": v.obstacle_id}
                for v in self.violations
            ],
            "final_obstacles": list(self.final_obstacles),
        }


def default_sample_step(scene: Scene, radius: float) -> float:
    return min(radius, scene.min_half_thickness()) / 2.0


def verify_plan(scene: Scene, plan: Plan, sample_step: float | None = None) -> VerificationReport:
    """Replay ``plan`` against the evolving set of standing walls.

    Every (move, segment, obstacle) clash is reported once, at its earliest
    sample. Removal moves take their wall off site once done; assembly moves
    leave their wall standing at its target.
    """
    if sample_step is None:
        sample_step = default_sample_step(scene, plan.radius or 1.0)
    if not sample_step > 0:
        raise ValueError(f"sample_step must be positive, got {sample_step!r}")
    known = set(scene.wall_ids)
    for m in plan.moves:
        if m.wall_id not in known:
            raise ValueError(f"plan references unknown wall {m.wall_id!r}")

    planned = {m.wall_id for m in plan.moves}
    standing: dict[str, OrientedRect] = {o.id: o.rect() for o in scene.obstacles}
    for w in scene.walls:
        if plan.direction == "disassembly" or w.id not in planned:
            standing[w.id] = w.placed_rect()

    violations: list[Violation] = []
    for k, move in enumerate(plan.moves):
        mover = OrientedRect(Pose(0.0, 0.0, move.transit_yaw), scene.wall(move.wall_id).footprint)
        standing.pop(move.wall_id, None)
        ids = list(standing)
        rects = [standing[i] for i in ids]
        poses = move.waypoint_poses()
        for s, (a, b) in enumerate(zip(poses, poses[1:])):
            for oid, rect in zip(ids, rects):
                hit = swept_collides(mover, a, b, [rect], sample_step)
                if hit is not None:
                    violations.append(Violation(k, s, hit.pose, oid))
        if plan.direction == "assembly":
            standing[move.wall_id] = OrientedRect(move.target_pose, mover.footprint)

    return VerificationReport(plan.fingerprint(), tuple(violations), sample_step, tuple(sorted(standing)))


def dijkstra_cost(grid: Grid, mask: BlockedMask, start: int, goal: int) -> float | None:
    """Uniform-cost search under the planner's step model; None if unreachable."""
    if mask[start] or mask[goal]:
        raise ValueError("dijkstra endpoints must be walkable")
    straight = grid.pitch
    diagonal = grid.pitch * math.sqrt(2.0)
    dist = {start: 0.0}
    heap = [(0.0, start)]
    done: set[int] = set()
    while heap:
        d, idx = heapq.heappop(heap)
        if idx in done:
            continue
        if idx == goal:
            return d
        done.add(idx)
        i, j = grid.ij(idx)
        for dj in (-1, 0, 1):
            for di in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                ni, nj = i + di, j + dj
                if not (0 <= ni < grid.cols and 0 <= nj < grid.rows):
                    continue
                n = grid.index(ni, nj)
                if mask[n]:
                    continue
                if di and dj:
                    if mask[grid.index(ni, j)] or mask[grid.index(i, nj)]:
                        continue
                    nd = d + diagonal
                else:
                    nd = d + straight
                if nd < dist.get(n, math.inf):
                    dist[n] = nd
                    heapq.heappush(heap, (nd, n))
    return None

"""A* over the node grid and the queue-with-deferral wall scheduler.

Assembly plans are never searched forward: they are removal plans played
backwards.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Any, Literal, NamedTuple, Sequence

from .geometry import Pose
from .grid import BlockedMask, Grid, GridNode, SnapError, occupancy_mask, snap_to_node
from .scene import Scene

Direction = Literal["disassembly", "assembly"]

SQRT2 = math.sqrt(2.0)
# Fixed expansion order: among equal-cost parents the first one found is kept.
NEIGHBORS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1))


class BlockedEndpointError(ValueError):
    """Search started or ended on an unwalkable node."""


class DeadlockError(RuntimeError):
    """A full queue rotation passed without any wall moving."""

    def __init__(self, message: str, stuck: Sequence[str], partial: Plan | None = None):
        super().__init__(message)
        self.stuck = list(stuck)
        self.partial = partial


class PathResult(NamedTuple):
    nodes: list[int]
    cost: float
    expanded: int


def astar(grid: Grid, mask: BlockedMask, start: int, goal: int) -> PathResult | None:
    """Least-cost 8-connected path over walkable nodes, or None if unreachable.

    Diagonal steps may not cut a blocked corner. Among equal f the node with
    lower h is expanded first, then the lower row-major index.
    """
    for name, idx in (("start", start), ("goal", goal)):
        if not 0 <= idx < grid.n_nodes:
            raise IndexError(f"{name} node {idx} outside grid")
        if mask[idx]:
            raise BlockedEndpointError(f"{name} node {idx} is blocked")

    gi, gj = grid.ij(goal)
    pitch = grid.pitch
    steps = [(di, dj, pitch * SQRT2 if di and dj else pitch) for di, dj in NEIGHBORS]

    def heuristic(idx: int) -> float:
        i, j = grid.ij(idx)
        return pitch * math.hypot(i - gi, j - gj)

    nodes: dict[int, GridNode] = {start: GridNode(start, 0.0, heuristic(start))}
    open_heap = [(nodes[start].f, nodes[start].h, start)]
    expanded = 0
    cols, rows = grid.cols, grid.rows

    while open_heap:
        f, h, idx = heapq.heappop(open_heap)
        node = nodes[idx]
        if node.closed or f > node.f:
            continue
        node.closed = True
        expanded += 1
        if idx == goal:
            path = [idx]
            while node.parent is not None:
                path.append(node.parent)
                node = nodes[node.parent]
            path.reverse()
            return PathResult(path, nodes[goal].g, expanded)

        i, j = idx % cols, idx // cols
        for di, dj, step in steps:
            ni, nj = i + di, j + dj
            if not (0 <= ni < cols and 0 <= nj < rows):
                continue
            nidx = nj * cols + ni
            if mask[nidx]:
                continue
            if di and dj and (mask[j * cols + ni] or mask[nj * cols + i]):
                continue
            g = node.g + step
            nb = nodes.get(nidx)
            if nb is None:
                nb = nodes[nidx] = GridNode(nidx, math.inf, heuristic(nidx))
            elif nb.closed or g >= nb.g:
                continue
            nb.g = g
            nb.parent = idx
            heapq.heappush(open_heap, (nb.f, nb.h, nidx))
    return None


@dataclass(frozen=True)
class MovePlan:
    wall_id: str
    start_pose: Pose
    target_pose: Pose
    waypoints: tuple[tuple[float, float], ...]
    nodes: tuple[int, ...]
    path_cost: float
    transit_yaw: float

    def reversed(self) -> MovePlan:
        return replace(self, start_pose=self.target_pose, target_pose=self.start_pose,
                       waypoints=self.waypoints[::-1], nodes=self.nodes[::-1])

    def waypoint_poses(self) -> list[Pose]:
        return [Pose(x, y, self.transit_yaw) for x, y in self.waypoints]


@dataclass(frozen=True)
class Plan:
    direction: Direction
    moves: tuple[MovePlan, ...]
    deferral_log: tuple[tuple[str, str], ...] = ()
    radius: float = 0.0
    initial_order: tuple[str, ...] = field(default=())

    @property
    def order(self) -> list[str]:
        return [m.wall_id for m in self.moves]

    def to_dict(self) -> dict[str, Any]:
        return {
            "direction": self.direction,
            "radius": self.radius,
            "initial_order": list(self.initial_order),
            "order": self.order,
            "moves": [
                {
                    "wall_id": m.wall_id,
                    "start_pose": _pose_dict(m.start_pose),
                    "target_pose": _pose_dict(m.target_pose),
                    "transit_yaw": m.transit_yaw,
                    "path_cost": m.path_cost,
                    "nodes": list(m.nodes),
                    "waypoints": [[x, y] for x, y in m.waypoints],
                }
                for m in self.moves
            ],
            "deferral_log": [{"wall_id": w, "reason": r} for w, r in self.deferral_log],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Plan:
        moves = tuple(
            MovePlan(
                wall_id=m["wall_id"],
                start_pose=_pose_from(m["start_pose"]),
                target_pose=_pose_from(m["target_pose"]),
                waypoints=tuple((float(x), float(y)) for x, y in m["waypoints"]),
                nodes=tuple(int(n) for n in m["nodes"]),
                path_cost=float(m["path_cost"]),
                transit_yaw=float(m["transit_yaw"]),
            )
            for m in data["moves"]
        )
        if data["direction"] not in ("disassembly", "assembly"):
            raise ValueError(f"unknown plan direction {data['direction']!r}")
        return cls(
            direction=data["direction"],
            moves=moves,
            deferral_log=tuple((d["wall_id"], d["reason"]) for d in data.get("deferral_log", [])),
            radius=float(data.get("radius", 0.0)),
            initial_order=tuple(data.get("initial_order", ())),
        )

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _pose_dict(p: Pose) -> dict[str, float]:
    return {"x": p.x, "y": p.y, "yaw": p.yaw}


def _pose_from(d: dict[str, Any]) -> Pose:
    return Pose(float(d["x"]), float(d["y"]), float(d.get("yaw", 0.0)))


def polyline_length(points: Sequence[tuple[float, float]]) -> float:
    return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(points, points[1:]))


def plan_single_move(scene: Scene, wall_id: str, target_pose: Pose, grid: Grid) -> MovePlan | None:
    """Plan one wall from its placed pose to ``target_pose`` against the standing walls.

    Returns None when no path exists. Raises SnapError when either endpoint has
    no walkable node nearby.
    """
    wall = scene.wall(wall_id)
    start_pose = wall.placed_pose
    for label, pose in (("start", start_pose), ("target", target_pose)):
        if not scene.bounds.contains(pose.x, pose.y):
            raise ValueError(f"{label} pose of {wall_id!r} lies outside world bounds")
    yaw = target_pose.yaw
    mask = occupancy_mask(grid, scene, wall_id, yaw=yaw)
    start = snap_to_node(grid, mask, start_pose.x, start_pose.y, which="start")
    goal = snap_to_node(grid, mask, target_pose.x, target_pose.y, which="goal")
    result = astar(grid, mask, start, goal)
    if result is None:
        return None
    waypoints = (start_pose.xy, *(grid.center(n) for n in result.nodes), target_pose.xy)
    return MovePlan(wall_id, start_pose, target_pose, waypoints, tuple(result.nodes),
                    polyline_length(waypoints), yaw)


def _check_order(scene: Scene, order: Sequence[str]) -> None:
    known = set(scene.wall_ids)
    if len(set(order)) != len(order):
        raise ValueError(f"wall order contains duplicates: {list(order)}")
    unknown = [w for w in order if w not in known]
    if unknown:
        raise KeyError(f"unknown wall ids in order: {unknown}")


def plan_disassembly(scene: Scene, initial_order: Sequence[str], grid: Grid) -> Plan:
    """Remove walls in queue order, sending any currently blocked wall to the back.

    A moved wall leaves the site for good. Walls absent from ``initial_order``
    stay standing throughout. Raises DeadlockError after one full rotation
    with no progress.
    """
    _check_order(scene, initial_order)
    queue = deque(initial_order)
    moved: list[str] = []
    moves: list[MovePlan] = []
    log: list[tuple[str, str]] = []
    rotations = 0

    while queue:
        if rotations >= len(queue):
            partial = Plan("disassembly", tuple(moves), tuple(log), grid.radius, tuple(initial_order))
            raise DeadlockError(f"no movable wall among {list(queue)}", list(queue), partial)
        wall_id = queue[0]
        current = scene.without(moved)
        try:
            move = plan_single_move(current, wall_id, scene.wall(wall_id).staging_pose, grid)
            reason = "blocked"
        except SnapError as exc:
            move, reason = None, f"{exc.which}_blocked"
        if move is None:
            queue.rotate(-1)
            log.append((wall_id, reason))
            rotations += 1
            continue
        queue.popleft()
        moves.append(move)
        moved.append(wall_id)
        rotations = 0

    return Plan("disassembly", tuple(moves), tuple(log), grid.radius, tuple(initial_order))


def reverse_plan(plan: Plan) -> Plan:
    """Play a plan backwards, flipping move order and each move's path."""
    direction: Direction = "assembly" if plan.direction == "disassembly" else "disassembly"
    return replace(plan, direction=direction,
                   moves=tuple(m.reversed() for m in reversed(plan.moves)))


def plan_assembly(scene: Scene, grid: Grid, removal_order: Sequence[str] | None = None) -> Plan:
    """Assembly plan obtained by reversing a removal plan.

    The removal queue defaults to the reverse of the scene's wall order, so an
    unobstructed site is assembled in file order.
    """
    order = list(removal_order) if removal_order is not None else scene.wall_ids[::-1]
    try:
        removal = plan_disassembly(scene, order, grid)
    except DeadlockError as exc:
        raise DeadlockError(f"no clash-free assembly order found; stuck walls {exc.stuck}",
                            exc.stuck, exc.partial) from exc
    return reverse_plan(removal)

"""Planar poses and oriented-rectangle collision predicates.

Rectangles are closed sets: touching edges count as overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

TWO_PI = 2.0 * math.pi


def normalize_yaw(yaw: float) -> float:
    """Wrap an angle to [-pi, pi). Values already in range are returned untouched."""
    if -math.pi <= yaw < math.pi:
        return yaw
    wrapped = (yaw + math.pi) % TWO_PI - math.pi
    if wrapped >= math.pi:
        wrapped -= TWO_PI
    return wrapped


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    yaw: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.yaw)):
            raise ValueError(f"pose fields must be finite, got {self!r}")
        object.__setattr__(self, "yaw", normalize_yaw(self.yaw))

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Footprint:
    half_length: float
    half_thickness: float

    def __post_init__(self) -> None:
        for name in ("half_length", "half_thickness"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    def inflated(self, margin: float) -> Footprint:
        if margin == 0:
            return self
        return Footprint(self.half_length + margin, self.half_thickness + margin)


@dataclass(frozen=True)
class OrientedRect:
    pose: Pose
    footprint: Footprint

    @property
    def center(self) -> tuple[float, float]:
        return (self.pose.x, self.pose.y)

    @property
    def axes(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Unit vectors along the long axis and the thickness axis."""
        c, s = math.cos(self.pose.yaw), math.sin(self.pose.yaw)
        return (c, s), (-s, c)

    @property
    def area(self) -> float:
        return 4.0 * self.footprint.half_length * self.footprint.half_thickness

    @property
    def circumradius(self) -> float:
        return math.hypot(self.footprint.half_length, self.footprint.half_thickness)

    def corners(self) -> list[tuple[float, float]]:
        (ux, uy), (vx, vy) = self.axes
        hl, ht = self.footprint.half_length, self.footprint.half_thickness
        cx, cy = self.center
        return [
            (cx + sl * hl * ux + st * ht * vx, cy + sl * hl * uy + st * ht * vy)
            for sl, st in ((1, 1), (-1, 1), (-1, -1), (1, -1))
        ]

    def end_caps(self) -> tuple[tuple[tuple[float, float], tuple[float, float]], ...]:
        """The two short edges, as segments."""
        c = self.corners()
        return ((c[3], c[0]), (c[1], c[2]))

    def contains(self, x: float, y: float) -> bool:
        (ux, uy), (vx, vy) = self.axes
        dx, dy = x - self.pose.x, y - self.pose.y
        return (abs(dx * ux + dy * uy) <= self.footprint.half_length
                and abs(dx * vx + dy * vy) <= self.footprint.half_thickness)

    def moved_to(self, pose: Pose) -> OrientedRect:
        return OrientedRect(pose, self.footprint)


def projection_radius(rect: OrientedRect, axis: tuple[float, float]) -> float:
    """Half-width of the rectangle's shadow on a unit axis."""
    (ux, uy), (vx, vy) = rect.axes
    return (rect.footprint.half_length * abs(ux * axis[0] + uy * axis[1])
            + rect.footprint.half_thickness * abs(vx * axis[0] + vy * axis[1]))


def separating_axes(a: OrientedRect, b: OrientedRect):
    """Yield (axis, combined projection radius) for the four candidate axes.

    Shared with the vectorized mask builder so both paths do identical
    floating-point arithmetic.
    """
    for axis in (*a.axes, *b.axes):
        yield axis, projection_radius(a, axis) + projection_radius(b, axis)


def rect_overlap(a: OrientedRect, b: OrientedRect) -> bool:
    """Separating-axis test on two closed oriented rectangles."""
    dx = b.pose.x - a.pose.x
    dy = b.pose.y - a.pose.y
    for (ax, ay), reach in separating_axes(a, b):
        if abs(dx * ax + dy * ay) > reach:
            return False
    return True


def pose_lerp(p0: Pose, p1: Pose, t: float) -> Pose:
    """Interpolate position; orientation is always the target yaw."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"interpolation parameter must lie in [0, 1], got {t!r}")
    # (1-t)*a + t*b keeps both endpoints bit-exact.
    return Pose((1.0 - t) * p0.x + t * p1.x, (1.0 - t) * p0.y + t * p1.y, p1.yaw)


def sample_segment(start: Pose, end: Pose, step: float) -> Iterator[tuple[float, Pose]]:
    """Endpoint-inclusive samples at arc lengths 0, step, 2*step, ... then the end.

    Halving ``step`` keeps every previous sample (k*s == 2k*(s/2) exactly).
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    dist = math.hypot(end.x - start.x, end.y - start.y)
    k = 0
    while k * step < dist:
        t = (k * step) / dist
        yield t, pose_lerp(start, end, t)
        k += 1
    yield 1.0, pose_lerp(start, end, 1.0)


class SweepHit(NamedTuple):
    t: float
    pose: Pose
    obstacle_index: int


def swept_collides(
    moving: OrientedRect,
    start: Pose,
    end: Pose,
    obstacles: Sequence[OrientedRect],
    step: float,
) -> SweepHit | None:
    """Earliest sampled pose along start->end where ``moving`` overlaps an obstacle."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    if not obstacles:
        return None
    reach = moving.circumradius
    for t, pose in sample_segment(start, end, step):
        rect = moving.moved_to(pose)
        for idx, obs in enumerate(obstacles):
            # bounding-circle reject, padded so it never overrules the exact test
            gap = math.hypot(obs.pose.x - pose.x, obs.pose.y - pose.y)
            if gap > (reach + obs.circumradius) * (1 + 1e-9) + 1e-12:
                continue
            if rect_overlap(rect, obs):
                return SweepHit(t, pose, idx)
    return None


def segment_distance(p: Sequence[tuple[float, float]], q: Sequence[tuple[float, float]]) -> float:
    """Minimum distance between two closed 2D segments."""
    def point_seg(pt, a, b):
        ax, ay = a
        bx, by = b
        ex, ey = bx - ax, by - ay
        denom = ex * ex + ey * ey
        t = 0.0 if denom == 0 else max(0.0, min(1.0, ((pt[0] - ax) * ex + (pt[1] - ay) * ey) / denom))
        return math.hypot(pt[0] - (ax + t * ex), pt[1] - (ay + t * ey))

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    a, b = p
    c, d = q
    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return 0.0
    return min(point_seg(a, c, d), point_seg(b, c, d), point_seg(c, a, b), point_seg(d, a, b))

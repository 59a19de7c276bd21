"""Scene and plan files.

Lengths are meters and angles radians throughout; every document carries a
``schema_version``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from ..geometry import Footprint, Pose
from ..planner import Plan
from ..scene import Bounds, Obstacle, Scene, SceneError, Wall
from ..scripting import Event

SCHEMA_VERSION = 1


def _pose(d: Any, where: str) -> Pose:
    if not isinstance(d, dict):
        raise SceneError(f"{where}: expected an object with x, y, yaw")
    try:
        return Pose(float(d["x"]), float(d["y"]), float(d.get("yaw", 0.0)))
    except KeyError as exc:
        raise SceneError(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise SceneError(f"{where}: {exc}") from None


def _footprint(d: dict, where: str) -> Footprint:
    try:
        return Footprint(float(d["half_length"]), float(d["half_thickness"]))
    except KeyError as exc:
        raise SceneError(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise SceneError(f"{where}: {exc}") from None


def scene_from_dict(data: dict[str, Any]) -> Scene:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SceneError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    try:
        b = data["bounds"]
        bounds = Bounds(float(b["min_x"]), float(b["min_y"]), float(b["max_x"]), float(b["max_y"]))
    except KeyError as exc:
        raise SceneError(f"bounds: missing field {exc.args[0]!r}") from None

    walls = []
    for n, w in enumerate(data.get("walls", [])):
        wid = w.get("id")
        if not isinstance(wid, str) or not wid:
            raise SceneError(f"walls[{n}].id: expected a non-empty string")
        where = f"walls[{n}] ({wid})"
        walls.append(Wall(wid, _footprint(w, where),
                          _pose(w.get("placed_pose"), f"{where}.placed_pose"),
                          _pose(w.get("staging_pose"), f"{where}.staging_pose")))
    obstacles = []
    for n, o in enumerate(data.get("obstacles", [])):
        oid = o.get("id")
        if not isinstance(oid, str) or not oid:
            raise SceneError(f"obstacles[{n}].id: expected a non-empty string")
        where = f"obstacles[{n}] ({oid})"
        obstacles.append(Obstacle(oid, _footprint(o, where), _pose(o.get("pose"), f"{where}.pose")))

    return Scene(bounds, tuple(walls), tuple(obstacles),
                 float(data.get("inflation_margin", 0.0)),
                 str(data.get("name", "")), dict(data.get("metadata", {})))


def scene_to_dict(scene: Scene) -> dict[str, Any]:
    def pose(p: Pose) -> dict[str, float]:
        return {"x": p.x, "y": p.y, "yaw": p.yaw}

    b = scene.bounds
    return {
        "schema_version": SCHEMA_VERSION,
        "name": scene.name,
        "bounds": {"min_x": b.min_x, "min_y": b.min_y, "max_x": b.max_x, "max_y": b.max_y},
        "inflation_margin": scene.inflation_margin,
        "walls": [
            {"id": w.id, "half_length": w.footprint.half_length,
             "half_thickness": w.footprint.half_thickness,
             "placed_pose": pose(w.placed_pose), "staging_pose": pose(w.staging_pose)}
            for w in scene.walls
        ],
        "obstacles": [
            {"id": o.id, "half_length": o.footprint.half_length,
             "half_thickness": o.footprint.half_thickness, "pose": pose(o.pose)}
            for o in scene.obstacles
        ],
        "metadata": dict(scene.metadata),
    }


def load_scene(path: str | Path) -> Scene:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SceneError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise SceneError(f"{path}: top level must be an object")
    return scene_from_dict(data)


def save_scene(scene: Scene, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")


def plan_document(plan: Plan, script: Iterable[Event] | None = None) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "plan_id": plan.fingerprint(),
        "plan": plan.to_dict(),
        "script": None if script is None else [e.to_dict() for e in script],
    }


def dumps_plan(plan: Plan, script: Iterable[Event] | None = None) -> str:
    return json.dumps(plan_document(plan, script), indent=2) + "\n"


def load_plan(path: str | Path) -> Plan:
    data = json.loads(Path(path).read_text())
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema_version {data.get('schema_version')!r}")
    return Plan.from_dict(data["plan"])


def export_plan(plan: Plan, path: str | Path, fmt: str = "json",
                script: Iterable[Event] | None = None, scene: Scene | None = None) -> list[Path]:
    """Write a plan as one JSON document or as SVG frames (one per waypoint)."""
    path = Path(path)
    if fmt == "json":
        path.write_text(dumps_plan(plan, script))
        return [path]
    if fmt == "svg-frames":
        if scene is None:
            raise ValueError("svg-frames export needs the scene")
        from .render import render_frames
        return render_frames(scene, plan, path)
    raise ValueError(f"unknown export format {fmt!r}")

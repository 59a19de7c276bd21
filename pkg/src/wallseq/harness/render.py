"""Matplotlib renderings: per-waypoint plan frames and benchmark curves."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon, Rectangle  # noqa: E402

from ..geometry import OrientedRect, Pose  # noqa: E402
from ..planner import Plan  # noqa: E402
from ..scene import Scene  # noqa: E402

# fixed salt + no date keeps SVG output reproducible
_SVG_RC = {"svg.hashsalt": "wallseq", "svg.fonttype": "none"}

STANDING = "#4c72b0"
STAGED = "#c8d3e6"
OBSTACLE = "#7f7f7f"
MOVER = "#d62728"


def _draw_rect(ax, rect: OrientedRect, **kw) -> None:
    ax.add_patch(Polygon(rect.corners(), closed=True, **kw))


def _frame(scene: Scene, standing: dict[str, OrientedRect], staged: dict[str, OrientedRect],
           mover_id: str, mover: OrientedRect, trail: Sequence[tuple[float, float]], title: str):
    b = scene.bounds
    aspect = b.height / b.width
    fig, ax = plt.subplots(figsize=(6, max(2.0, 6 * aspect)))
    ax.add_patch(Rectangle((b.min_x, b.min_y), b.width, b.height, fill=False, lw=1.0, ec="k"))
    for o in scene.obstacles:
        _draw_rect(ax, o.rect(), fc=OBSTACLE, ec="k", lw=0.5)
    for rect in staged.values():
        _draw_rect(ax, rect, fc=STAGED, ec=STANDING, lw=0.5)
    for rect in standing.values():
        _draw_rect(ax, rect, fc=STANDING, ec="k", lw=0.5)
    if len(trail) > 1:
        xs, ys = zip(*trail)
        ax.plot(xs, ys, ls="--", lw=0.8, color=MOVER)
    _draw_rect(ax, mover, fc=MOVER, ec="k", lw=0.8)
    ax.set_xlim(b.min_x, b.max_x)
    ax.set_ylim(b.min_y, b.max_y)
    ax.set_aspect("equal")
    ax.set_title(f"{title}  [{mover_id}]", fontsize=9)
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    return fig


def render_frames(scene: Scene, plan: Plan, outdir: str | Path) -> list[Path]:
    """One SVG per waypoint across all moves, mover highlighted."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    planned = {m.wall_id for m in plan.moves}
    standing: dict[str, OrientedRect] = {}
    staged: dict[str, OrientedRect] = {}
    for w in scene.walls:
        if plan.direction == "disassembly" or w.id not in planned:
            standing[w.id] = w.placed_rect()
        else:
            staged[w.id] = w.staged_rect()

    paths: list[Path] = []
    frame_no = 0
    with plt.rc_context(_SVG_RC):
        for k, move in enumerate(plan.moves):
            footprint = scene.wall(move.wall_id).footprint
            standing.pop(move.wall_id, None)
            staged.pop(move.wall_id, None)
            for n, (x, y) in enumerate(move.waypoints):
                mover = OrientedRect(Pose(x, y, move.transit_yaw), footprint)
                title = f"{plan.direction} move {k + 1}/{len(plan.moves)} step {n + 1}/{len(move.waypoints)}"
                fig = _frame(scene, standing, staged, move.wall_id, mover, move.waypoints[: n + 1], title)
                path = outdir / f"frame_{frame_no:05d}.svg"
                fig.savefig(path, format="svg", metadata={"Date": None})
                plt.close(fig)
                paths.append(path)
                frame_no += 1
            final = OrientedRect(move.target_pose, footprint)
            if plan.direction == "assembly":
                standing[move.wall_id] = final
            else:
                staged[move.wall_id] = final
    return paths


def plot_benchmark(rows: Sequence[dict], path: str | Path) -> Path:
    """Planning time against node radius, one line per wall count."""
    path = Path(path)
    counts = sorted({r["walls"] for r in rows})
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for count in counts:
        sub = sorted((r for r in rows if r["walls"] == count), key=lambda r: r["radius"])
        ax.plot([r["radius"] for r in sub], [r["time_s"] for r in sub], marker="o", label=f"{count} walls")
        for r in sub:
            if r["collisions"]:
                ax.plot(r["radius"], r["time_s"], marker="*", color="k", ms=9, ls="none")
    ax.set_yscale("log")
    ax.set_xlabel("node radius (m)")
    ax.set_ylabel("median planning time (s)")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    with plt.rc_context(_SVG_RC):
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
    plt.close(fig)
    return path

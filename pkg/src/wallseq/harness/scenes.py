"""Bundled fixtures and seeded scene generators."""

from __future__ import annotations

import json
import math
import random
from importlib import resources
from pathlib import Path

from ..geometry import Footprint, OrientedRect, Pose, rect_overlap
from ..scene import Bounds, Obstacle, Scene, SceneError, Wall
from .io import scene_from_dict, scene_to_dict

HALF_PI = math.pi / 2
FAMILY_SIZES = (9, 11, 17, 19)
FAMILY_SEED = 2026
FAMILY_MARGIN = 0.5


def _wall(wid, hl, ht, placed, staging) -> Wall:
    return Wall(wid, Footprint(hl, ht), Pose(*placed), Pose(*staging))


def _block(oid, x0, y0, x1, y1) -> Obstacle:
    """Axis-aligned static block from its corners."""
    return Obstacle(oid, Footprint((x1 - x0) / 2, (y1 - y0) / 2), Pose((x0 + x1) / 2, (y0 + y1) / 2, 0.0))


def four_walls() -> Scene:
    """Square room of four tilt-up panels with a small gap at each corner."""
    hl, ht = 4.8, 0.1
    walls = (
        _wall("w1", hl, ht, (0.0, -5.0, 0.0), (0.0, -12.0, 0.0)),
        _wall("w2", hl, ht, (5.0, 0.0, HALF_PI), (12.0, 0.0, HALF_PI)),
        _wall("w3", hl, ht, (0.0, 5.0, math.pi), (0.0, 12.0, math.pi)),
        _wall("w4", hl, ht, (-5.0, 0.0, -HALF_PI), (-12.0, 0.0, -HALF_PI)),
    )
    return Scene(Bounds(-15.5, -15.5, 15.5, 15.5), walls, name="four_walls",
                 metadata={"note": "four panels forming a 10 m square; staged around the platform"})


def blocked_channel() -> Scene:
    """Wall A sits at the dead end of a channel whose mouth wall B occupies."""
    walls = (
        _wall("A", 2.0, 0.1, (15.5, 5.5, 0.0), (3.5, 8.5, 0.0)),
        _wall("B", 2.0, 0.1, (10.5, 5.5, 0.0), (3.5, 2.5, 0.0)),
    )
    obstacles = (
        _block("channel_top", 8.0, 6.1, 20.0, 11.0),
        _block("channel_bottom", 8.0, 0.0, 20.0, 4.9),
        _block("channel_end", 18.5, 4.9, 20.0, 6.1),
    )
    return Scene(Bounds(0.0, 0.0, 20.0, 11.0), walls, obstacles, name="blocked_channel",
                 metadata={"initial_order": ["A", "B"], "expected_order": ["B", "A"],
                           "expected_deferrals": [["A", "blocked"]], "radius": 0.5})


def deadlock_channel() -> Scene:
    """Two walls in a one-lane channel, each staged beyond the other."""
    walls = (
        _wall("A", 2.0, 0.1, (12.5, 5.5, 0.0), (25.5, 8.5, 0.0)),
        _wall("B", 2.0, 0.1, (17.5, 5.5, 0.0), (4.5, 8.5, 0.0)),
    )
    obstacles = (
        _block("barrier_top", 10.0, 6.1, 20.0, 11.0),
        _block("barrier_bottom", 10.0, 0.0, 20.0, 4.9),
    )
    return Scene(Bounds(0.0, 0.0, 30.0, 11.0), walls, obstacles, name="deadlock_channel",
                 metadata={"radius": 0.5, "expected": "deadlock on A and B"})


def pillar() -> Scene:
    """A panel carried sideways past a 1.8 m pillar.

    The pillar sits between node centers of the 2.5 m and 3.0 m grids, so
    coarse plans sweep through it; finer grids block it and detour.
    """
    walls = (_wall("panel", 3.0, 0.1, (4.6, 9.0, HALF_PI), (27.4, 9.0, HALF_PI)),)
    obstacles = (_block("pillar", 15.3, 8.1, 17.1, 9.9),)
    return Scene(Bounds(0.0, 0.0, 30.0, 18.0), walls, obstacles, name="pillar",
                 metadata={"sample_step": 0.05,
                           "expected_collisions": {"0.5": 0, "1.0": 0, "1.5": 0, "2.0": 1, "2.5": 1, "3.0": 1}})


def _perimeter_slots(lo: float, hi: float, per_side: int) -> list[tuple[float, float, float]]:
    pitch = (hi - lo) / per_side
    centers = [lo + (k + 0.5) * pitch for k in range(per_side)]
    slots = []
    slots += [(c, lo, 0.0) for c in centers]
    slots += [(hi, c, HALF_PI) for c in centers]
    slots += [(c, hi, 0.0) for c in centers]
    slots += [(lo, c, HALF_PI) for c in centers]
    return slots


def _family_master(seed: int) -> list[tuple[tuple[float, float, float], tuple[float, float]]]:
    """Seeded (placed slot, staging spot) list; a family scene is a prefix of it."""
    rng = random.Random(seed)
    lo, hi = 20.0, 40.0
    mid = (lo + hi) / 2
    interior = [(mid - 5.0, mid, HALF_PI), (mid + 5.0, mid, HALF_PI), (mid, mid - 5.0, 0.0), (mid, mid + 5.0, 0.0)]
    slots = _perimeter_slots(lo, hi, 4) + interior
    rng.shuffle(slots)
    # staging yard north of the existing structure: flat panels left, upright right
    horizontal = [(x, y) for y in (48.0, 51.0, 54.0, 57.0) for x in (6.0, 12.0, 18.0, 24.0)]
    vertical = [(33.0 + 3.0 * k, y) for y in (50.5, 55.8) for k in range(9)]
    rng.shuffle(horizontal)
    rng.shuffle(vertical)
    return [(slot, (horizontal if slot[2] == 0.0 else vertical).pop()) for slot in slots]


def _is_interior(pose: Pose) -> bool:
    return 20.0 < pose.x < 40.0 and 20.0 < pose.y < 40.0


def site_family(n_walls: int, seed: int = FAMILY_SEED) -> Scene:
    """Building outline of panels plus interior partitions on a 60 m site.

    The building stands inside a U-shaped existing structure (3 m thick,
    open to the south) that separates it from the staging yard to the north,
    so every panel leaves southward and returns up 6 m lanes at the site edges. Scenes are nested: the
    n-wall site is the first n entries of one seeded master list, so adding
    walls only adds obstacles. Interior partitions head the wall order (the
    default removal queue).
    """
    master = _family_master(seed)
    if not 1 <= n_walls <= len(master):
        raise ValueError(f"site_family supports 1..{len(master)} walls")
    hl, ht = 2.3, 0.15
    walls = [_wall(f"p{k + 1:02d}", hl, ht, placed, (sx, sy, placed[2]))
             for k, (placed, (sx, sy)) in enumerate(master[:n_walls])]
    # partitions queue first: on a closed outline they wait for the perimeter
    walls.sort(key=lambda w: not _is_interior(w.placed_pose))
    obstacles = (
        _block("structure_north", 6.0, 43.5, 54.0, 46.5),
        _block("structure_west", 6.0, 12.0, 9.0, 43.5),
        _block("structure_east", 51.0, 12.0, 54.0, 43.5),
    )
    return Scene(Bounds(0.0, 0.0, 60.0, 60.0), tuple(walls), obstacles, inflation_margin=FAMILY_MARGIN,
                 name=family_name(n_walls),
                 metadata={"generator": "site_family", "seed": seed, "walls": n_walls})


def random_cluster(seed: int, n_walls: int | None = None) -> Scene:
    """Small randomized site: 4-6 panels packed near the middle of a 16 m square."""
    rng = random.Random(seed)
    n = n_walls if n_walls is not None else rng.randint(4, 6)
    size = 16.0
    walls: list[Wall] = []
    staging_slots = ([(x, 1.0, 0.0) for x in (3.5, 8.0, 12.5)] + [(x, 15.0, 0.0) for x in (3.5, 8.0, 12.5)]
                     + [(1.0, y, HALF_PI) for y in (3.5, 8.0, 12.5)] + [(15.0, y, HALF_PI) for y in (3.5, 8.0, 12.5)])
    rng.shuffle(staging_slots)
    tries = 0
    while len(walls) < n:
        tries += 1
        if tries > 10_000:
            raise SceneError(f"could not pack {n} walls for seed {seed}")
        hl = rng.choice((1.0, 1.5, 2.0))
        yaw = rng.choice((0.0, HALF_PI))
        x = round(rng.uniform(4.5, 11.5) * 2) / 2
        y = round(rng.uniform(4.5, 11.5) * 2) / 2
        rect = OrientedRect(Pose(x, y, yaw), Footprint(hl, 0.1))
        if any(rect_overlap(rect, OrientedRect(w.placed_pose, Footprint(w.footprint.half_length + 0.3, 0.4)))
               for w in walls):
            continue
        for slot in staging_slots:
            if slot[2] == yaw:
                staging_slots.remove(slot)
                break
        else:
            continue
        walls.append(_wall(f"r{len(walls)}", hl, 0.1, (x, y, yaw), slot))
    return Scene(Bounds(0.0, 0.0, size, size), tuple(walls), name=f"cluster_{seed}")


FIXTURES = {
    "four_walls": four_walls,
    "blocked_channel": blocked_channel,
    "deadlock_channel": deadlock_channel,
    "pillar": pillar,
}


def family_name(n_walls: int) -> str:
    return f"site_{n_walls:02d}"


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("wallseq") / "data" / f"{name}.json"))


def load_bundled(name: str) -> Scene:
    return scene_from_dict(json.loads(bundled_path(name).read_text()))


def write_bundled(outdir: str | Path) -> list[Path]:
    """Regenerate every bundled scene file."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scenes = [build() for build in FIXTURES.values()] + [site_family(n) for n in FAMILY_SIZES]
    paths = []
    for scene in scenes:
        path = outdir / f"{scene.name}.json"
        path.write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")
        paths.append(path)
    return paths

"""Planning time against grid radius and wall count.

Timing covers planning only, from grid construction through queue
scheduling. File I/O and verification are excluded.
"""

from __future__ import annotations

import csv
import gc
import io
import os
import platform
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from ..grid import build_grid
from ..planner import DeadlockError, Plan, plan_disassembly
from ..scene import Scene
from ..verifier import verify_plan

THREADS_ENV = "WALLSEQ_BENCH_THREADS"
TIMING_NOTE = ("median over repetitions of the best-of-inner wall-clock seconds for grid build + masks "
               "+ A* + queue scheduling; file I/O and verification excluded")


@dataclass
class BenchRow:
    scene: str
    walls: int
    radius: float
    time_s: float
    times: list[float]
    nodes: int
    path_cost: float
    collisions: int
    deadlocked: bool
    deferrals: int
    moved: int
    stable: bool = True


@dataclass
class BenchTable:
    rows: list[BenchRow]
    repetitions: int
    metadata: dict[str, Any] = field(default_factory=dict)

    def cell(self, walls: int, radius: float) -> BenchRow:
        for row in self.rows:
            if row.walls == walls and row.radius == radius:
                return row
        raise KeyError((walls, radius))

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": 1,
            "repetitions": self.repetitions,
            "metadata": self.metadata,
            "rows": [asdict(r) for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["scene", "walls", "radius", "time_s", "nodes", "path_cost",
                "collisions", "deadlocked", "deferrals", "moved"]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in self.rows:
            writer.writerow([getattr(r, c) for c in cols])
        return buf.getvalue()

    def format_grid(self) -> str:
        """Radius rows by wall-count columns; * marks collisions, DL deadlock."""
        counts = sorted({r.walls for r in self.rows})
        radii = sorted({r.radius for r in self.rows})
        lines = ["radius (m) | " + " | ".join(f"{c:>10d}" for c in counts)]
        lines.append("-" * len(lines[0]))
        for rad in radii:
            cells = []
            for c in counts:
                try:
                    row = self.cell(c, rad)
                except KeyError:
                    cells.append(f"{'-':>10}")
                    continue
                mark = "DL" if row.deadlocked else ("*" if row.collisions else "")
                cells.append(f"{row.time_s:.3f}s{mark}".rjust(10))
            lines.append(f"{rad:10.2f} | " + " | ".join(cells))
        lines.append("* verifier found a moving wall colliding with another component; DL deadlock")
        return "\n".join(lines)


def _plan_once(scene: Scene, radius: float) -> tuple[Plan, bool, float, int]:
    gc.collect()
    gc.disable()
    try:
        t0 = time.perf_counter()
        grid = build_grid(scene.bounds, radius)
        try:
            plan, deadlocked = plan_disassembly(scene, scene.wall_ids, grid), False
        except DeadlockError as exc:
            plan, deadlocked = exc.partial, True
        elapsed = time.perf_counter() - t0
    finally:
        gc.enable()
    return plan, deadlocked, elapsed, grid.n_nodes


def _summary(plan: Plan, deadlocked: bool) -> tuple:
    return (plan.fingerprint(), deadlocked)


def bench_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_benchmark(scenes: Sequence[Scene], radii: Sequence[float], repetitions: int = 5,
                  threads: int | None = None, inner: int = 5) -> BenchTable:
    """Time removal planning for every (scene, radius) cell.

    Each cell gets one untimed warm-up run, which also feeds the verifier.
    A repetition is the fastest of ``inner`` planning runs, so a short burst
    of host contention cannot decide it. With a single thread every inner
    pass visits all cells in a fresh seeded order, which spreads slow spells
    across cells instead of always hitting the same ones.
    """
    if repetitions < 3:
        raise ValueError("repetitions must be >= 3 for stable medians")
    if inner < 1:
        raise ValueError(f"inner must be >= 1, got {inner}")
    if not radii or any(r <= 0 for r in radii):
        raise ValueError(f"radii must be positive, got {list(radii)}")
    threads = threads or bench_threads()
    cells = [(s, r) for s in scenes for r in radii]

    warm = {}
    for k, (scene, radius) in enumerate(cells):
        warm[k] = _plan_once(scene, radius)

    times: dict[int, list[float]] = {k: [] for k in range(len(cells))}
    stable = {k: True for k in range(len(cells))}

    def timed(k: int) -> float:
        plan, deadlocked, elapsed, _ = _plan_once(*cells[k])
        if _summary(plan, deadlocked) != _summary(warm[k][0], warm[k][1]):
            stable[k] = False
        return elapsed

    if threads == 1:
        rng = random.Random(0)
        order = list(range(len(cells)))
        for _ in range(repetitions):
            best = {k: float("inf") for k in order}
            for _ in range(inner):
                rng.shuffle(order)
                for k in order:
                    best[k] = min(best[k], timed(k))
            for k in order:
                times[k].append(best[k])
    else:
        def cell_times(k: int) -> None:
            times[k] = [min(timed(k) for _ in range(inner)) for _ in range(repetitions)]

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(cell_times, range(len(cells))))

    rows = []
    for k, (scene, radius) in enumerate(cells):
        plan, deadlocked, _, nodes = warm[k]
        report = verify_plan(scene, plan)
        rows.append(BenchRow(
            scene=scene.name, walls=len(scene.walls), radius=radius,
            time_s=statistics.median(times[k]), times=times[k], nodes=nodes,
            path_cost=sum(m.path_cost for m in plan.moves), collisions=report.collision_count,
            deadlocked=deadlocked, deferrals=len(plan.deferral_log), moved=len(plan.moves),
            stable=stable[k],
        ))
    meta = {
        "timing": TIMING_NOTE,
        "threads": threads,
        "inner": inner,
        "python": platform.python_version(),
        "machine": platform.machine(),
        "sample_step": "min(radius, thinnest wall half-thickness) / 2",
    }
    return BenchTable(rows, repetitions, meta)

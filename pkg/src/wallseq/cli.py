"""Wall-panel sequencing from the command line.

Exit codes: 0 success / clean, 1 planner infeasibility or verifier
collisions, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .grid import SnapError, build_grid
from .harness import io as sio
from .harness.bench import run_benchmark
from .harness.render import plot_benchmark, render_frames
from .harness.scenes import FAMILY_SIZES, bundled_path, family_name, write_bundled
from .planner import DeadlockError, plan_assembly, plan_disassembly
from .scene import SceneError
from .scripting import generate_script
from .verifier import verify_plan

log = logging.getLogger("wallseq")

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _load_scene(path: str):
    try:
        return sio.load_scene(path)
    except FileNotFoundError:
        raise UsageError(f"scene file not found: {path}") from None
    except SceneError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_plan(path: str):
    try:
        return sio.load_plan(path)
    except FileNotFoundError:
        raise UsageError(f"plan file not found: {path}") from None
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: malformed plan ({exc})") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_plan(args) -> int:
    scene = _load_scene(args.scene)
    order = [w.strip() for w in args.order.split(",")] if args.order else None
    try:
        grid = build_grid(scene.bounds, args.radius)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        if args.direction == "assemble":
            plan = plan_assembly(scene, grid, order)
            script = generate_script(plan, scene)
        else:
            plan = plan_disassembly(scene, order if order is not None else scene.wall_ids, grid)
            script = None
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    except DeadlockError as exc:
        log.error("%s", exc)
        return EXIT_INFEASIBLE
    except SnapError as exc:
        log.error("%s", exc)
        return EXIT_INFEASIBLE
    _emit(sio.dumps_plan(plan, script), args.out)
    log.info("%s plan: order %s, %d deferrals", plan.direction, ",".join(plan.order), len(plan.deferral_log))
    return EXIT_OK


def cmd_verify(args) -> int:
    scene = _load_scene(args.scene)
    plan = _load_plan(args.plan)
    try:
        report = verify_plan(scene, plan, args.step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    log.info("verdict: %s (%d violations, step %.4g m)", report.verdict, report.collision_count, report.sample_step)
    return EXIT_OK if report.verdict == "clean" else EXIT_INFEASIBLE


def cmd_script(args) -> int:
    scene = _load_scene(args.scene)
    plan = _load_plan(args.plan)
    try:
        events = generate_script(plan, scene, args.tolerance)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _emit(json.dumps([e.to_dict() for e in events], indent=2) + "\n", args.out)
    else:
        _emit("".join(f"{n + 1:3d}. {e.describe()}\n" for n, e in enumerate(events)), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    paths = args.scenes or [str(bundled_path(family_name(n))) for n in FAMILY_SIZES]
    scenes = [_load_scene(p) for p in paths]
    try:
        table = run_benchmark(scenes, args.radii, args.reps, inner=args.inner)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(table.format_grid())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.json").write_text(json.dumps(table.to_dict(), indent=2) + "\n")
        (out / "bench.csv").write_text(table.to_csv())
        plot_benchmark([vars(r) for r in table.rows], out / "bench_time.svg")
        log.info("wrote %s", out)
    return EXIT_OK


def cmd_render(args) -> int:
    scene = _load_scene(args.scene)
    plan = _load_plan(args.plan)
    frames = render_frames(scene, plan, args.outdir)
    log.info("wrote %d frames to %s", len(frames), args.outdir)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    for path in write_bundled(args.outdir):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wallseq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan an assembly or disassembly sequence")
    p.add_argument("--scene", required=True)
    p.add_argument("--radius", type=float, default=0.5, help="node radius in meters (pitch = 2r)")
    p.add_argument("--direction", choices=("assemble", "disassemble"), default="assemble")
    p.add_argument("--order", help="comma-separated removal queue (default: file order; reversed for assemble)")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="replay a plan with a sampled sweep")
    p.add_argument("--scene", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--step", type=float, default=None, help="sample spacing in meters")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("script", help="print the construction event script")
    p.add_argument("--plan", required=True)
    p.add_argument("--scene", required=True)
    p.add_argument("--tolerance", type=float, default=0.5, help="corner angle tolerance, degrees")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_script)

    p = sub.add_parser("bench", help="planning time vs grid radius and wall count")
    p.add_argument("--scenes", nargs="*", help="scene files (default: bundled site family)")
    p.add_argument("--radii", type=_floats, default=[0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
    p.add_argument("--reps", type=int, default=5, help="repetitions; the median is reported")
    p.add_argument("--inner", type=int, default=5, help="planning runs per repetition; the fastest counts")
    p.add_argument("--out", help="directory for bench.json, bench.csv and bench_time.svg")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="write one SVG frame per waypoint")
    p.add_argument("--plan", required=True)
    p.add_argument("--scene", required=True)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("fixtures", help="regenerate the bundled scene files")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wallseq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"wallseq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

import math

import pytest

from wallseq.geometry import Footprint, Pose
from wallseq.grid import build_grid
from wallseq.harness.scenes import blocked_channel, four_walls
from wallseq.planner import Plan, plan_assembly, plan_disassembly, reverse_plan
from wallseq.scene import Bounds, Scene, Wall
from wallseq.scripting import (
    WrongDirectionError,
    are_adjacent,
    check_corner_angles,
    corner_angle,
    generate_script,
)

CYCLE = ["transport", "tilt_up", "place", "install_brace"]


def wall(wid, yaw, x=0.0, y=0.0):
    return Wall(wid, Footprint(2, 0.1), Pose(x, y, yaw), Pose(x, y, yaw))


@pytest.fixture(scope="module")
def four():
    scene = four_walls()
    return scene, plan_assembly(scene, build_grid(scene.bounds, 0.5))


def test_four_wall_sequence(four):
    scene, plan = four
    events = generate_script(plan, scene)
    kinds = [e.kind for e in events]
    expected = (CYCLE + CYCLE + ["verify_angle"] + CYCLE + ["verify_angle"] + CYCLE + ["verify_angle"]
                + ["remove_brace"] * 4 + ["verify_angle"] * 4)
    assert kinds == expected
    assert [e.walls for e in events if e.kind == "place"] == [("w1",), ("w2",), ("w3",), ("w4",)]
    running = [e.walls for e in events[:19] if e.kind == "verify_angle"]
    assert running == [("w1", "w2"), ("w2", "w3"), ("w3", "w4")]
    final = {e.corner for e in events[-4:]}
    assert final == {"w1|w2", "w2|w3", "w3|w4", "w1|w4"}
    assert all(e.passed and e.angle == 90.0 for e in events if e.kind == "verify_angle")


def test_transport_carries_waypoints(four):
    scene, plan = four
    events = generate_script(plan, scene)
    transports = [e for e in events if e.kind == "transport"]
    assert [e.waypoints for e in transports] == [m.waypoints for m in plan.moves]


def test_every_brace_is_removed(four):
    scene, plan = four
    events = generate_script(plan, scene)
    installed = [e.walls[0] for e in events if e.kind == "install_brace"]
    removed = [e.walls[0] for e in events if e.kind == "remove_brace"]
    assert installed == removed
    last_install = max(i for i, e in enumerate(events) if e.kind == "install_brace")
    first_remove = min(i for i, e in enumerate(events) if e.kind == "remove_brace")
    assert last_install < first_remove


def test_all_corners_pass(four):
    scene, _ = four
    checks = check_corner_angles(scene, 0.5)
    assert len(checks) == 4
    assert all(c.passed and c.angle == 90.0 for c in checks)


def test_single_wall_plan():
    scene = four_walls()
    plan = plan_disassembly(scene, ["w1"], build_grid(scene.bounds, 0.5))
    events = generate_script(reverse_plan(plan), scene)
    assert [e.kind for e in events] == CYCLE + ["remove_brace"]


def test_empty_plan():
    assert generate_script(Plan("assembly", ()), four_walls()) == []


def test_rejects_disassembly_plan():
    scene = blocked_channel()
    plan = plan_disassembly(scene, ["A", "B"], build_grid(scene.bounds, 0.5))
    with pytest.raises(WrongDirectionError):
        generate_script(plan, scene)


def test_non_adjacent_running_check_has_no_corner():
    # the two channel walls are collinear and 1 m apart: not a corner
    scene = blocked_channel()
    events = generate_script(plan_assembly(scene, build_grid(scene.bounds, 0.5), ["A", "B"]), scene)
    [check] = [e for e in events if e.kind == "verify_angle"]
    assert check.corner is None and check.angle == 0.0 and not check.passed


class TestCornerAngle:
    @pytest.mark.parametrize("ya,yb,deg", [
        (0.0, math.pi / 2, 90.0),
        (0.0, -math.pi / 2, 90.0),
        (math.pi / 2, -math.pi / 2, 180.0),
        (0.0, 0.0, 0.0),
        (-3.0, 3.0, math.degrees(2 * math.pi - 6.0)),
    ])
    def test_values(self, ya, yb, deg):
        assert corner_angle(wall("a", ya), wall("b", yb)) == pytest.approx(deg)

    def test_small_skew_folds_to_small_angle(self):
        assert corner_angle(wall("a", 0.0), wall("b", 0.1)) == pytest.approx(5.7296, abs=1e-4)

    def test_near_right_angle(self):
        angle = corner_angle(wall("a", 0.0), wall("b", math.pi / 2 - 0.1))
        assert angle == pytest.approx(84.2704, abs=1e-4)

    def test_tolerance_edge(self):
        a = Wall("a", Footprint(2, 0.1), Pose(0, 0, 0), Pose(0, 9, 0))
        for skew, ok in ((math.radians(0.49), True), (math.radians(0.51), False)):
            b = Wall("b", Footprint(2, 0.1), Pose(2.1, 2.0, math.pi / 2 + skew), Pose(5, 9, 0))
            scene = Scene(Bounds(-5, -5, 10, 10), (a, b))
            [check] = check_corner_angles(scene, 0.5)
            assert check.passed is ok

    def test_symmetric(self):
        a, b = wall("a", 0.3), wall("b", 2.9)
        assert corner_angle(a, b) == corner_angle(b, a)


class TestAdjacency:
    def test_corner_pair(self):
        a = Wall("a", Footprint(2, 0.1), Pose(0, 0, 0), Pose(0, 0, 0))
        b = Wall("b", Footprint(2, 0.1), Pose(2.1, 2.1, math.pi / 2), Pose(0, 0, 0))
        assert are_adjacent(a, b) and are_adjacent(b, a)

    def test_far_pair(self):
        a = Wall("a", Footprint(2, 0.1), Pose(0, 0, 0), Pose(0, 0, 0))
        b = Wall("b", Footprint(2, 0.1), Pose(2.5, 2.5, math.pi / 2), Pose(0, 0, 0))
        assert not are_adjacent(a, b)

    def test_reach_is_one_thickness(self):
        # dyadic sizes keep the 0.25 m gap exact
        a = Wall("a", Footprint(2, 0.125), Pose(0, 0, 0), Pose(0, 0, 0))
        near = Wall("b", Footprint(2, 0.125), Pose(4.25, 0, 0), Pose(0, 0, 0))
        far = Wall("b", Footprint(2, 0.125), Pose(4.26, 0, 0), Pose(0, 0, 0))
        assert are_adjacent(a, near) and not are_adjacent(a, far)


def test_event_serialization(four):
    scene, plan = four
    events = generate_script(plan, scene)
    d = events[8].to_dict()
    assert d == {"kind": "verify_angle", "walls": ["w1", "w2"], "angle_deg": 90.0, "corner": "w1|w2", "passed": True}
    assert events[0].describe().startswith("transport w1")

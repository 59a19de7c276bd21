import math
import random

import numpy as np
import pytest

from wallseq.geometry import Footprint, Pose
from wallseq.grid import build_grid
from wallseq.harness.scenes import blocked_channel, deadlock_channel, four_walls, random_cluster
from wallseq.planner import (
    BlockedEndpointError,
    DeadlockError,
    Plan,
    astar,
    plan_assembly,
    plan_disassembly,
    plan_single_move,
    reverse_plan,
)
from wallseq.scene import Bounds, Obstacle, Scene, Wall
from wallseq.verifier import dijkstra_cost

from oracles import OrderOracle


def open_grid(cols, rows):
    grid = build_grid(Bounds(0, 0, cols, rows), 0.5)
    return grid, np.zeros(grid.n_nodes, dtype=bool)


class TestAstar:
    def test_straight_line(self):
        grid, mask = open_grid(5, 1)
        res = astar(grid, mask, 0, 4)
        assert res.nodes == [0, 1, 2, 3, 4] and res.cost == 4.0

    def test_diagonal(self):
        grid, mask = open_grid(4, 4)
        res = astar(grid, mask, grid.index(0, 0), grid.index(3, 3))
        assert res.cost == pytest.approx(3 * math.sqrt(2))
        assert len(res.nodes) == 4

    def test_same_node(self):
        grid, mask = open_grid(3, 3)
        res = astar(grid, mask, 4, 4)
        assert res.nodes == [4] and res.cost == 0.0

    def test_no_corner_cutting(self):
        grid, mask = open_grid(2, 2)
        mask[grid.index(1, 0)] = True
        mask[grid.index(0, 1)] = True
        assert astar(grid, mask, grid.index(0, 0), grid.index(1, 1)) is None

    def test_wall_detour(self):
        # 5x5 with a vertical wall at column 2 rows 0..3; gap at the top
        grid, mask = open_grid(5, 5)
        for j in range(4):
            mask[grid.index(2, j)] = True
        s, g = grid.index(0, 0), grid.index(4, 0)
        res = astar(grid, mask, s, g)
        assert res.cost == pytest.approx(dijkstra_cost(grid, mask, s, g))
        assert all(not mask[n] for n in res.nodes)

    def test_enclosed_goal(self):
        grid, mask = open_grid(7, 7)
        for i in range(1, 6):
            for j in range(1, 6):
                if i in (1, 5) or j in (1, 5):
                    mask[grid.index(i, j)] = True
        assert astar(grid, mask, 0, grid.index(3, 3)) is None
        assert dijkstra_cost(grid, mask, 0, grid.index(3, 3)) is None

    @pytest.mark.parametrize("which", ["start", "goal"])
    def test_blocked_endpoint(self, which):
        grid, mask = open_grid(3, 3)
        mask[0] = True
        args = (0, 8) if which == "start" else (8, 0)
        with pytest.raises(BlockedEndpointError, match=which):
            astar(grid, mask, *args)

    def test_steps_are_8_connected(self):
        rng = np.random.default_rng(3)
        grid, _ = open_grid(12, 12)
        mask = rng.random(grid.n_nodes) < 0.2
        free = np.flatnonzero(~mask)
        res = astar(grid, mask, int(free[0]), int(free[-1]))
        assert res is not None
        for a, b in zip(res.nodes, res.nodes[1:]):
            (ai, aj), (bi, bj) = grid.ij(a), grid.ij(b)
            assert max(abs(ai - bi), abs(aj - bj)) == 1

    @pytest.mark.parametrize("seed", range(30))
    def test_cost_matches_dijkstra(self, seed):
        rng = random.Random(seed)
        grid, _ = open_grid(16, 16)
        mask = np.array([rng.random() < 0.25 for _ in range(grid.n_nodes)])
        free = np.flatnonzero(~mask).tolist()
        s, g = rng.sample(free, 2)
        res = astar(grid, mask, s, g)
        ref = dijkstra_cost(grid, mask, s, g)
        if ref is None:
            assert res is None
        else:
            assert res.cost == pytest.approx(ref, rel=1e-9, abs=0)


def test_single_move_endpoints_exact():
    scene = four_walls()
    grid = build_grid(scene.bounds, 0.5)
    w = scene.wall("w1")
    move = plan_single_move(scene.without(["w2", "w3", "w4"]), "w1", w.staging_pose, grid)
    assert move.waypoints[0] == w.placed_pose.xy
    assert move.waypoints[-1] == w.staging_pose.xy
    assert move.transit_yaw == w.staging_pose.yaw
    assert len(move.waypoints) == len(move.nodes) + 2


def test_single_move_rejects_out_of_bounds_target():
    scene = four_walls()
    grid = build_grid(scene.bounds, 0.5)
    with pytest.raises(ValueError, match="outside"):
        plan_single_move(scene, "w1", Pose(100, 0), grid)


class TestScheduler:
    def test_blocked_channel(self):
        scene = blocked_channel()
        plan = plan_disassembly(scene, ["A", "B"], build_grid(scene.bounds, 0.5))
        assert plan.order == ["B", "A"]
        assert plan.deferral_log == (("A", "blocked"),)

    def test_blocked_channel_oracle(self):
        scene = blocked_channel()
        oracle = OrderOracle(scene, build_grid(scene.bounds, 0.5))
        assert oracle.all_feasible(["A", "B"]) == [("B", "A")]

    def test_deadlock(self):
        scene = deadlock_channel()
        grid = build_grid(scene.bounds, 0.5)
        with pytest.raises(DeadlockError) as info:
            plan_disassembly(scene, ["A", "B"], grid)
        assert sorted(info.value.stuck) == ["A", "B"]
        assert info.value.partial.moves == ()
        assert OrderOracle(scene, grid).all_feasible(["A", "B"]) == []

    def test_assembly_deadlock_message(self):
        scene = deadlock_channel()
        with pytest.raises(DeadlockError, match="no clash-free assembly order"):
            plan_assembly(scene, build_grid(scene.bounds, 0.5))

    def test_snap_failure_is_deferred(self):
        # staging spot buried under a block: the wall is skipped, never moved
        walls = (Wall("a", Footprint(1, 0.1), Pose(3, 3), Pose(3, 8)),
                 Wall("b", Footprint(1, 0.1), Pose(7, 3), Pose(7, 8)))
        obs = (Obstacle("pile", Footprint(2, 2), Pose(7, 8)),)
        scene = Scene(Bounds(0, 0, 10, 10), walls, obs)
        with pytest.raises(DeadlockError) as info:
            plan_disassembly(scene, ["b", "a"], build_grid(scene.bounds, 0.5))
        assert info.value.stuck == ["b"]
        assert info.value.partial.order == ["a"]
        assert info.value.partial.deferral_log[0] == ("b", "goal_blocked")

    def test_order_validation(self):
        scene = four_walls()
        grid = build_grid(scene.bounds, 1.0)
        with pytest.raises(ValueError, match="duplicates"):
            plan_disassembly(scene, ["w1", "w1"], grid)
        with pytest.raises(KeyError):
            plan_disassembly(scene, ["w9"], grid)

    def test_unqueued_walls_stay(self):
        scene = four_walls()
        plan = plan_disassembly(scene, ["w1"], build_grid(scene.bounds, 0.5))
        assert plan.order == ["w1"]

    def test_empty_queue(self):
        scene = four_walls()
        plan = plan_disassembly(scene, [], build_grid(scene.bounds, 0.5))
        assert plan.moves == () and plan.deferral_log == ()

    @pytest.mark.parametrize("seed", range(15))
    def test_queue_conservation(self, seed):
        scene = random_cluster(seed)
        order = scene.wall_ids
        random.Random(seed).shuffle(order)
        plan = plan_disassembly(scene, order, build_grid(scene.bounds, 0.5))
        assert sorted(plan.order) == sorted(order)
        deferred = [w for w, _ in plan.deferral_log]
        assert set(deferred) <= set(order)


class TestAssembly:
    def test_four_walls_file_order(self):
        scene = four_walls()
        plan = plan_assembly(scene, build_grid(scene.bounds, 0.5))
        assert plan.direction == "assembly"
        assert plan.order == ["w1", "w2", "w3", "w4"]
        assert plan.deferral_log == ()
        first = plan.moves[0]
        assert first.start_pose == scene.wall("w1").staging_pose
        assert first.target_pose == scene.wall("w1").placed_pose

    def test_blocked_channel_assembly(self):
        scene = blocked_channel()
        plan = plan_assembly(scene, build_grid(scene.bounds, 0.5), removal_order=["A", "B"])
        assert plan.order == ["A", "B"]

    @pytest.mark.parametrize("seed", range(10))
    def test_reverse_is_involution(self, seed):
        scene = random_cluster(seed)
        plan = plan_disassembly(scene, scene.wall_ids, build_grid(scene.bounds, 0.5))
        assert reverse_plan(reverse_plan(plan)) == plan
        rev = reverse_plan(plan)
        assert rev.order == plan.order[::-1]
        for fwd, back in zip(plan.moves, reversed(rev.moves)):
            assert back.waypoints == fwd.waypoints[::-1]
            assert back.transit_yaw == fwd.transit_yaw
            assert back.path_cost == fwd.path_cost


class TestDeterminism:
    def test_repeat_plans_identical(self):
        scene = random_cluster(4)
        grid = build_grid(scene.bounds, 0.5)
        a = plan_assembly(scene, grid)
        b = plan_assembly(scene, build_grid(scene.bounds, 0.5))
        assert a == b and a.fingerprint() == b.fingerprint()

    def test_dict_round_trip(self):
        scene = blocked_channel()
        plan = plan_disassembly(scene, ["A", "B"], build_grid(scene.bounds, 0.5))
        again = Plan.from_dict(plan.to_dict())
        assert again == plan and again.fingerprint() == plan.fingerprint()

    def test_unknown_direction(self):
        data = Plan("assembly", ()).to_dict()
        data["direction"] = "sideways"
        with pytest.raises(ValueError):
            Plan.from_dict(data)

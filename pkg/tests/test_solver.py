import cmath
import math

import pytest

from steiner_ladder.analysis import local_min_gradient, maxwell_length, trees_mirror_equal
from steiner_ladder.errors import DegenerateInputError, ParameterError
from steiner_ladder.solver import (
    minimal_full_tree,
    minimum_spanning_tree,
    realize_full_topology,
    solve_exact,
    steiner_ratio,
)
from steiner_ladder.topology import enumerate_full_topologies
from steiner_ladder.trees import TERMINAL

from oracles import brute_mst_length, fermat_oracle, two_steiner_descent

SQRT3 = math.sqrt(3)
EQUILATERAL = [0, 1, complex(0.5, SQRT3 / 2)]
SQUARE = [0, 1, 1 + 1j, 1j]


def terminal_degrees(tree):
    deg = tree.degrees()
    return [deg[i] for i, r in enumerate(tree.roles) if r == TERMINAL]


def test_realize_tripod_matches_grid_oracle():
    (topo,) = enumerate_full_topologies(3)
    tree = realize_full_topology(EQUILATERAL, topo)
    assert tree is not None
    _, oracle_val = fermat_oracle(*EQUILATERAL)
    assert abs(tree.length - SQRT3) < 1e-12
    assert abs(tree.length - oracle_val) < 1e-8


def test_realize_square_topologies():
    oracle_val = two_steiner_descent(SQUARE)
    assert abs(oracle_val - (1 + SQRT3)) < 1e-7
    lengths = []
    for topo in enumerate_full_topologies(4):
        tree = realize_full_topology(SQUARE, topo)
        if tree is not None:
            lengths.append(tree.length)
    assert len(lengths) >= 2
    assert min(lengths) == pytest.approx(1 + SQRT3, abs=1e-12)
    assert sorted(lengths)[1] == pytest.approx(1 + SQRT3, abs=1e-12)


def test_realize_infeasible_returns_none():
    (topo,) = enumerate_full_topologies(3)
    # wide angle at the middle point: the branching point degenerates
    assert realize_full_topology([0, 1 + 0.0001j, 2], topo) is None


def test_realize_validates_topology():
    topo3 = enumerate_full_topologies(3)[0]
    with pytest.raises(ParameterError):
        realize_full_topology(SQUARE, topo3)


def test_realized_trees_have_steiner_angles_and_maxwell(rng):
    checked = 0
    topos = enumerate_full_topologies(4)
    while checked < 100:
        pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(4)]
        topo = topos[rng.randrange(len(topos))]
        tree = realize_full_topology(pts, topo)
        if tree is None:
            continue
        checked += 1
        assert local_min_gradient(tree) < 1e-9
        real, resid = maxwell_length(tree)
        assert abs(real - tree.length) <= 1e-10 * tree.length
        assert resid <= 1e-9 * tree.length


def test_solve_two_points():
    sol = solve_exact([1j, 3 + 1j])
    assert sol.best.length == pytest.approx(3.0, abs=1e-15)
    assert len(sol.co_optima) == 1
    assert len(sol.best.edges) == 1


def test_solve_square_two_reflected_optima():
    sol = solve_exact(SQUARE, tol=1e-9)
    assert sol.best.length == pytest.approx(1 + SQRT3, abs=1e-9)
    assert len(sol.co_optima) == 2
    t1, t2 = sol.co_optima
    assert trees_mirror_equal(t1, t2, axis_point=0.5 + 0.5j, axis_angle=math.pi / 4, tol=1e-9)


def test_solve_equilateral_is_fermat():
    sol = solve_exact(EQUILATERAL)
    assert sol.best.length == pytest.approx(SQRT3, abs=1e-12)
    assert len(sol.co_optima) == 1


def test_solve_collinear_points_chain():
    sol = solve_exact([0, 1, 3])
    assert sol.best.length == pytest.approx(3.0, abs=1e-12)
    assert terminal_degrees(sol.best) == [1, 2, 1]


def test_solve_rejects_bad_sizes_and_duplicates():
    with pytest.raises(ParameterError):
        solve_exact([0])
    with pytest.raises(ParameterError):
        solve_exact([complex(k, k % 3) for k in range(10)])
    with pytest.raises(DegenerateInputError):
        solve_exact([0, 1, 1 + 0j])


def test_solve_invariance_under_rigid_motions(rng):
    for _ in range(5):
        pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(4)]
        base = solve_exact(pts).best.length
        rot = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        shift = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        moved = solve_exact([rot * p + shift for p in pts]).best.length
        assert abs(moved - base) <= 1e-9 * max(1.0, base)
        scaled = solve_exact([2.5 * p for p in pts]).best.length
        assert abs(scaled - 2.5 * base) <= 1e-9 * max(1.0, base)


def test_solve_never_beats_mst_and_never_loses_to_it(rng):
    for _ in range(10):
        n = rng.randrange(3, 6)
        pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(n)]
        sol = solve_exact(pts)
        mst = minimum_spanning_tree(pts)
        assert sol.best.length <= mst.length + 1e-12


def test_solve_matches_descent_oracle_on_random_quadruples(rng):
    # the two-branch-point descent over all pairings reaches the exact
    # optimum for 4 terminals (degenerate merges included), independently
    # of the merge/reconstruct machinery
    for _ in range(20):
        pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(4)]
        sol = solve_exact(pts)
        oracle = two_steiner_descent(pts)
        assert sol.best.length == pytest.approx(oracle, abs=5e-7)
        assert sol.best.length <= oracle + 1e-12


def test_workers_path_matches_serial(rng):
    pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(7)]
    serial = solve_exact(pts, tol=1e-9)
    parallel = solve_exact(pts, tol=1e-9, workers=2)
    assert parallel.best.length == pytest.approx(serial.best.length, abs=1e-12)
    assert len(parallel.co_optima) == len(serial.co_optima)


def test_minimal_full_tree_square():
    tree = minimal_full_tree(SQUARE)
    assert tree is not None
    assert tree.length == pytest.approx(1 + SQRT3, abs=1e-12)
    assert terminal_degrees(tree) == [1, 1, 1, 1]


def test_mst_examples():
    assert minimum_spanning_tree([0, 5]).length == pytest.approx(5.0)
    assert minimum_spanning_tree(EQUILATERAL).length == pytest.approx(2.0, abs=1e-12)
    assert minimum_spanning_tree(SQUARE).length == pytest.approx(3.0, abs=1e-12)


def test_mst_matches_brute_force(rng):
    for _ in range(5):
        pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(5)]
        assert minimum_spanning_tree(pts).length == pytest.approx(
            brute_mst_length(pts), abs=1e-12
        )


def test_steiner_ratio_examples():
    assert steiner_ratio([0, 2 + 1j]) == 1.0
    assert steiner_ratio(EQUILATERAL) == pytest.approx(SQRT3 / 2, abs=1e-12)


def test_steiner_ratio_bounds_random_five_point_sets(rng):
    for _ in range(50):
        pts = [complex(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(5)]
        ratio = steiner_ratio(pts)
        assert SQRT3 / 2 - 1e-9 <= ratio <= 1.0 + 1e-12

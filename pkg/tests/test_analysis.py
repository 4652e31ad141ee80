import cmath
import math

import pytest

from steiner_ladder.analysis import (
    block_decompose,
    classify,
    clip_to_wedge,
    hausdorff_gap,
    is_decomposable,
    local_min_gradient,
    maxwell_length,
    trees_mirror_equal,
    validate_steiner_geometry,
    wedge_intersection_is_segment,
    wind_rose,
)
from steiner_ladder.errors import ParameterError
from steiner_ladder.ladder import LadderParams, build_ladder_tree_A0, build_ladder_tree_A1
from steiner_ladder.trees import STEINER, TERMINAL, EmbeddedTree

SQRT3 = math.sqrt(3)
ALPHA = math.pi / 36
LAM = 0.5


def regular_tripod(r=1.0):
    spokes = [r * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    return EmbeddedTree.build(
        [0j] + spokes, [STEINER] + [TERMINAL] * 3, [(0, 1), (0, 2), (0, 3)]
    )


def segment_tree(a=0, b=3 + 4j):
    return EmbeddedTree.build([a, b], [TERMINAL, TERMINAL], [(0, 1)])


@pytest.fixture(scope="module")
def a1_tree():
    return build_ladder_tree_A1(LadderParams(ALPHA, LAM, 5), "00")


@pytest.fixture(scope="module")
def a0_tree():
    return build_ladder_tree_A0(LadderParams(ALPHA, LAM, 12), "upper")


def test_maxwell_regular_tripod():
    real, resid = maxwell_length(regular_tripod())
    assert real == pytest.approx(3.0, abs=1e-12)
    assert resid < 1e-12


def test_maxwell_single_segment():
    real, resid = maxwell_length(segment_tree())
    assert real == pytest.approx(5.0, abs=1e-12)
    assert resid < 1e-12


def test_maxwell_rejects_non_full_star():
    bent = EmbeddedTree.build([0, 1, 1 + 1j], [TERMINAL] * 3, [(0, 1), (1, 2)])
    with pytest.raises(ParameterError):
        maxwell_length(bent)


def test_maxwell_on_ladder_trees(a1_tree, a0_tree):
    for tree in (a1_tree, a0_tree):
        real, resid = maxwell_length(tree)
        assert abs(real - tree.length) <= 1e-10 * tree.length
        assert resid <= 1e-9 * tree.length


def test_classify_tripod_and_ladders(a1_tree, a0_tree):
    assert classify(regular_tripod()) == "full"
    assert classify(a1_tree) == "full*"
    assert classify(a0_tree) == "full"
    skew = EmbeddedTree.build([0, 1, 2 + 0.5j], [TERMINAL] * 3, [(0, 1), (1, 2)])
    assert classify(skew) == "neither"


def test_wind_rose(a1_tree, a0_tree):
    assert len(wind_rose(regular_tripod()).directions) == 3
    assert len(wind_rose(a1_tree).directions) == 3
    rose0 = wind_rose(a0_tree).directions
    assert len(rose0) == 3
    # one direction parallel to the bisector
    assert min(min(d, math.pi - d) for d in rose0) < 1e-9


def test_validate_ladder_tree(a1_tree):
    report = validate_steiner_geometry(a1_tree)
    assert report.ok
    assert report.connected and report.acyclic
    assert report.max_angle_violation <= 1e-9
    assert report.inside_hull
    assert report.degree_histogram[3] == 6  # three branching points per block


def test_validate_flags_narrow_angle():
    # 110 degree angle at the middle vertex
    bad = EmbeddedTree.build(
        [0, 1, 1 + cmath.exp(1j * math.radians(70))],
        [TERMINAL, STEINER, TERMINAL],
        [(0, 1), (1, 2)],
    )
    report = validate_steiner_geometry(bad)
    assert report.max_angle_violation > math.radians(9)


def test_validate_flags_hull_escape():
    out = EmbeddedTree.build(
        [0, 1, 0.5 + 5j], [TERMINAL, TERMINAL, STEINER], [(0, 2), (2, 1)]
    )
    report = validate_steiner_geometry(out, terminals=[0, 1])
    assert not report.inside_hull


def test_local_min_gradient_tripod_and_perturbation():
    tripod = regular_tripod()
    assert local_min_gradient(tripod) < 1e-12
    h = 1e-3
    moved = EmbeddedTree.build(
        [complex(h, 0)] + list(tripod.vertices[1:]), tripod.roles, tripod.edges
    )
    g = local_min_gradient(moved)
    # finite-difference check: moving against the gradient recovers the length drop
    drop = moved.length - tripod.length
    assert g == pytest.approx(2 * drop / h, rel=1e-2)


def test_gradient_vanishes_on_ladder(a0_tree):
    assert local_min_gradient(a0_tree) < 1e-9


def test_decomposability(a1_tree, a0_tree):
    assert is_decomposable(a1_tree)
    assert not is_decomposable(a0_tree)
    assert not is_decomposable(segment_tree())
    blocks = block_decompose(a1_tree)
    assert len(blocks) == 2
    for b in blocks:
        assert sum(1 for r in b.roles if r == TERMINAL) == 5
        assert classify(b) == "full"
    assert sum(b.length for b in blocks) == pytest.approx(a1_tree.length, rel=1e-12)


def test_trees_mirror_equal(a0_tree):
    assert trees_mirror_equal(a0_tree, a0_tree) is False  # its own mirror is the lower tree
    lower = build_ladder_tree_A0(LadderParams(ALPHA, LAM, 12), "lower")
    assert trees_mirror_equal(a0_tree, lower, tol=1e-9)
    tripod = regular_tripod()
    assert trees_mirror_equal(tripod, tripod, axis_angle=0.0, tol=1e-12)


def test_mirror_words_differ():
    params = LadderParams(ALPHA, LAM, 9)
    t1 = build_ladder_tree_A1(params, "0100")
    t2 = build_ladder_tree_A1(params, "0010")
    assert not trees_mirror_equal(t1, t2, tol=1e-6)
    assert hausdorff_gap(t1, t2) > 1e-4


def test_wedge_clipping(a1_tree):
    # a wedge opening away from all terminals meets the tree in one segment
    apex = complex(0.75 * math.cos(ALPHA), 0.8 * math.sin(ALPHA))
    assert wedge_intersection_is_segment(a1_tree, apex, math.pi / 2, math.pi / 3)
    # a wedge containing a branching point fails the single-segment property
    tripod = regular_tripod()
    assert not wedge_intersection_is_segment(tripod, -0.1 - 0.05j, 0.0, math.pi / 3)
    assert clip_to_wedge(tripod, 10 + 10j, 0.0, math.pi / 12) == []

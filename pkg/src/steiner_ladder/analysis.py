"""Diagnostics for embedded trees.

Covers the complex length functional (a real linear form in the low-degree
vertices of a tree whose branching angles are all 2*pi/3), wind-rose
extraction, full / full* classification, geometric validity reports, the
local-minimality gradient, decomposition at repeated terminals, and mirror
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .geometry import (
    TWO_THIRDS_PI,
    angle_at,
    convex_hull,
    point_in_hull,
    point_segment_distance,
    reflect_across,
)
from .trees import TERMINAL, EmbeddedTree

FULL = "full"
FULL_STAR = "full*"
NEITHER = "neither"

ANGLE_TOL = 1e-9
WIND_ROSE_TOL = 1e-6


@dataclass(frozen=True)
class WindRose:
    """Undirected edge directions, as angles in [0, pi)."""

    directions: tuple[float, ...]


@dataclass(frozen=True)
class ValidityReport:
    connected: bool
    acyclic: bool
    max_angle_violation: float
    degree_histogram: dict[int, int]
    inside_hull: bool

    @property
    def ok(self) -> bool:
        return (
            self.connected
            and self.acyclic
            and self.max_angle_violation <= ANGLE_TOL
            and self.inside_hull
        )


def _vertex_angles(tree: EmbeddedTree) -> list[list[float]]:
    """Pairwise convex angles between edges at each vertex."""
    adj = tree.adjacency()
    out: list[list[float]] = []
    for i, nbrs in enumerate(adj):
        angles = []
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                angles.append(
                    angle_at(tree.vertices[i], tree.vertices[nbrs[a]], tree.vertices[nbrs[b]])
                )
        out.append(angles)
    return out


def classify(tree: EmbeddedTree, angle_tol: float = ANGLE_TOL) -> str:
    """``full`` / ``full*`` / ``neither`` by angle inspection.

    full*: connected, acyclic, and every convex angle between edges sharing a
    vertex equals 2*pi/3 (so degrees are at most 3).  full additionally has no
    degree-2 vertex.
    """
    if not (tree.is_connected() and tree.is_acyclic()):
        return NEITHER
    deg = tree.degrees()
    if any(d > 3 for d in deg):
        return NEITHER
    for angles in _vertex_angles(tree):
        for ang in angles:
            if abs(ang - TWO_THIRDS_PI) > angle_tol:
                return NEITHER
    return FULL if all(d != 2 for d in deg) else FULL_STAR


def wind_rose(tree: EmbeddedTree, tol: float = WIND_ROSE_TOL) -> WindRose:
    """Cluster edge directions modulo pi with the given angular tolerance."""
    angles = []
    for u, v in tree.edges:
        d = tree.vertices[v] - tree.vertices[u]
        if d == 0:
            continue
        angles.append(math.atan2(d.imag, d.real) % math.pi)
    angles.sort()
    reps: list[float] = []
    for ang in angles:
        if any(_mod_pi_gap(ang, r) <= tol for r in reps):
            continue
        reps.append(ang)
    return WindRose(tuple(sorted(reps)))


def _mod_pi_gap(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def maxwell_length(tree: EmbeddedTree) -> tuple[float, float]:
    """Length of a full* tree as a linear form in its low-degree vertices.

    Each degree-1 vertex contributes conj(outgoing unit direction) * vertex;
    a degree-2 vertex uses the direction completing its two edges to a
    regular tripod.  Returns ``(real_part, |imaginary_residual|)``; the
    residual vanishes for exact full* trees.
    """
    kind = classify(tree)
    if kind == NEITHER:
        raise ParameterError("maxwell_length requires a full or full* tree")
    adj = tree.adjacency()
    total = 0j
    for i, nbrs in enumerate(adj):
        if len(nbrs) >= 3:
            continue
        z = tree.vertices[i]
        units = []
        for j in nbrs:
            d = tree.vertices[j] - z
            units.append(d / abs(d))
        if len(units) == 1:
            c = -units[0]
        else:
            s = units[0] + units[1]
            c = -s / abs(s)
        total += c.conjugate() * z
    return total.real, abs(total.imag)


def local_min_gradient(tree: EmbeddedTree) -> float:
    """Max norm of the length gradient over movable (branching) vertices."""
    adj = tree.adjacency()
    worst = 0.0
    for i, nbrs in enumerate(adj):
        if tree.roles[i] == TERMINAL:
            continue
        z = tree.vertices[i]
        s = 0j
        for j in nbrs:
            d = tree.vertices[j] - z
            s += d / abs(d)
        worst = max(worst, abs(s))
    return worst


def validate_steiner_geometry(tree: EmbeddedTree, terminals=None) -> ValidityReport:
    """Aggregate geometric checks a claimed minimal tree must pass."""
    deg = tree.degrees()
    hist: dict[int, int] = {}
    for d in deg:
        hist[d] = hist.get(d, 0) + 1
    violation = 0.0
    for angles in _vertex_angles(tree):
        for ang in angles:
            violation = max(violation, TWO_THIRDS_PI - ang)
    violation = max(0.0, violation)
    if terminals is not None:
        hull_pts = [complex(p) for p in getattr(terminals, "points", terminals)]
    else:
        hull_pts = [tree.vertices[i] for i in tree.terminal_indices()]
    hull = convex_hull(hull_pts)
    scale = tree.diameter() or 1.0
    inside = all(point_in_hull(v, hull, tol=1e-9 * scale) for v in tree.vertices)
    return ValidityReport(
        connected=tree.is_connected(),
        acyclic=tree.is_acyclic(),
        max_angle_violation=violation,
        degree_histogram=hist,
        inside_hull=inside,
    )


def is_decomposable(tree: EmbeddedTree, terminals=None) -> bool:
    """True when some terminal vertex has degree >= 2 (a splitting point)."""
    deg = tree.degrees()
    return any(deg[i] >= 2 for i in tree.terminal_indices())


def block_decompose(tree: EmbeddedTree) -> list[EmbeddedTree]:
    """Split at every terminal of degree >= 2 into its full components.

    Splitting terminals are duplicated into each incident component; the
    component lengths sum to the total length.
    """
    deg = tree.degrees()
    cut = {i for i in tree.terminal_indices() if deg[i] >= 2}
    adj = tree.adjacency()
    seen_edges: set[tuple[int, int]] = set()
    blocks: list[EmbeddedTree] = []
    for u0, v0 in tree.edges:
        if (u0, v0) in seen_edges:
            continue
        comp_edges: list[tuple[int, int]] = []
        stack = [(u0, v0)]
        seen_edges.add((u0, v0))
        comp_edges.append((u0, v0))
        while stack:
            u, v = stack.pop()
            for w in (u, v):
                if w in cut:
                    continue
                for x in adj[w]:
                    e = (min(w, x), max(w, x))
                    if e not in seen_edges:
                        seen_edges.add(e)
                        comp_edges.append(e)
                        stack.append(e)
        idxs = sorted({i for e in comp_edges for i in e})
        remap = {g: l for l, g in enumerate(idxs)}
        blocks.append(
            EmbeddedTree.build(
                [tree.vertices[g] for g in idxs],
                [tree.roles[g] for g in idxs],
                [(remap[u], remap[v]) for u, v in comp_edges],
            )
        )
    return blocks


def _sample_segments(tree: EmbeddedTree, per_edge: int = 9) -> list[complex]:
    pts: list[complex] = []
    for u, v in tree.edges:
        a, b = tree.vertices[u], tree.vertices[v]
        for k in range(per_edge + 1):
            pts.append(a + (b - a) * (k / per_edge))
    return pts


def distance_to_tree(z: complex, tree: EmbeddedTree) -> float:
    return min(
        point_segment_distance(z, tree.vertices[u], tree.vertices[v]) for u, v in tree.edges
    )


def hausdorff_gap(t1: EmbeddedTree, t2: EmbeddedTree, per_edge: int = 9) -> float:
    """Symmetric sampled Hausdorff distance between two trees."""
    d1 = max(distance_to_tree(z, t2) for z in _sample_segments(t1, per_edge))
    d2 = max(distance_to_tree(z, t1) for z in _sample_segments(t2, per_edge))
    return max(d1, d2)


def trees_mirror_equal(
    t1: EmbeddedTree,
    t2: EmbeddedTree,
    axis_point: complex = 0j,
    axis_angle: float = 0.0,
    tol: float = 1e-8,
) -> bool:
    """True when t1 reflected across the axis coincides with t2 within ``tol``."""
    reflected = EmbeddedTree.build(
        [reflect_across(v, axis_point, axis_angle) for v in t1.vertices],
        t1.roles,
        t1.edges,
    )
    return hausdorff_gap(reflected, t2) <= tol


def clip_to_wedge(
    tree: EmbeddedTree, apex: complex, bisector_angle: float, half_angle: float
) -> list[tuple[complex, complex]]:
    """Sub-segments of the tree inside the closed wedge at ``apex``.

    The wedge opens ``half_angle`` to each side of the ``bisector_angle``
    direction.  Implemented as two half-plane clips.
    """
    normals = []
    for side in (half_angle + math.pi / 2, -half_angle - math.pi / 2):
        ang = bisector_angle + side
        normals.append(complex(math.cos(ang), math.sin(ang)))
    # inside: dot(z - apex, -normal) >= 0 for both boundary normals
    out = []
    for u, v in tree.edges:
        a, b = tree.vertices[u] - apex, tree.vertices[v] - apex
        lo, hi = 0.0, 1.0
        ok = True
        for nrm in normals:
            fa = -(a.real * nrm.real + a.imag * nrm.imag)
            fb = -(b.real * nrm.real + b.imag * nrm.imag)
            if fa < 0 and fb < 0:
                ok = False
                break
            if fa < 0:
                lo = max(lo, fa / (fa - fb))
            elif fb < 0:
                hi = min(hi, fa / (fa - fb))
        if ok and lo < hi - 1e-15:
            p = tree.vertices[u]
            q = tree.vertices[v]
            out.append((p + (q - p) * lo, p + (q - p) * hi))
    return out


def wedge_intersection_is_segment(
    tree: EmbeddedTree,
    apex: complex,
    bisector_angle: float,
    half_angle: float = math.pi / 3,
    tol: float = 1e-9,
) -> bool:
    """True when the tree meets the wedge in a single segment or not at all."""
    pieces = clip_to_wedge(tree, apex, bisector_angle, half_angle)
    pieces = [(a, b) for a, b in pieces if abs(b - a) > tol]
    if len(pieces) <= 1:
        return True
    d0 = pieces[0][1] - pieces[0][0]
    d0 /= abs(d0)
    scale = max(abs(b - a) for a, b in pieces)
    for a, b in pieces:
        for z in (a, b):
            w = z - pieces[0][0]
            if abs(w.real * d0.imag - w.imag * d0.real) > tol * (1.0 + scale):
                return False
    # collinear; require the union of parameter intervals to be contiguous
    intervals = sorted(
        (
            min((a - pieces[0][0]).real * d0.real + (a - pieces[0][0]).imag * d0.imag,
                (b - pieces[0][0]).real * d0.real + (b - pieces[0][0]).imag * d0.imag),
            max((a - pieces[0][0]).real * d0.real + (a - pieces[0][0]).imag * d0.imag,
                (b - pieces[0][0]).real * d0.real + (b - pieces[0][0]).imag * d0.imag),
        )
        for a, b in pieces
    )
    cur = intervals[0][1]
    for lo, hi in intervals[1:]:
        if lo > cur + tol * (1.0 + scale):
            return False
        cur = max(cur, hi)
    return True

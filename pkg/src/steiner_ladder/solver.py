"""Exact geometric Steiner trees for small planar terminal sets.

A full topology is realized by the classic merge/reconstruct scheme: pairs of
leaves attached to a common branching label are repeatedly replaced by the
third vertex of their equilateral triangle (both orientations are branched
on), the surviving two-point segment gives the candidate length, and walking
the merges backwards intersects each segment with the corresponding
circumcircle arc to place the branching points.  A branch whose
reconstruction point leaves the open arc is infeasible.

``solve_exact`` exhausts full components over all terminal subsets and glues
them at shared terminals (blocks pairwise share at most one terminal and the
block graph is a tree), which covers every possible Steiner minimal tree
structure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateInputError, ParameterError
from .geometry import SQRT3
from .topology import Topology, iter_full_topologies
from .trees import STEINER, TERMINAL, EmbeddedTree, as_points

MAX_TERMINALS = 9

_ROT_L = complex(0.5, SQRT3 / 2.0)
_ROT_R = complex(0.5, -SQRT3 / 2.0)


@dataclass(frozen=True)
class SteinerSolution:
    """Global minimum plus every distinct optimal embedding within ``tol``."""

    best: EmbeddedTree
    co_optima: tuple[EmbeddedTree, ...]
    optimality_gap_tol: float


# ---------------------------------------------------------------------------
# merge planning


def _merge_plan(topo: Topology) -> tuple[list[tuple[int, int, int, int]], int, int]:
    """Merge schedule ``(steiner, leaf_a, leaf_b, remaining_neighbor)``.

    Terminal 0 is never consumed, so the reduced tree always ends as the
    segment [terminal 0, last merged label]; that anchors the reconstruction.
    """
    n = topo.n_terminals
    total = n + topo.n_steiner
    cur: dict[int, set[int]] = {v: set() for v in range(total)}
    for u, v in topo.edges:
        cur[u].add(v)
        cur[v].add(u)
    root = 0
    plan: list[tuple[int, int, int, int]] = []
    remaining = set(range(n, total))
    while remaining:
        chosen = None
        for s in sorted(remaining):
            leaves = sorted(v for v in cur[s] if len(cur[v]) == 1 and v != root)
            if len(leaves) >= 2:
                chosen = (s, leaves[0], leaves[1])
                break
        if chosen is None:
            raise ParameterError("topology is not a full Steiner topology")
        s, a, b = chosen
        third = next(iter(cur[s] - {a, b}))
        plan.append((s, a, b, third))
        del cur[a]
        del cur[b]
        cur[s] -= {a, b}
        remaining.discard(s)
    last = plan[-1][0]
    return plan, root, last


def _validate_full_topology(points: Sequence[complex], topo: Topology) -> None:
    if topo.n_terminals != len(points):
        raise ParameterError(
            f"topology is on {topo.n_terminals} terminals, got {len(points)} points"
        )
    deg = [0] * (topo.n_terminals + topo.n_steiner)
    for u, v in topo.edges:
        deg[u] += 1
        deg[v] += 1
    if any(d != 1 for d in deg[: topo.n_terminals]) or any(
        d != 3 for d in deg[topo.n_terminals :]
    ):
        raise ParameterError("topology is not full (terminal degree 1, branch degree 3)")


# ---------------------------------------------------------------------------
# realization


def _reconstruct(
    points: Sequence[complex],
    pseudo: list[complex],
    plan: list[tuple[int, int, int, int]],
    root: int,
    last: int,
) -> dict[int, complex] | None:
    """Final branching positions for one orientation word, or None if infeasible."""
    n = len(points)
    final: dict[int, complex] = {}
    for s, a, b, third in reversed(plan):
        X = final[third] if third >= n else points[third]
        E = pseudo[s]
        p1 = pseudo[a] if a >= n else points[a]
        p2 = pseudo[b] if b >= n else points[b]
        center = (p1 + p2 + E) / 3.0
        chord = p2 - p1
        radius = abs(chord) / SQRT3
        eps = 1e-12 * radius
        d = E - X
        dd = d.real * d.real + d.imag * d.imag
        if dd <= eps * eps:
            return None
        f = X - center
        bq = 2.0 * (f.real * d.real + f.imag * d.imag)
        cq = f.real * f.real + f.imag * f.imag - radius * radius
        disc = bq * bq - 4.0 * dd * cq
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        # stable quadratic roots; E sits on the circle so one root is ~1
        if bq >= 0.0:
            qf = -0.5 * (bq + sq)
        else:
            qf = -0.5 * (bq - sq)
        roots = []
        if dd != 0.0:
            roots.append(qf / dd)
        if qf != 0.0:
            roots.append(cq / qf)
        if not roots:
            return None
        t = max(roots, key=lambda r: abs(r - 1.0))
        seg = math.sqrt(dd)
        if not (t * seg > eps and (1.0 - t) * seg > eps):
            return None
        q = X + t * d
        # q must sit on the arc facing away from E: strictly opposite side of the chord
        cross_e = chord.real * (E - p1).imag - chord.imag * (E - p1).real
        cross_q = chord.real * (q - p1).imag - chord.imag * (q - p1).real
        if cross_e >= 0.0:
            if cross_q > -eps * abs(chord):
                return None
        else:
            if cross_q < eps * abs(chord):
                return None
        final[s] = q
    return final


def _scan_topology(
    points: Sequence[complex],
    topo: Topology,
    topo_key: int,
    best: float,
    keep: float,
    out: list,
) -> float:
    """DFS over the 2^(n-2) orientation words of one topology.

    Valid realizations with merge length below ``best + keep`` are appended to
    ``out`` as ``(length, topo_key, word, final_positions, topo)``; returns the
    updated best valid length.  Pruning against the running best is safe
    because the caller re-filters against the final best.
    """
    plan, root, last = _merge_plan(topo)
    m = len(plan)
    pos: list[complex] = list(points) + [0j] * topo.n_steiner
    sides = [0] * m
    steps = [(s, a, b) for s, a, b, _ in plan]

    def rec(k: int, best: float) -> float:
        if k == m:
            L = abs(pos[root] - pos[last])
            if L < best + keep:
                final = _reconstruct(points, pos, plan, root, last)
                if final is not None:
                    out.append((L, topo_key, tuple(sides), dict(final), topo))
                    if L < best:
                        best = L
            return best
        s, a, b = steps[k]
        pa = pos[a]
        d = pos[b] - pa
        pos[s] = pa + d * _ROT_L
        sides[k] = 0
        best = rec(k + 1, best)
        pos[s] = pa + d * _ROT_R
        sides[k] = 1
        best = rec(k + 1, best)
        return best

    return rec(0, best)


def _tree_from_candidate(
    points: Sequence[complex], topo: Topology, final: dict[int, complex]
) -> EmbeddedTree | None:
    n = topo.n_terminals
    verts = list(points) + [final[s] for s in range(n, n + topo.n_steiner)]
    scale = max(abs(p - q) for p in points for q in points) if n > 1 else 1.0
    for u, v in topo.edges:
        if abs(verts[u] - verts[v]) <= 1e-12 * (1.0 + scale):
            return None
    tree = EmbeddedTree.build(verts, [TERMINAL] * n + [STEINER] * topo.n_steiner, topo.edges)
    return tree


def realize_full_topology(terminals, topo: Topology) -> EmbeddedTree | None:
    """Realize ``topo`` on the given terminals, or None when infeasible.

    Both equilateral orientations are tried at every merge; among valid
    reconstructions the shortest is returned (orientation word breaks ties).
    """
    points = as_points(terminals)
    if len(points) == 2:
        return EmbeddedTree.build(points, [TERMINAL, TERMINAL], [(0, 1)])
    _validate_full_topology(points, topo)
    out: list = []
    best = _scan_topology(points, topo, 0, math.inf, 1e-9 * _span(points), out)
    candidates = sorted(
        (c for c in out if c[0] <= best + 1e-12 * (1.0 + _span(points))),
        key=lambda c: (c[0], c[2]),
    )
    for L, _key, _word, final, t in candidates:
        tree = _tree_from_candidate(points, t, final)
        if tree is not None and abs(tree.length - L) <= 1e-9 * (1.0 + L):
            return tree
    return None


def minimal_full_tree(terminals) -> EmbeddedTree | None:
    """Shortest realizable full topology over all topologies, or None."""
    points = as_points(terminals)
    if len(points) == 2:
        return EmbeddedTree.build(points, [TERMINAL, TERMINAL], [(0, 1)])
    kept = _subset_full_trees(points, keep=1e-12 * (1.0 + _span(points)))
    return kept[0][1] if kept else None


def _span(points: Sequence[complex]) -> float:
    if len(points) < 2:
        return 1.0
    return max(abs(p - q) for i, p in enumerate(points) for q in points[i + 1 :])


def _subset_full_trees(
    points: Sequence[complex],
    keep: float,
    topos: Iterable[Topology] | None = None,
) -> list[tuple[float, EmbeddedTree]]:
    """Valid full trees on ``points`` within ``keep`` of the shortest one."""
    n = len(points)
    out: list = []
    best = math.inf
    source = topos if topos is not None else iter_full_topologies(n)
    for key, topo in enumerate(source):
        best = _scan_topology(points, topo, key, best, keep, out)
    result = []
    for L, key, word, final, topo in sorted(
        (c for c in out if c[0] <= best + keep), key=lambda c: (c[0], c[1], c[2])
    ):
        tree = _tree_from_candidate(points, topo, final)
        if tree is not None and abs(tree.length - L) <= 1e-9 * (1.0 + L):
            result.append((L, tree))
    return result


# ---------------------------------------------------------------------------
# exact solver over block structures


def solve_exact(terminals, tol: float = 1e-9, workers: int | None = None) -> SteinerSolution:
    """Exact Steiner minimal trees on 2..9 terminals.

    Every candidate is a union of full components glued at shared terminals;
    full components are exhausted per terminal subset via the merge scheme.
    ``co_optima`` lists all geometrically distinct optima within ``tol`` of
    the best length, canonically ordered.
    """
    points = as_points(terminals)
    n = len(points)
    if not 2 <= n <= MAX_TERMINALS:
        raise ParameterError(f"solve_exact requires 2..{MAX_TERMINALS} terminals, got {n}")
    scale = _span(points)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= 1e-12 * (1.0 + scale):
                raise DegenerateInputError(f"terminals {i} and {j} coincide")

    keep = tol + 1e-10 * (1.0 + scale)
    table = _full_component_table(points, keep, workers)

    weight = {mask: entries[0][0] for mask, entries in table.items() if entries}
    min_total, g = _hypertree_dp(n, weight)
    if not math.isfinite(min_total):
        raise ParameterError("no connected structure found")  # unreachable: segments always exist

    structures = _enumerate_structures(n, weight, g, min_total, tol + 1e-10 * (1.0 + scale))

    candidates: list[EmbeddedTree] = []
    for structure in sorted(structures, key=lambda s: tuple(sorted(s))):
        blocks = sorted(structure)
        per_block = [table[b] for b in blocks]
        floor = sum(entries[0][0] for entries in per_block)
        slack = min_total + tol - floor
        for combo in itertools.product(*per_block):
            extra = sum(L for L, _t in combo) - floor
            if extra > slack + 1e-12 * (1.0 + scale):
                continue
            tree = _assemble(points, blocks, [t for _L, t in combo])
            if not _has_crossing(tree):
                candidates.append(tree)

    if not candidates:
        raise ParameterError("no valid embedding found")  # unreachable
    best_len = min(t.length for t in candidates)
    optima = [t for t in candidates if t.length <= best_len + tol]
    optima = _dedupe(optima, 1e-6 * max(scale, 1e-30))
    optima.sort(key=_canonical_key)
    return SteinerSolution(optima[0], tuple(optima), tol)


def _full_component_table(
    points: tuple[complex, ...], keep: float, workers: int | None
) -> dict[int, list[tuple[float, EmbeddedTree]]]:
    """Best full trees (within ``keep``) for every terminal subset mask."""
    n = len(points)
    table: dict[int, list[tuple[float, EmbeddedTree]]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            mask = (1 << i) | (1 << j)
            seg = EmbeddedTree.build(
                [points[i], points[j]], [TERMINAL, TERMINAL], [(0, 1)]
            )
            table[mask] = [(seg.length, seg)]

    sizes = list(range(3, n + 1))
    jobs: list[tuple[int, tuple[complex, ...]]] = []
    for size in sizes:
        for idxs in itertools.combinations(range(n), size):
            mask = 0
            for i in idxs:
                mask |= 1 << i
            jobs.append((mask, tuple(points[i] for i in idxs)))

    results: dict[int, list[tuple[float, EmbeddedTree]]] = {}
    if workers and workers > 1 and n >= 7:
        results = _run_parallel(jobs, keep, workers)
    else:
        topo_cache: dict[int, list[Topology]] = {}
        for mask, pts in jobs:
            size = len(pts)
            if size < n:
                topos = topo_cache.setdefault(size, list(iter_full_topologies(size)))
                results[mask] = _subset_full_trees(pts, keep, topos)
            else:
                results[mask] = _subset_full_trees(pts, keep)
    table.update(results)
    return table


def _chunk_worker(args) -> tuple[int, list[tuple[float, EmbeddedTree]]]:
    mask, pts, keep, chunk = args
    if chunk is None:
        return mask, _subset_full_trees(pts, keep)
    return mask, _subset_full_trees(pts, keep, topos=chunk)


def _run_parallel(
    jobs: list[tuple[int, tuple[complex, ...]]], keep: float, workers: int
) -> dict[int, list[tuple[float, EmbeddedTree]]]:
    import concurrent.futures as cf

    nmax = max(len(pts) for _m, pts in jobs)
    tasks = []
    for mask, pts in jobs:
        if len(pts) == nmax and nmax >= 8:
            topos = list(iter_full_topologies(len(pts)))
            step = max(1, len(topos) // (4 * workers))
            for lo in range(0, len(topos), step):
                tasks.append((mask, pts, keep, topos[lo : lo + step]))
        else:
            tasks.append((mask, pts, keep, None))

    merged: dict[int, list[tuple[float, EmbeddedTree]]] = {}
    try:
        with cf.ProcessPoolExecutor(max_workers=workers) as pool:
            for mask, kept in pool.map(_chunk_worker, tasks, chunksize=1):
                merged.setdefault(mask, []).extend(kept)
    except (OSError, RuntimeError):
        merged.clear()
        for task in tasks:
            mask, kept = _chunk_worker(task)
            merged.setdefault(mask, []).extend(kept)

    out: dict[int, list[tuple[float, EmbeddedTree]]] = {}
    for mask, entries in merged.items():
        if not entries:
            out[mask] = []
            continue
        best = min(L for L, _t in entries)
        kept = [(L, t) for L, t in entries if L <= best + keep]
        kept.sort(key=lambda e: (e[0], _canonical_key(e[1])))
        out[mask] = kept
    return out


def _hypertree_dp(n: int, weight: dict[int, float]) -> tuple[float, dict[int, float]]:
    """Min cost to span mask S (S containing terminal 0) by glued blocks.

    A hypertree always has a leaf block; removing it (keeping its attachment
    terminal) leaves a hypertree, which gives the recurrence.
    """
    full = (1 << n) - 1
    g = {1: 0.0}
    masks = sorted((m for m in range(1, full + 1) if m & 1), key=lambda m: bin(m).count("1"))
    for S in masks:
        if S == 1:
            continue
        best = math.inf
        B = S
        while B:
            if bin(B).count("1") >= 2:
                w = weight.get(B)
                if w is not None:
                    rest = S & ~B
                    bits = B
                    while bits:
                        attach = bits & -bits
                        bits ^= attach
                        removed = B & ~attach
                        if removed & 1:
                            continue
                        prev = rest | attach
                        gp = g.get(prev)
                        if gp is not None and gp + w < best:
                            best = gp + w
            B = (B - 1) & S
        if math.isfinite(best):
            g[S] = best
    return g.get(full, math.inf), g


def _enumerate_structures(
    n: int, weight: dict[int, float], g: dict[int, float], min_total: float, budget_slack: float
) -> set[frozenset[int]]:
    """All block structures whose total weight is within the budget of optimal."""
    full = (1 << n) - 1
    out: set[frozenset[int]] = set()

    def rec(S: int, budget: float, acc: tuple[int, ...]) -> None:
        if S == 1:
            out.add(frozenset(acc))
            return
        B = S
        while B:
            if bin(B).count("1") >= 2:
                w = weight.get(B)
                if w is not None and w <= budget + 1e-15:
                    rest = S & ~B
                    bits = B
                    while bits:
                        attach = bits & -bits
                        bits ^= attach
                        removed = B & ~attach
                        if removed & 1:
                            continue
                        prev = rest | attach
                        gp = g.get(prev)
                        if gp is not None and gp + w <= budget:
                            rec(prev, budget - w, acc + (B,))
            B = (B - 1) & S
    rec(full, min_total + budget_slack, ())
    return out


def _assemble(
    points: tuple[complex, ...], blocks: list[int], trees: list[EmbeddedTree]
) -> EmbeddedTree:
    n = len(points)
    verts: list[complex] = list(points)
    roles: list[str] = [TERMINAL] * n
    edges: list[tuple[int, int]] = []
    for mask, tree in zip(blocks, trees):
        idxs = [i for i in range(n) if mask >> i & 1]
        mapping: dict[int, int] = {}
        for local, v in enumerate(tree.vertices):
            if tree.roles[local] == TERMINAL:
                mapping[local] = idxs[local]
            else:
                verts.append(v)
                roles.append(STEINER)
                mapping[local] = len(verts) - 1
        for u, v in tree.edges:
            edges.append((mapping[u], mapping[v]))
    return EmbeddedTree.build(verts, roles, edges)


def _has_crossing(tree: EmbeddedTree) -> bool:
    """True when two edges not sharing a vertex properly cross."""
    segs = [(u, v, tree.vertices[u], tree.vertices[v]) for u, v in tree.edges]
    eps = 1e-12 * (1.0 + tree.diameter())
    for i in range(len(segs)):
        u1, v1, a1, b1 = segs[i]
        for j in range(i + 1, len(segs)):
            u2, v2, a2, b2 = segs[j]
            if {u1, v1} & {u2, v2}:
                continue
            if _proper_cross(a1, b1, a2, b2, eps):
                return True
    return False


def _proper_cross(a: complex, b: complex, c: complex, d: complex, eps: float) -> bool:
    def orient(p: complex, q: complex, r: complex) -> float:
        return (q.real - p.real) * (r.imag - p.imag) - (q.imag - p.imag) * (r.real - p.real)

    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return (o1 > eps and o2 < -eps or o1 < -eps and o2 > eps) and (
        o3 > eps and o4 < -eps or o3 < -eps and o4 > eps
    )


def _collapsed_vertices(tree: EmbeddedTree, tol: float) -> list[complex]:
    out: list[complex] = []
    for v in tree.vertices:
        if all(abs(v - w) > tol for w in out):
            out.append(v)
    return out


def trees_geometrically_equal(t1: EmbeddedTree, t2: EmbeddedTree, tol: float) -> bool:
    """Vertex sets match under greedy nearest pairing within ``tol``."""
    a = _collapsed_vertices(t1, tol * 1e-3)
    b = _collapsed_vertices(t2, tol * 1e-3)
    if len(a) != len(b):
        return False
    unused = list(b)
    for v in a:
        best_i = min(range(len(unused)), key=lambda i: abs(unused[i] - v), default=None)
        if best_i is None or abs(unused[best_i] - v) > tol:
            return False
        unused.pop(best_i)
    return True


def _dedupe(trees: list[EmbeddedTree], tol: float) -> list[EmbeddedTree]:
    out: list[EmbeddedTree] = []
    for t in trees:
        if not any(trees_geometrically_equal(t, u, tol) for u in out):
            out.append(t)
    return out


def _canonical_key(tree: EmbeddedTree):
    pts = sorted((round(v.real, 9), round(v.imag, 9)) for v in tree.vertices)
    return (round(tree.length, 9), len(tree.vertices), tuple(pts))


# ---------------------------------------------------------------------------
# spanning-tree utilities


def minimum_spanning_tree(terminals) -> EmbeddedTree:
    """Euclidean minimum spanning tree on the complete terminal graph (Prim)."""
    points = as_points(terminals)
    n = len(points)
    if n < 2:
        raise ParameterError("minimum_spanning_tree requires n >= 2")
    in_tree = [False] * n
    dist = [math.inf] * n
    link = [-1] * n
    dist[0] = 0.0
    edges: list[tuple[int, int]] = []
    for _ in range(n):
        u = min((i for i in range(n) if not in_tree[i]), key=lambda i: dist[i])
        in_tree[u] = True
        if link[u] >= 0:
            edges.append((link[u], u))
        for v in range(n):
            if not in_tree[v]:
                d = abs(points[u] - points[v])
                if d < dist[v]:
                    dist[v] = d
                    link[v] = u
    return EmbeddedTree.build(points, [TERMINAL] * n, edges)


def steiner_ratio(terminals, tol: float = 1e-9, workers: int | None = None) -> float:
    """Steiner minimal length divided by minimum spanning length."""
    points = as_points(terminals)
    if len(points) == 2:
        return 1.0
    solution = solve_exact(points, tol=tol, workers=workers)
    return solution.best.length / minimum_spanning_tree(points).length

"""Abstract full Steiner topologies and block decompositions.

Terminals of an ``n``-terminal topology are labelled ``0 .. n-1`` and the
``n-2`` branching labels are ``n .. 2n-3``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .errors import ParameterError

MAX_TERMINALS = 9


@dataclass(frozen=True)
class Topology:
    """Abstract tree: terminals of degree 1, branching labels of degree 3."""

    n_terminals: int
    n_steiner: int
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_terminals + self.n_steiner)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def count_full_topologies(n: int) -> int:
    """(2n-4)! / (2^(n-2) (n-2)!) full topologies on ``n`` labelled terminals."""
    if n < 3:
        raise ParameterError(f"count_full_topologies requires n >= 3, got {n}")
    return math.factorial(2 * n - 4) // (2 ** (n - 2) * math.factorial(n - 2))


def iter_full_topologies(n: int) -> Iterator[Topology]:
    """Yield every full topology on ``n`` terminals, canonically encoded.

    Incremental construction: terminal ``k`` is attached by splitting each
    edge of every topology on ``k`` terminals with a fresh branching label.
    Each topology is produced exactly once.
    """
    if not 3 <= n <= MAX_TERMINALS:
        raise ParameterError(f"iter_full_topologies requires 3 <= n <= {MAX_TERMINALS}")

    def grow(edges: list[tuple[int, int]], k: int) -> Iterator[list[tuple[int, int]]]:
        if k == n:
            yield edges
            return
        s = n + k - 2  # branching label created when terminal k is attached
        for i, (u, v) in enumerate(edges):
            rest = edges[:i] + edges[i + 1 :]
            yield from grow(rest + [(u, s), (s, v), (k, s)], k + 1)

    base = [(0, n), (1, n), (2, n)]
    for edge_list in grow(base, 3):
        yield _canonical(n, edge_list)


def enumerate_full_topologies(n: int) -> list[Topology]:
    """All full topologies on ``n`` terminals (see ``iter_full_topologies``)."""
    return list(iter_full_topologies(n))


def _canonical(n: int, edge_list: list[tuple[int, int]]) -> Topology:
    """Renumber branching labels in BFS order from terminal 0, sort edges."""
    adj: dict[int, list[int]] = {}
    for u, v in edge_list:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    relabel: dict[int, int] = {}
    next_label = n
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        if u >= n and u not in relabel:
            relabel[u] = next_label
            next_label += 1
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    out = []
    for u, v in edge_list:
        a = relabel.get(u, u)
        b = relabel.get(v, v)
        out.append((a, b) if a < b else (b, a))
    out.sort()
    return Topology(n, n - 2, tuple(out))


@dataclass(frozen=True)
class BlockDecomposition:
    """Terminal subsets gluing into a connected spanning structure.

    Pairwise intersections have size at most one, the block sizes satisfy
    ``sum(len(b) - 1) == n - 1`` and the block-intersection graph is a tree.
    """

    n: int
    blocks: tuple[frozenset[int], ...]


def enumerate_block_decompositions(n: int, min_block: int = 2) -> list[BlockDecomposition]:
    """All decompositions of ``range(n)`` into glued blocks of >= ``min_block``."""
    return list(iter_block_decompositions(n, min_block))


def iter_block_decompositions(n: int, min_block: int = 2) -> Iterator[BlockDecomposition]:
    if not 2 <= n <= MAX_TERMINALS:
        raise ParameterError(f"block decompositions require 2 <= n <= {MAX_TERMINALS}")
    if min_block < 2:
        raise ParameterError("min_block must be >= 2")

    full = frozenset(range(n))
    all_blocks = sorted(
        (b for b in _subsets(full) if len(b) >= min_block),
        key=lambda b: sorted(b),
    )

    def ok_with(chosen: list[frozenset[int]], cand: frozenset[int]) -> bool:
        return all(len(cand & b) <= 1 for b in chosen)

    def connected(blocks: list[frozenset[int]]) -> bool:
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for b in blocks:
            it = iter(sorted(b))
            r = find(next(it))
            for other in it:
                parent[find(other)] = r
        return len({find(i) for i in range(n)}) == 1

    def rec(start: int, chosen: list[frozenset[int]], budget: int) -> Iterator[BlockDecomposition]:
        if budget == 0:
            if connected(chosen):
                yield BlockDecomposition(n, tuple(chosen))
            return
        for i in range(start, len(all_blocks)):
            b = all_blocks[i]
            if len(b) - 1 > budget:
                continue
            if ok_with(chosen, b):
                yield from rec(i + 1, chosen + [b], budget - (len(b) - 1))

    yield from rec(0, [], n - 1)


def _subsets(s: frozenset[int]) -> Iterator[frozenset[int]]:
    items = sorted(s)
    for mask in range(1, 1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if mask >> i & 1)

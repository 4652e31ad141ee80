"""Embedded trees and terminal sets shared by the solver and constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import DegenerateInputError, ParameterError
from .geometry import Point, reflect_across

TERMINAL = "terminal"
STEINER = "steiner"


@dataclass(frozen=True)
class EmbeddedTree:
    """Geometric tree: vertex coordinates, roles and an index-pair edge list."""

    vertices: tuple[complex, ...]
    roles: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    length: float

    @classmethod
    def build(
        cls,
        vertices: Sequence[complex],
        roles: Sequence[str],
        edges: Iterable[tuple[int, int]],
    ) -> "EmbeddedTree":
        verts = tuple(complex(v) for v in vertices)
        rls = tuple(roles)
        if len(verts) != len(rls):
            raise ParameterError("vertex/role length mismatch")
        edge_t = tuple((min(u, v), max(u, v)) for u, v in edges)
        length = math.fsum(abs(verts[u] - verts[v]) for u, v in edge_t)
        return cls(verts, rls, edge_t, length)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def terminal_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r == TERMINAL]

    def edge_sum(self) -> float:
        return math.fsum(abs(self.vertices[u] - self.vertices[v]) for u, v in self.edges)

    def diameter(self) -> float:
        pts = self.vertices
        if len(pts) < 2:
            return 0.0
        return max(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1 :])

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for v in adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.vertices)

    def is_acyclic(self) -> bool:
        return len(self.edges) < max(1, len(self.vertices))


def transform_tree(tree: EmbeddedTree, fn) -> EmbeddedTree:
    """Apply a pointwise map to every vertex, recomputing the length."""
    return EmbeddedTree.build([fn(v) for v in tree.vertices], tree.roles, tree.edges)


def scale_tree(tree: EmbeddedTree, ratio: float, center: complex = 0j) -> EmbeddedTree:
    c = complex(center)
    return transform_tree(tree, lambda z: c + ratio * (z - c))


def reflect_tree(
    tree: EmbeddedTree, axis_point: complex = 0j, axis_angle: float = 0.0
) -> EmbeddedTree:
    return transform_tree(tree, lambda z: reflect_across(z, axis_point, axis_angle))


def merge_trees(parts: Sequence[EmbeddedTree], tol: float = 1e-12) -> EmbeddedTree:
    """Union of trees sharing vertices; coincident vertices are identified.

    A shared vertex keeps the terminal role if it is a terminal in any part.
    """
    verts: list[complex] = []
    roles: list[str] = []
    edges: list[tuple[int, int]] = []

    def locate(z: complex, role: str) -> int:
        for i, w in enumerate(verts):
            if abs(w - z) <= tol:
                if role == TERMINAL:
                    roles[i] = TERMINAL
                return i
        verts.append(z)
        roles.append(role)
        return len(verts) - 1

    for part in parts:
        index = [locate(v, r) for v, r in zip(part.vertices, part.roles)]
        for u, v in part.edges:
            a, b = index[u], index[v]
            if a != b:
                edges.append((a, b))
    return EmbeddedTree.build(verts, roles, edges)


@dataclass(frozen=True)
class TerminalSet:
    """Ordered labelled terminals, optionally tagged with a generating family."""

    labels: tuple[str, ...]
    points: tuple[Point, ...]
    family: dict | None = field(default=None, compare=False)
    segment: tuple[str, str] | None = None

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.points):
            raise ParameterError("labels/points length mismatch")
        if len(set(self.labels)) != len(self.labels):
            raise ParameterError("terminal labels must be unique")
        if self.segment is not None:
            for lab in self.segment:
                if lab not in self.labels:
                    raise ParameterError(f"segment endpoint {lab!r} is not a terminal")

    @classmethod
    def of(cls, points: Sequence[complex], labels: Sequence[str] | None = None) -> "TerminalSet":
        pts = tuple(Point.of(complex(p)) for p in points)
        if labels is None:
            labels = tuple(f"t{i}" for i in range(len(pts)))
        return cls(tuple(labels), pts)

    def __len__(self) -> int:
        return len(self.points)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def point(self, label: str) -> Point:
        return self.points[self.index(label)]

    def select(self, labels: Sequence[str]) -> "TerminalSet":
        pts = tuple(self.point(lab) for lab in labels)
        return TerminalSet(tuple(labels), pts)

    def without(self, labels: Sequence[str]) -> "TerminalSet":
        drop = set(labels)
        keep = [lab for lab in self.labels if lab not in drop]
        seg = self.segment if self.segment and not (set(self.segment) & drop) else None
        return replace(self.select(keep), family=None, segment=seg)


def as_points(terminals) -> tuple[complex, ...]:
    """Coerce a TerminalSet or a plain point sequence into complex points."""
    if isinstance(terminals, TerminalSet):
        return tuple(complex(p) for p in terminals.points)
    pts = tuple(complex(p) for p in terminals)
    for z in pts:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DegenerateInputError("non-finite terminal coordinate")
    return pts

"""
Red/blue edge-colored bipartite graphs, perfect matchings, and the oriented
view of a graph relative to a perfect matching.

Vertices are 0-based on each side. Inside an :class:`OrientedView` the two
sides share one index space: A-vertex ``a`` is ``a`` and B-vertex ``b`` is
``n_left + b``.
"""

from __future__ import annotations

import enum
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import (
    CycleNotAlternating,
    DuplicateEdge,
    IndexOutOfRange,
    NotAWalk,
    NotClosed,
    NotPerfectMatching,
    UnbalancedSidesWarning,
)

__all__ = [
    "Color",
    "Edge",
    "ColoredBipartiteGraph",
    "Matching",
    "OrientedView",
    "DirectedCycle",
    "validate",
    "build_oriented_view",
    "apply_cycle",
]


class Color(enum.Enum):
    RED = "r"
    BLUE = "b"

    @property
    def is_red(self) -> bool:
        return self is Color.RED


class Edge(NamedTuple):
    a: int
    b: int
    color: Color


@dataclass(frozen=True, eq=True)
class ColoredBipartiteGraph:
    """Simple bipartite graph with sides A (``n_left``) and B (``n_right``).

    The edge identifier is the position in ``edges``. Construction does not
    check invariants; use :func:`validate` or :meth:`from_edges`.
    """

    n_left: int
    n_right: int
    edges: tuple[Edge, ...] = ()

    @classmethod
    def from_edges(
        cls,
        n_left: int,
        n_right: int,
        edges: Iterable[tuple[int, int, Color | str]],
    ) -> ColoredBipartiteGraph:
        parsed = tuple(Edge(int(a), int(b), Color(c)) for a, b, c in edges)
        return validate(cls(n_left, n_right, parsed))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def balanced(self) -> bool:
        return self.n_left == self.n_right

    @cached_property
    def adj_left(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each A-vertex, ascending."""
        adj: list[list[int]] = [[] for _ in range(self.n_left)]
        for eid, e in enumerate(self.edges):
            adj[e.a].append(eid)
        return tuple(tuple(x) for x in adj)

    @cached_property
    def adj_right(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each B-vertex, ascending."""
        adj: list[list[int]] = [[] for _ in range(self.n_right)]
        for eid, e in enumerate(self.edges):
            adj[e.b].append(eid)
        return tuple(tuple(x) for x in adj)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-edge ``(a, b, is_red)`` as numpy arrays."""
        a = np.fromiter((e.a for e in self.edges), dtype=np.int64, count=len(self.edges))
        b = np.fromiter((e.b for e in self.edges), dtype=np.int64, count=len(self.edges))
        red = np.fromiter(
            (e.color is Color.RED for e in self.edges), dtype=bool, count=len(self.edges)
        )
        return a, b, red

    @cached_property
    def red_edge_ids(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e.color is Color.RED)

    def edge_id(self, a: int, b: int) -> int | None:
        for eid in self.adj_left[a]:
            if self.edges[eid].b == b:
                return eid
        return None

    def subgraph(self, edge_ids: Iterable[int]) -> ColoredBipartiteGraph:
        """Graph on the same vertices keeping ``edge_ids`` (renumbered in order)."""
        return ColoredBipartiteGraph(
            self.n_left, self.n_right, tuple(self.edges[i] for i in sorted(edge_ids))
        )

    def without_vertices(self, a: int, b: int) -> tuple[ColoredBipartiteGraph, list[int]]:
        """Delete A-vertex ``a`` and B-vertex ``b``.

        Returns the smaller graph and, for each of its edges, the id of the
        corresponding edge in ``self``.
        """
        kept = [i for i, e in enumerate(self.edges) if e.a != a and e.b != b]
        edges = tuple(
            Edge(e.a - (e.a > a), e.b - (e.b > b), e.color)
            for e in (self.edges[i] for i in kept)
        )
        return ColoredBipartiteGraph(self.n_left - 1, self.n_right - 1, edges), kept


def validate(g: ColoredBipartiteGraph) -> ColoredBipartiteGraph:
    """Check the simple-graph and index invariants of ``g`` and return it.

    Raises DuplicateEdge or IndexOutOfRange. Unequal side sizes are legal and
    only trigger an :class:`UnbalancedSidesWarning`.
    """
    if g.n_left < 0 or g.n_right < 0:
        raise IndexOutOfRange(f"negative side size ({g.n_left}, {g.n_right})")
    seen: set[tuple[int, int]] = set()
    for eid, e in enumerate(g.edges):
        if not isinstance(e.color, Color):
            raise TypeError(f"edge {eid}: color must be a Color, got {e.color!r}")
        if not (0 <= e.a < g.n_left and 0 <= e.b < g.n_right):
            raise IndexOutOfRange(
                f"edge {eid} = ({e.a}, {e.b}) outside {g.n_left}x{g.n_right}"
            )
        if (e.a, e.b) in seen:
            raise DuplicateEdge(f"edge {eid} repeats pair ({e.a}, {e.b})")
        seen.add((e.a, e.b))
    if not g.balanced:
        warnings.warn(
            f"sides differ ({g.n_left} vs {g.n_right}); no perfect matching exists",
            UnbalancedSidesWarning,
            stacklevel=2,
        )
    return g


@dataclass(frozen=True)
class Matching:
    """A matching of ``graph`` given by sorted edge ids.

    ``red_count`` is cached; pass it explicitly to carry bookkeeping forward,
    otherwise it is counted from the edges.
    """

    graph: ColoredBipartiteGraph = field(repr=False, compare=False)
    edge_ids: tuple[int, ...]
    red_count: int = -1

    def __post_init__(self) -> None:
        ids = tuple(sorted(self.edge_ids))
        object.__setattr__(self, "edge_ids", ids)
        if self.red_count < 0:
            object.__setattr__(self, "red_count", self.recount())
        used_a: set[int] = set()
        used_b: set[int] = set()
        for eid in ids:
            e = self.graph.edges[eid]
            if e.a in used_a or e.b in used_b:
                raise ValueError(f"edges share a vertex at edge {eid}")
            used_a.add(e.a)
            used_b.add(e.b)

    def recount(self) -> int:
        return sum(self.graph.edges[i].color is Color.RED for i in self.edge_ids)

    @cached_property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    @cached_property
    def mate_left(self) -> tuple[int, ...]:
        """B-partner of each A-vertex, -1 when uncovered."""
        mate = [-1] * self.graph.n_left
        for eid in self.edge_ids:
            e = self.graph.edges[eid]
            mate[e.a] = e.b
        return tuple(mate)

    @cached_property
    def mate_right(self) -> tuple[int, ...]:
        mate = [-1] * self.graph.n_right
        for eid in self.edge_ids:
            e = self.graph.edges[eid]
            mate[e.b] = e.a
        return tuple(mate)

    @property
    def is_perfect(self) -> bool:
        g = self.graph
        return g.balanced and len(self.edge_ids) == g.n_left

    def pairs(self) -> list[tuple[int, int]]:
        return [(self.graph.edges[i].a, self.graph.edges[i].b) for i in self.edge_ids]

    def __contains__(self, eid: object) -> bool:
        return eid in self.edge_set


class OrientedView:
    """Directed, weighted copy of a graph relative to a perfect matching ``M``.

    Matched edges point A -> B, all others B -> A. Weights: blue 0, red
    matched -1, red unmatched +1.
    """

    def __init__(self, graph: ColoredBipartiteGraph, matching: Matching):
        if matching.graph is not graph and matching.graph != graph:
            raise NotPerfectMatching("matching belongs to a different graph")
        if not matching.is_perfect:
            raise NotPerfectMatching("oriented view needs a perfect matching of the graph")
        self.graph = graph
        self.matching = matching
        n_left = graph.n_left
        self.n_vertices = n_left + graph.n_right
        a, b, red = graph.arrays
        in_m = np.zeros(graph.n_edges, dtype=bool)
        in_m[list(matching.edge_ids)] = True
        self.in_matching = in_m
        self.tail = np.where(in_m, a, n_left + b)
        self.head = np.where(in_m, n_left + b, a)
        self.weight = np.where(red, np.where(in_m, -1, 1), 0).astype(np.int64)

    def __repr__(self) -> str:
        return f"OrientedView(n_vertices={self.n_vertices}, n_edges={len(self.tail)})"

    @property
    def n_edges(self) -> int:
        return len(self.tail)

    def is_matched(self, eid: int) -> bool:
        return bool(self.in_matching[eid])

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for eid, u in enumerate(self.tail.tolist()):
            out[u].append(eid)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for eid, v in enumerate(self.head.tolist()):
            inc[v].append(eid)
        return tuple(tuple(x) for x in inc)

    def cycle(self, edge_ids: Sequence[int]) -> DirectedCycle:
        return DirectedCycle.from_edges(self, edge_ids)


@dataclass(frozen=True)
class DirectedCycle:
    """A simple directed cycle of an :class:`OrientedView`.

    ``edge_ids`` starts at the edge leaving the cycle's first vertex.
    """

    edge_ids: tuple[int, ...]
    vertices: tuple[int, ...]
    weight: int
    positive_count: int
    negative_count: int

    @classmethod
    def from_edges(cls, view: OrientedView, edge_ids: Sequence[int]) -> DirectedCycle:
        ids = tuple(int(e) for e in edge_ids)
        if not ids:
            raise NotAWalk("empty cycle")
        tail, head = view.tail, view.head
        verts = []
        for i, (prev, nxt) in enumerate(zip(ids, ids[1:] + ids[:1])):
            if head[prev] != tail[nxt]:
                if i == len(ids) - 1:
                    raise NotClosed(f"cycle does not close: edge {prev} -> edge {nxt}")
                raise NotAWalk(f"edge {prev} does not lead into edge {nxt}")
            verts.append(int(tail[prev]))
        if len(set(verts)) != len(verts):
            raise NotAWalk("cycle repeats a vertex")
        w = view.weight[list(ids)]
        pos = int(np.count_nonzero(w > 0))
        neg = int(np.count_nonzero(w < 0))
        return cls(ids, tuple(verts), pos - neg, pos, neg)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def canonical(self) -> tuple[int, ...]:
        """Edge sequence rotated to start at the smallest edge id."""
        i = self.edge_ids.index(min(self.edge_ids))
        return self.edge_ids[i:] + self.edge_ids[:i]


def build_oriented_view(g: ColoredBipartiteGraph, m: Matching) -> OrientedView:
    return OrientedView(g, m)


def apply_cycle(m: Matching, c: DirectedCycle) -> Matching:
    """Return ``M Δ C``; its red count is ``|R(M)| + w_M(C)``."""
    in_m = m.edge_set
    inside = [e in in_m for e in c.edge_ids]
    if len(inside) % 2 or any(x == y for x, y in zip(inside, inside[1:] + inside[:1])):
        raise CycleNotAlternating("cycle edges do not alternate between M and E \\ M")
    new_ids = in_m.symmetric_difference(c.edge_ids)
    out = Matching(m.graph, tuple(new_ids), m.red_count + c.weight)
    if not out.is_perfect:
        raise CycleNotAlternating("symmetric difference is not a perfect matching")
    return out

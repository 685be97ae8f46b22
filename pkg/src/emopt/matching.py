"""
Perfect matchings with the fewest or the most red edges.

All solvers are min-cost perfect matching by successive shortest augmenting
paths with dual potentials (Dijkstra on reduced costs). Costs are 0/1 so the
duals stay small integers.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NoPerfectMatching, NoPerfectMatchingThroughEdge
from .graph import Color, ColoredBipartiteGraph, Matching, OrientedView

__all__ = [
    "CostModel",
    "MIN_RED",
    "MAX_RED",
    "ANY",
    "min_cost_pm",
    "min_red_pm",
    "max_red_pm",
    "min_red_pm_forcing",
    "ForcedEdgeSolver",
    "Pruned",
    "prune_irrelevant",
]


@dataclass(frozen=True)
class CostModel:
    red_cost: int
    blue_cost: int

    def __post_init__(self) -> None:
        if self.red_cost not in (0, 1) or self.blue_cost not in (0, 1):
            raise ValueError("costs must be 0 or 1")

    def costs(self, g: ColoredBipartiteGraph) -> list[int]:
        return [self.red_cost if e.color is Color.RED else self.blue_cost for e in g.edges]


MIN_RED = CostModel(red_cost=1, blue_cost=0)
MAX_RED = CostModel(red_cost=0, blue_cost=1)
ANY = CostModel(red_cost=0, blue_cost=0)


class _Assignment:
    """Scratch state of one min-cost perfect matching computation.

    ``u``/``v`` are duals with ``cost[e] - u[a] - v[b] >= 0`` for every edge
    and equality on matched edges.
    """

    def __init__(self, g: ColoredBipartiteGraph, cost: list[int]):
        self.g = g
        self.cost = cost
        self.ea = [e.a for e in g.edges]
        self.eb = [e.b for e in g.edges]
        self.mate_a = [-1] * g.n_left
        self.mate_b = [-1] * g.n_right
        self.u = [0] * g.n_left
        self.v = [0] * g.n_right
        self.dead_b = -1

    def copy(self) -> _Assignment:
        other = object.__new__(_Assignment)
        other.g, other.cost, other.ea, other.eb = self.g, self.cost, self.ea, self.eb
        other.mate_a = self.mate_a[:]
        other.mate_b = self.mate_b[:]
        other.u = self.u[:]
        other.v = self.v[:]
        other.dead_b = self.dead_b
        return other

    def solve(self) -> None:
        g, cost, eb = self.g, self.cost, self.eb
        if not g.balanced:
            raise NoPerfectMatching(f"sides differ ({g.n_left} vs {g.n_right})")
        for a, adj in enumerate(g.adj_left):
            if not adj:
                raise NoPerfectMatching(f"A-vertex {a} has no edges")
            self.u[a] = min(cost[e] for e in adj)
        # greedy start on tight edges
        for a, adj in enumerate(g.adj_left):
            for e in adj:
                if cost[e] == self.u[a] and self.mate_b[eb[e]] < 0:
                    self.mate_a[a] = e
                    self.mate_b[eb[e]] = e
                    break
        for a in range(g.n_left):
            if self.mate_a[a] < 0 and not self.augment(a):
                raise NoPerfectMatching(f"no augmenting path from A-vertex {a}")

    def augment(self, root: int) -> bool:
        """Grow the matching by one shortest augmenting path from free ``root``."""
        g, cost, ea, eb = self.g, self.cost, self.ea, self.eb
        u, v, mate_a, mate_b = self.u, self.v, self.mate_a, self.mate_b
        adj = g.adj_left
        dead_b = self.dead_b
        inf = 1 << 60
        dist_a: dict[int, int] = {root: 0}
        dist_b: dict[int, int] = {}
        pred_b: dict[int, int] = {}
        done_a: list[int] = []
        done_b: list[int] = []
        closed_b: set[int] = set()
        heap: list[tuple[int, int, int]] = [(0, 0, root)]
        target = -1
        reach = 0
        while heap:
            d, side, x = heapq.heappop(heap)
            if side == 0:
                if d > dist_a[x]:
                    continue
                done_a.append(x)
                ua = u[x]
                for e in adj[x]:
                    b = eb[e]
                    if b == dead_b or b in closed_b or e == mate_a[x]:
                        continue
                    nd = d + cost[e] - ua - v[b]
                    if nd < dist_b.get(b, inf):
                        dist_b[b] = nd
                        pred_b[b] = e
                        heapq.heappush(heap, (nd, 1, b))
            else:
                if x in closed_b or d > dist_b[x]:
                    continue
                closed_b.add(x)
                done_b.append(x)
                if mate_b[x] < 0:
                    target, reach = x, d
                    break
                a2 = ea[mate_b[x]]
                dist_a[a2] = d
                heapq.heappush(heap, (d, 0, a2))
        if target < 0:
            return False
        for a in done_a:
            u[a] += reach - dist_a[a]
        for b in done_b:
            v[b] -= reach - dist_b[b]
        b = target
        while True:
            e = pred_b[b]
            a = ea[e]
            old = mate_a[a]
            mate_a[a] = e
            mate_b[b] = e
            if a == root:
                break
            b = eb[old]
        return True

    def matching(self) -> Matching:
        return Matching(self.g, tuple(e for e in self.mate_a if e >= 0))


def _solved(g: ColoredBipartiteGraph, model: CostModel) -> _Assignment:
    state = _Assignment(g, model.costs(g))
    state.solve()
    return state


def min_cost_pm(g: ColoredBipartiteGraph, model: CostModel) -> Matching:
    """Minimum-cost perfect matching under ``model``; raises NoPerfectMatching."""
    return _solved(g, model).matching()


def min_red_pm(g: ColoredBipartiteGraph) -> Matching:
    return min_cost_pm(g, MIN_RED)


def max_red_pm(g: ColoredBipartiteGraph) -> Matching:
    return min_cost_pm(g, MAX_RED)


class ForcedEdgeSolver:
    """Answers repeated "fewest red edges through edge e" queries on one graph.

    One full min-red solve is done up front. A query for ``e = (a, b)``
    deletes ``a`` and ``b``; what is left of the optimal matching, with its
    duals, is still optimal-feasible on the remainder and misses exactly one
    vertex per side, so a single augmenting path finishes the remainder's
    min-red perfect matching. ``e`` is then put back.
    """

    def __init__(self, g: ColoredBipartiteGraph):
        self.g = g
        try:
            self._base: _Assignment | None = _solved(g, MIN_RED)
        except NoPerfectMatching:
            self._base = None

    def solve(self, eid: int) -> Matching:
        g = self.g
        if self._base is None:
            raise NoPerfectMatchingThroughEdge(f"graph has no perfect matching (edge {eid})")
        base = self._base
        if base.mate_a[g.edges[eid].a] == eid:
            return base.matching()
        a, b = g.edges[eid].a, g.edges[eid].b
        st = base.copy()
        free_a = st.ea[st.mate_b[b]]
        free_b = st.eb[st.mate_a[a]]
        st.mate_a[free_a] = -1
        st.mate_b[free_b] = -1
        st.mate_a[a] = -1
        st.mate_b[b] = -1
        st.dead_b = b
        if not st.augment(free_a):
            raise NoPerfectMatchingThroughEdge(f"no perfect matching contains edge {eid}")
        st.mate_a[a] = eid
        st.mate_b[b] = eid
        return st.matching()


def min_red_pm_forcing(g: ColoredBipartiteGraph, eid: int) -> Matching:
    """Perfect matching containing edge ``eid`` with the fewest red edges."""
    if not 0 <= eid < g.n_edges:
        raise IndexError(f"edge id {eid} out of range")
    return ForcedEdgeSolver(g).solve(eid)


class Pruned(NamedTuple):
    graph: ColoredBipartiteGraph
    removed: tuple[int, ...]
    kept: tuple[int, ...]
    """Original id of each edge of ``graph``."""


def allowed_edges(g: ColoredBipartiteGraph, m: Matching) -> list[bool]:
    """Mask of edges lying in some perfect matching, given one perfect matching ``m``.

    An unmatched edge is in some perfect matching iff it closes an
    ``m``-alternating cycle, i.e. both ends share a strongly connected
    component of the oriented view.
    """
    view = OrientedView(g, m)
    n = view.n_vertices
    adj = csr_matrix(
        (np.ones(view.n_edges, dtype=np.int8), (view.tail, view.head)), shape=(n, n)
    )
    _, comp = connected_components(adj, directed=True, connection="strong")
    same = comp[view.tail] == comp[view.head]
    in_m = m.edge_set
    return [bool(same[e]) or e in in_m for e in range(g.n_edges)]


def prune_irrelevant(g: ColoredBipartiteGraph) -> Pruned:
    """Drop every edge that is in no perfect matching.

    Raises NoPerfectMatching when ``g`` has none at all.
    """
    m = min_cost_pm(g, ANY)
    mask = allowed_edges(g, m)
    kept = tuple(e for e in range(g.n_edges) if mask[e])
    removed = tuple(e for e in range(g.n_edges) if not mask[e])
    return Pruned(g.subgraph(kept), removed, kept)

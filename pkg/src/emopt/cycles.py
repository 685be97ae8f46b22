"""
Budgeted positive-cycle search in an oriented view.

Weights are flipped (``w' = -w``) so a positive cycle becomes a negative one;
"budget edges" are the unmatched red edges (original weight +1, flipped -1).
For a source ``s`` the table ``dist[i][j][v]`` holds the least flipped weight
of a walk ``s -> v`` with exactly ``i`` edges and at most ``j`` budget edges.
A closed walk at ``s`` with negative entry in column ``t`` contains a simple
positive cycle using at most ``t`` budget edges.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotAWalk, NotClosed, TooLarge
from .graph import DirectedCycle, OrientedView

__all__ = [
    "BudgetedDistanceTable",
    "fill_budgeted_table",
    "find_positive_cycle",
    "decompose_closed_walk",
    "enumerate_cycles_brute",
]

INF = 1 << 40
_KEY_INF = np.iinfo(np.int64).max
# below this many (budget x edge) relaxations the pure-Python lower bound
# is cheaper than a few numpy DP layers, so it runs first
_CHEAP_BOUND = 50_000
_EAGER_LAYERS = 8


class _Layout:
    """Edge arrays of a view grouped by head, reused for every source."""

    def __init__(self, view: OrientedView):
        n = view.n_vertices
        n_left = view.graph.n_left
        tail, head, weight = view.tail, view.head, view.weight
        self.n = n
        self.flipped = -weight
        self.budget = weight > 0
        # each B-vertex has exactly one incoming edge: its matched edge
        matched = np.flatnonzero(view.in_matching)
        matched = matched[np.argsort(head[matched], kind="stable")]
        self.b_ids = head[matched]
        self.m_tail = tail[matched]
        self.m_w = self.flipped[matched]
        self.m_eid = matched
        assert len(self.b_ids) == n - n_left
        # A-vertices receive the unmatched edges; sort by (head, edge id)
        un = np.flatnonzero(~view.in_matching)
        un = un[np.argsort(head[un], kind="stable")]
        self.un_eid = un
        self.un_tail = tail[un]
        self.un_w = self.flipped[un]
        self.un_bud = self.budget[un]
        heads = head[un]
        first = np.flatnonzero(np.r_[True, heads[1:] != heads[:-1]]) if len(un) else un
        self.a_heads = heads[first]
        self.a_starts = first
        self.key_mod = len(un) + 1
        self.rank = np.arange(len(un), dtype=np.int64)
        self._tail, self._head = tail, head

    @cached_property
    def useful_source(self) -> np.ndarray:
        """Vertices on a cycle whose strong component holds a budget edge.

        Closed walks through ``s`` stay inside its component, and a walk
        without budget edges has flipped weight >= 0.
        """
        tail, head, n = self._tail, self._head, self.n
        adj = csr_matrix((np.ones(len(tail), dtype=np.int8), (tail, head)), shape=(n, n))
        _, comp = connected_components(adj, directed=True, connection="strong")
        sizes = np.bincount(comp, minlength=n)
        has_budget = np.zeros(n, dtype=bool)
        inner = comp[tail] == comp[head]
        has_budget[comp[tail[inner & self.budget]]] = True
        return (sizes[comp] > 1) & has_budget[comp]

    @cached_property
    def out(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for e, u in enumerate(self.tail_l):
            out[u].append(e)
        return out

    @cached_property
    def tail_l(self) -> list[int]:
        return self._tail.tolist()

    @cached_property
    def head_l(self) -> list[int]:
        return self._head.tolist()

    @cached_property
    def flip_l(self) -> list[int]:
        return self.flipped.tolist()

    @cached_property
    def bud_l(self) -> list[bool]:
        return self.budget.tolist()

    def step(self, prev: np.ndarray, width: int) -> tuple[np.ndarray, np.ndarray]:
        w_prev = prev.shape[0]
        j = np.arange(width)
        keep = prev[np.minimum(j, w_prev - 1)]
        cur = np.full((width, self.n), INF, dtype=np.int64)
        pred = np.full((width, self.n), -1, dtype=np.int64)

        src = keep[:, self.m_tail]
        ok = src < INF
        cur[:, self.b_ids] = np.where(ok, src + self.m_w, INF)
        pred[:, self.b_ids] = np.where(ok, self.m_eid, -1)

        if len(self.un_eid):
            shifted = prev[np.clip(j - 1, 0, w_prev - 1)][:, self.un_tail]
            shifted[0] = INF
            src = np.where(self.un_bud, shifted, keep[:, self.un_tail])
            ok = src < INF
            # encode (distance, edge rank) so one segmented min also yields
            # the lowest edge id among minimizers
            key = np.where(ok, (src + self.un_w) * self.key_mod + self.rank, _KEY_INF)
            best = np.minimum.reduceat(key, self.a_starts, axis=1)
            valid = best != _KEY_INF
            cur[:, self.a_heads] = np.where(valid, best // self.key_mod, INF)
            rank = np.where(valid, best % self.key_mod, 0)
            pred[:, self.a_heads] = np.where(valid, self.un_eid[rank], -1)
        return cur, pred

    def closed_walk_bound(self, s: int, t: int) -> bool:
        """True if some closed walk at ``s`` (any length) with at most ``t``
        budget edges has negative flipped weight.

        Layer ``b`` holds walks with exactly ``b`` budget edges; inside a
        layer all weights are 0/+1, so each layer is a Dijkstra.
        """
        out, head, flip, bud = self.out, self.head_l, self.flip_l, self.bud_l
        n = self.n
        prev: list[int] | None = None
        for b in range(t + 1):
            dist = [INF] * n
            heap: list[tuple[int, int]] = []
            if prev is None:
                dist[s] = 0
                heap.append((0, s))
            else:
                for u in range(n):
                    du = prev[u]
                    if du >= INF:
                        continue
                    for e in out[u]:
                        if bud[e]:
                            v = head[e]
                            if du - 1 < dist[v]:
                                dist[v] = du - 1
                heap = [(d, v) for v, d in enumerate(dist) if d < INF]
                if not heap:
                    return False
                heapq.heapify(heap)
            while heap:
                d, u = heapq.heappop(heap)
                if d > dist[u]:
                    continue
                for e in out[u]:
                    if bud[e]:
                        continue
                    v = head[e]
                    nd = d + flip[e]
                    if nd < dist[v]:
                        dist[v] = nd
                        heapq.heappush(heap, (nd, v))
            if b > 0 and dist[s] < 0:
                return True
            prev = dist
        return False


def _layout(view: OrientedView) -> _Layout:
    lay = view.__dict__.get("_dp_layout")
    if lay is None:
        lay = view.__dict__["_dp_layout"] = _Layout(view)
    return lay


@dataclass
class BudgetedDistanceTable:
    """Per-source DP table, stored layer by layer.

    Layer ``i`` keeps only columns ``0..min(i, t)``: a walk of ``i`` edges
    has at most ``i`` budget edges, so larger columns repeat the last one.
    Entries ``>= INF`` mean unreachable; ``pred`` is ``-1`` there.
    """

    source: int
    max_budget: int
    max_length: int
    dist: list[np.ndarray] = field(repr=False)
    pred: list[np.ndarray] = field(repr=False)
    witness_length: int | None = None
    exhausted: bool = False
    """Set when some layer had no walks at all; longer layers would be empty too."""

    def _col(self, i: int, j: int) -> int:
        return min(j, self.dist[i].shape[0] - 1)

    def dist_at(self, i: int, j: int, v: int) -> int:
        val = int(self.dist[i][self._col(i, j), v])
        return val if val < INF else INF

    def pred_at(self, i: int, j: int, v: int) -> int | None:
        e = int(self.pred[i][self._col(i, j), v])
        return None if e < 0 else e

    @property
    def filled_length(self) -> int:
        return len(self.dist) - 1

    def closed_walk(self, view: OrientedView, i: int) -> list[int]:
        """Edge sequence of the walk behind ``dist[i][t][source]``."""
        lay = _layout(view)
        v = self.source
        j = self._col(i, self.max_budget)
        walk = []
        for layer in range(i, 0, -1):
            e = int(self.pred[layer][j, v])
            if e < 0:
                raise ValueError(f"no walk stored at layer {layer}")
            walk.append(e)
            if lay.bud_l[e]:
                j -= 1
            v = lay.tail_l[e]
            j = self._col(layer - 1, j)
        walk.reverse()
        return walk


def _extend(table: BudgetedDistanceTable, lay: _Layout, until: int, stop: bool) -> None:
    s, t = table.source, table.max_budget
    while table.filled_length < until:
        i = table.filled_length + 1
        cur, pred = lay.step(table.dist[-1], min(i, t) + 1)
        table.dist.append(cur)
        table.pred.append(pred)
        if table.witness_length is None and cur[-1, s] < 0:
            table.witness_length = i
            if stop:
                return
        if not (cur < INF).any():
            table.exhausted = True
            return


def fill_budgeted_table(
    view: OrientedView,
    source: int,
    t: int,
    max_length: int | None = None,
    stop_at_witness: bool = False,
) -> BudgetedDistanceTable:
    """Fill the table for ``source`` up to ``max_length`` (default: vertex count)."""
    if t < 0:
        raise ValueError("budget must be non-negative")
    lay = _layout(view)
    n = view.n_vertices
    first = np.full((1, n), INF, dtype=np.int64)
    first[0, source] = 0
    length = n if max_length is None else max_length
    table = BudgetedDistanceTable(
        source, t, length, [first], [np.full((1, n), -1, dtype=np.int64)]
    )
    _extend(table, lay, length, stop_at_witness)
    return table


def _positive_from_table(view: OrientedView, table: BudgetedDistanceTable) -> DirectedCycle:
    walk = table.closed_walk(view, table.witness_length)
    for c in decompose_closed_walk(view, walk):
        if c.weight > 0:
            return c
    raise AssertionError("negative closed walk without a positive simple cycle")


def find_positive_cycle(view: OrientedView, t: int) -> DirectedCycle | None:
    """A simple directed cycle with ``weight > 0`` and ``positive_count <= t``, or None.

    Sources are tried in ascending vertex order and the shortest witness
    walk of the first successful source is decomposed; its first positive
    simple cycle is returned.
    """
    if t < 0:
        raise ValueError("budget must be non-negative")
    if t == 0:
        return None  # a positive cycle needs at least one +1 edge
    lay = _layout(view)
    n = view.n_vertices
    bound_first = min(t, n) * view.n_edges <= _CHEAP_BOUND
    for s in range(n):
        if bound_first and not (lay.useful_source[s] and lay.closed_walk_bound(s, min(t, n))):
            continue
        table = fill_budgeted_table(
            view, s, t, max_length=min(n, _EAGER_LAYERS), stop_at_witness=True
        )
        if table.witness_length is None and not table.exhausted and n > _EAGER_LAYERS:
            if not bound_first and not (
                lay.useful_source[s] and lay.closed_walk_bound(s, min(t, n))
            ):
                continue
            table.max_length = n
            _extend(table, lay, n, stop=True)
        if table.witness_length is not None:
            return _positive_from_table(view, table)
    return None


def decompose_closed_walk(view: OrientedView, walk: Sequence[int]) -> list[DirectedCycle]:
    """Split a closed walk into simple cycles, in the order they close.

    Vertices are pushed on a stack; revisiting a stacked vertex pops the
    enclosed cycle.
    """
    if not walk:
        raise NotAWalk("empty walk")
    tail, head = view.tail, view.head
    for x, y in zip(walk, walk[1:]):
        if head[x] != tail[y]:
            raise NotAWalk(f"edge {x} does not lead into edge {y}")
    if head[walk[-1]] != tail[walk[0]]:
        raise NotClosed("walk does not return to its start")
    verts = [int(tail[walk[0]])]
    edges: list[int] = []
    pos = {verts[0]: 0}
    cycles = []
    for e in walk:
        v = int(head[e])
        edges.append(int(e))
        p = pos.get(v)
        if p is None:
            pos[v] = len(verts)
            verts.append(v)
            continue
        cycles.append(DirectedCycle.from_edges(view, edges[p:]))
        del edges[p:]
        for x in verts[p + 1:]:
            del pos[x]
        del verts[p + 1:]
    return cycles


def enumerate_cycles_brute(view: OrientedView, max_vertices: int = 24) -> list[DirectedCycle]:
    """Every simple directed cycle, each rooted at its smallest vertex."""
    n = view.n_vertices
    if n > max_vertices:
        raise TooLarge(f"{n} vertices exceed the enumeration limit {max_vertices}")
    out = view.out_edges
    head = view.head.tolist()
    found: list[DirectedCycle] = []

    def dfs(s: int, u: int, on_path: set[int], path: list[int]) -> None:
        for e in out[u]:
            v = head[e]
            if v == s:
                found.append(DirectedCycle.from_edges(view, path + [e]))
            elif v > s and v not in on_path:
                on_path.add(v)
                path.append(e)
                dfs(s, v, on_path, path)
                path.pop()
                on_path.discard(v)

    for s in range(n):
        dfs(s, s, {s}, [])
    return found

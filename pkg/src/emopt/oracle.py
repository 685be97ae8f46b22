"""Brute-force ground truth for small instances, by exhaustive enumeration."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from .errors import CapExceeded, TooLarge
from .graph import ColoredBipartiteGraph, Matching

__all__ = [
    "EnumerationBudget",
    "enumerate_pms",
    "exact_em_opt",
    "exact_em_decision",
    "attainable_red_counts",
    "allowed_edges_brute",
]


@dataclass(frozen=True)
class EnumerationBudget:
    max_vertices_per_side: int = 12
    max_matchings: int = 10**7

    def __post_init__(self) -> None:
        if self.max_vertices_per_side <= 0 or self.max_matchings <= 0:
            raise ValueError("enumeration limits must be positive")


DEFAULT_BUDGET = EnumerationBudget()


def _check(g: ColoredBipartiteGraph, budget: EnumerationBudget) -> None:
    side = max(g.n_left, g.n_right)
    if side > budget.max_vertices_per_side:
        raise TooLarge(f"{side} vertices per side exceed {budget.max_vertices_per_side}")


def _edge_sets(g: ColoredBipartiteGraph, budget: EnumerationBudget) -> Iterator[list[int]]:
    _check(g, budget)
    if not g.balanced:
        return
    n = g.n_left
    adj = [[(e, g.edges[e].b) for e in g.adj_left[a]] for a in range(n)]
    if any(not x for x in adj):
        return
    chosen: list[int] = []
    emitted = 0

    def rec(a: int, used: int) -> Iterator[list[int]]:
        nonlocal emitted
        if a == n:
            emitted += 1
            if emitted > budget.max_matchings:
                raise CapExceeded(f"more than {budget.max_matchings} perfect matchings")
            yield chosen
            return
        for e, b in adj[a]:
            if not used >> b & 1:
                chosen.append(e)
                yield from rec(a + 1, used | 1 << b)
                chosen.pop()

    yield from rec(0, 0)


def enumerate_pms(
    g: ColoredBipartiteGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> Iterator[Matching]:
    """Every perfect matching exactly once, A-vertices assigned in index order."""
    for ids in _edge_sets(g, budget):
        yield Matching(g, tuple(ids))


def attainable_red_counts(
    g: ColoredBipartiteGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> set[int]:
    red = [e.color.is_red for e in g.edges]
    return {sum(red[e] for e in ids) for ids in _edge_sets(g, budget)}


def exact_em_decision(
    g: ColoredBipartiteGraph, k: int, budget: EnumerationBudget = DEFAULT_BUDGET
) -> bool:
    """Whether some perfect matching has exactly ``k`` red edges."""
    red = [e.color.is_red for e in g.edges]
    return any(sum(red[e] for e in ids) == k for ids in _edge_sets(g, budget))


def exact_em_opt(
    g: ColoredBipartiteGraph, k: int, budget: EnumerationBudget = DEFAULT_BUDGET
) -> tuple[int, Matching] | None:
    """Optimum ``k*`` with a witness, or None when no perfect matching has at most ``k`` red edges.

    The witness is the first optimal matching in enumeration order.
    """
    red = [e.color.is_red for e in g.edges]
    best: tuple[int, tuple[int, ...]] | None = None
    for ids in _edge_sets(g, budget):
        r = sum(red[e] for e in ids)
        if r <= k and (best is None or r > best[0]):
            best = (r, tuple(ids))
    if best is None:
        return None
    return best[0], Matching(g, best[1])


def allowed_edges_brute(
    g: ColoredBipartiteGraph, budget: EnumerationBudget = DEFAULT_BUDGET
) -> set[int]:
    """Edges contained in at least one perfect matching."""
    seen: set[int] = set()
    for ids in _edge_sets(g, budget):
        seen.update(ids)
    return seen

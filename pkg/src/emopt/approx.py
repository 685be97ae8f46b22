"""
The 3-approximation for EM-opt: maximize the red edges of a perfect matching
subject to at most ``k`` of them.

:func:`solve_fixed_k` is the core routine, valid when some perfect matching
has exactly ``k`` red edges. :func:`solve_em_opt` removes that assumption by
running the core routine for every candidate count and keeping the best.
All thresholds are exact integer comparisons (``3*x >= k``, ``3*x <= 2*k``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

from .cycles import find_positive_cycle
from .errors import NoPerfectMatching, NoPerfectMatchingThroughEdge
from .graph import ColoredBipartiteGraph, DirectedCycle, Matching, OrientedView, apply_cycle
from .matching import ForcedEdgeSolver, max_red_pm, min_red_pm, prune_irrelevant

__all__ = [
    "Branch",
    "Status",
    "TraceStep",
    "FixedKOutcome",
    "EmOptResult",
    "solve_fixed_k",
    "solve_em_opt",
]


class Branch(enum.Enum):
    THRESHOLD_AT_START = "ThresholdAtStart"
    CYCLE_LOOP = "CycleLoop"
    FORCED_EDGE = "ForcedEdge"
    BOT = "Bot"
    # only reported by solve_em_opt: the max-red matching already fits the budget
    MAX_RED_SHORTCUT = "MaxRedShortcut"


class Status(enum.Enum):
    SOLVED = "Solved"
    INFEASIBLE = "Infeasible"


class TraceStep(NamedTuple):
    red_before: int
    cycle_weight: int
    cycle_positive: int


@dataclass(frozen=True)
class FixedKOutcome:
    k: int
    matching: Matching | None
    branch: Branch
    iterations: int
    trace: tuple[TraceStep, ...] | None = None
    forced_edge: int | None = None

    @property
    def is_bot(self) -> bool:
        return self.matching is None

    @property
    def red_count(self) -> int | None:
        return None if self.matching is None else self.matching.red_count


def cycle_budget(k: int) -> int:
    """Largest ``t`` with ``3*t <= 2*k``."""
    return 2 * k // 3


def solve_fixed_k(
    g: ColoredBipartiteGraph,
    k: int,
    *,
    trace: bool = False,
    start: Matching | None = None,
    cycle_cache: dict[tuple[tuple[int, ...], int], DirectedCycle | None] | None = None,
) -> FixedKOutcome:
    """Run the fixed-``k`` algorithm on a pruned graph.

    ``start`` may supply the min-red perfect matching of ``g`` when the
    caller already has it; ``cycle_cache`` memoizes cycle searches by
    (matching, budget) across calls on the same graph. Returns a ``Bot``
    outcome when no branch succeeds, and also when even the min-red
    matching exceeds ``k``.
    Raises NoPerfectMatching if ``g`` has none.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    m = start if start is not None else min_red_pm(g)
    steps: list[TraceStep] | None = [] if trace else None

    def done(match: Matching | None, branch: Branch, iters: int, forced: int | None = None):
        return FixedKOutcome(
            k, match, branch, iters, None if steps is None else tuple(steps), forced
        )

    if m.red_count > k:
        return done(None, Branch.BOT, 0)
    t = cycle_budget(k)
    iterations = 0
    while 3 * m.red_count < k:
        key = (m.edge_ids, t)
        if cycle_cache is not None and key in cycle_cache:
            cycle = cycle_cache[key]
        else:
            cycle = find_positive_cycle(OrientedView(g, m), t)
            if cycle_cache is not None:
                cycle_cache[key] = cycle
        if cycle is None:
            break
        if steps is not None:
            steps.append(TraceStep(m.red_count, cycle.weight, cycle.positive_count))
        m = apply_cycle(m, cycle)
        iterations += 1
    else:
        branch = Branch.CYCLE_LOOP if iterations else Branch.THRESHOLD_AT_START
        return done(m, branch, iterations)

    forced = ForcedEdgeSolver(g)
    for eid in g.red_edge_ids:
        try:
            me = forced.solve(eid)
        except NoPerfectMatchingThroughEdge:
            continue
        if k <= 3 * me.red_count and me.red_count <= k:
            return done(me, Branch.FORCED_EDGE, iterations, eid)
    return done(None, Branch.BOT, iterations)


@dataclass
class EmOptResult:
    status: Status
    k: int
    matching: Matching | None = None
    branch: Branch | None = None
    iterations: int = 0
    winning_k: int | None = None
    runs: list[FixedKOutcome] = field(default_factory=list, repr=False)
    k_star_hint: int | None = None

    @property
    def achieved_red(self) -> int | None:
        return None if self.matching is None else self.matching.red_count


def _lift(m: Matching, g: ColoredBipartiteGraph, kept: tuple[int, ...]) -> Matching:
    return Matching(g, tuple(kept[e] for e in m.edge_ids), m.red_count)


def solve_em_opt(g: ColoredBipartiteGraph, k: int, *, trace: bool = False) -> EmOptResult:
    """3-approximate EM-opt on ``g`` with red budget ``k``.

    The returned matching is expressed in ``g``'s edge ids. Runs for the
    candidate counts ``k' = k, k-1, ...`` stop once ``k'`` drops below the
    best count found, since a run for ``k'`` never returns more than ``k'``
    red edges; the answer equals that of scanning every ``k'``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    try:
        pruned = prune_irrelevant(g)
    except NoPerfectMatching:
        return EmOptResult(Status.INFEASIBLE, k)
    pg = pruned.graph
    m_min = min_red_pm(pg)
    if m_min.red_count > k:
        return EmOptResult(Status.INFEASIBLE, k)
    m_max = max_red_pm(pg)
    if m_max.red_count <= k:
        return EmOptResult(
            Status.SOLVED, k, _lift(m_max, g, pruned.kept), Branch.MAX_RED_SHORTCUT
        )

    runs: list[FixedKOutcome] = []
    cache: dict[tuple[tuple[int, ...], int], DirectedCycle | None] = {}
    best: FixedKOutcome | None = None
    for kp in range(k, m_min.red_count - 1, -1):
        if best is not None and kp < best.red_count:
            break
        out = solve_fixed_k(pg, kp, trace=trace, start=m_min, cycle_cache=cache)
        runs.append(out)
        if out.is_bot or out.red_count > k:
            continue
        # descending k': ">=" keeps the smallest k' among equal counts
        if best is None or out.red_count >= best.red_count:
            best = out
    assert best is not None, "the k' = |R(M_min)| run always succeeds"
    return EmOptResult(
        Status.SOLVED,
        k,
        _lift(best.matching, g, pruned.kept),
        best.branch,
        best.iterations,
        best.k,
        runs if trace else [],
    )

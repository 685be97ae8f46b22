"""Deterministic instance corpora shared by the property and acceptance tests."""

from __future__ import annotations

from collections.abc import Iterator

from emopt.generator import GenSpec, Mode, generate
from emopt.graph import Color, ColoredBipartiteGraph, Edge, Matching, OrientedView
from emopt.matching import ANY, min_cost_pm

DENSITIES = (0.15, 0.3, 0.5, 0.75)
RED_PROBS = (0.25, 0.5, 0.75)


def square() -> ColoredBipartiteGraph:
    """Blue matching {a0b0, a1b1}, red matching {a0b1, a1b0}."""
    return ColoredBipartiteGraph.from_edges(
        2, 2, [(0, 0, "b"), (1, 1, "b"), (0, 1, "r"), (1, 0, "r")]
    )


def small_instances(
    count: int, n_min: int = 2, n_max: int = 8, salt: int = 0
) -> Iterator[tuple[GenSpec, ColoredBipartiteGraph, int]]:
    """Alternates RandomPlantedPM and PlantedExactK over a size/density grid."""
    sizes = n_max - n_min + 1
    for i in range(count):
        n = n_min + i % sizes
        mode = Mode.RANDOM_PLANTED_PM if i % 2 == 0 else Mode.PLANTED_EXACT_K
        k = (i * 7 + salt) % (n + 1) if mode is Mode.PLANTED_EXACT_K else None
        spec = GenSpec(
            n=n,
            density=DENSITIES[(i // sizes) % len(DENSITIES)],
            red_prob=RED_PROBS[(i // 3) % len(RED_PROBS)],
            seed=1_000 * salt + i,
            mode=mode,
            k=k,
        )
        g, k = generate(spec)
        yield spec, g, k


def random_views(count: int, n_max: int = 12, salt: int = 0) -> Iterator[OrientedView]:
    """Sparse views (about two extra edges per vertex) so cycle enumeration stays cheap."""
    for i in range(count):
        n = 1 + i % n_max
        spec = GenSpec(
            n=n,
            density=min(1.0, 2.2 / n),
            red_prob=RED_PROBS[i % len(RED_PROBS)],
            seed=50_000 + 1_000 * salt + i,
        )
        g, _ = generate(spec)
        yield OrientedView(g, min_cost_pm(g, ANY))


def disjoint_union(g: ColoredBipartiteGraph, h: ColoredBipartiteGraph) -> ColoredBipartiteGraph:
    shifted = [Edge(e.a + g.n_left, e.b + g.n_right, e.color) for e in h.edges]
    return ColoredBipartiteGraph(g.n_left + h.n_left, g.n_right + h.n_right, g.edges + tuple(shifted))


def all_blue_complete(n: int) -> ColoredBipartiteGraph:
    return ColoredBipartiteGraph(
        n, n, tuple(Edge(a, b, Color.BLUE) for a in range(n) for b in range(n))
    )


def matching_of(g: ColoredBipartiteGraph, pairs: list[tuple[int, int]]) -> Matching:
    return Matching(g, tuple(g.edge_id(a, b) for a, b in pairs))

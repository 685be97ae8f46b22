"""
Seeded instance generation.

Randomness comes from Python's MT19937 (``random.Random(seed)``) and only
its ``random()`` method is consumed; integer draws and shuffles are derived
here. ``random()`` under an integer seed is the part of the stdlib stream
guaranteed stable across Python versions, so corpora are reproducible
across runs and machines.

Draw order (part of the format contract):

1. a Fisher-Yates shuffle of ``range(n)`` for the planted matching
   ``a -> perm[a]``;
2. PlantedExactK only: a second shuffle picking the ``k`` red planted edges;
3. for each pair ``(a, b)`` in row-major order: planted pairs draw their
   color (unless fixed), other pairs draw presence then, if present, color;
4. RandomPlantedPM only: ``k``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .errors import InvalidSpec
from .graph import Color, ColoredBipartiteGraph, Edge

__all__ = ["Mode", "GenSpec", "generate"]


class Mode(enum.Enum):
    RANDOM_PLANTED_PM = "random"
    PLANTED_EXACT_K = "planted"
    LONG_CYCLE_ADVERSARIAL = "longcycle"


@dataclass(frozen=True)
class GenSpec:
    n: int
    density: float = 0.5
    red_prob: float = 0.5
    seed: int = 0
    mode: Mode = Mode.RANDOM_PLANTED_PM
    k: int | None = None

    def check(self) -> None:
        if self.n < 1:
            raise InvalidSpec(f"n must be >= 1, got {self.n}")
        for name in ("density", "red_prob"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise InvalidSpec(f"{name} must lie in [0, 1], got {val}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be a 64-bit unsigned integer")
        if self.mode is Mode.PLANTED_EXACT_K:
            if self.k is None or not 0 <= self.k <= self.n:
                raise InvalidSpec(f"planted mode needs 0 <= k <= n, got k={self.k}")
        elif self.k is not None and self.k < 0:
            raise InvalidSpec(f"k must be non-negative, got {self.k}")


def _below(rng: random.Random, n: int) -> int:
    return min(int(rng.random() * n), n - 1)


def _shuffled(rng: random.Random, n: int) -> list[int]:
    items = list(range(n))
    for i in range(n - 1, 0, -1):
        j = _below(rng, i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def _color(rng: random.Random, red_prob: float) -> Color:
    return Color.RED if rng.random() < red_prob else Color.BLUE


def generate(spec: GenSpec) -> tuple[ColoredBipartiteGraph, int]:
    """Build the instance described by ``spec``; returns ``(graph, k)``."""
    spec.check()
    rng = random.Random(spec.seed)
    n = spec.n
    perm = _shuffled(rng, n)

    if spec.mode is Mode.LONG_CYCLE_ADVERSARIAL:
        # planted blue matching a -> perm[a] and red edges perm[i] -> a_{i+1}
        # close the single alternating 2n-cycle
        pairs = {(a, perm[a]): Color.BLUE for a in range(n)}
        if n > 1:
            for i in range(n):
                pairs[((i + 1) % n, perm[i])] = Color.RED
        edges = tuple(Edge(a, b, c) for (a, b), c in sorted(pairs.items()))
        return ColoredBipartiteGraph(n, n, edges), n if spec.k is None else spec.k

    fixed: dict[int, Color] = {}
    if spec.mode is Mode.PLANTED_EXACT_K:
        reds = set(_shuffled(rng, n)[: spec.k])
        fixed = {a: Color.RED if a in reds else Color.BLUE for a in range(n)}

    edges = []
    for a in range(n):
        for b in range(n):
            if b == perm[a]:
                color = fixed.get(a) or _color(rng, spec.red_prob)
            elif rng.random() < spec.density:
                color = _color(rng, spec.red_prob)
            else:
                continue
            edges.append(Edge(a, b, color))
    g = ColoredBipartiteGraph(n, n, tuple(edges))

    if spec.mode is Mode.PLANTED_EXACT_K:
        return g, spec.k
    k = _below(rng, n + 1) if spec.k is None else spec.k
    return g, k

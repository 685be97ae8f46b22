import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from emopt.cycles import (
    INF,
    decompose_closed_walk,
    enumerate_cycles_brute,
    fill_budgeted_table,
    find_positive_cycle,
)
from emopt.errors import NotAWalk, NotClosed, TooLarge
from emopt.generator import GenSpec, generate
from emopt.graph import ColoredBipartiteGraph, OrientedView
from emopt.matching import ANY, min_cost_pm

from .corpus import all_blue_complete, disjoint_union, matching_of, random_views


@pytest.fixture
def sq_view(sq):
    return OrientedView(sq, matching_of(sq, [(0, 0), (1, 1)]))


@pytest.fixture
def two_squares_view():
    # matching a_i b_i; cycle A through a0,b0,a1,b1 and cycle B through a0,b0,a2,b2
    g = ColoredBipartiteGraph.from_edges(
        3, 3,
        [(0, 0, "b"), (1, 1, "b"), (2, 2, "b"), (1, 0, "r"), (0, 1, "b"), (2, 0, "b"), (0, 2, "r")],
    )
    return OrientedView(g, matching_of(g, [(0, 0), (1, 1), (2, 2)]))


def test_square_budget_two_finds_the_cycle(sq_view):
    c = find_positive_cycle(sq_view, 2)
    assert c is not None
    assert sorted(c.edge_ids) == [0, 1, 2, 3]
    assert (c.weight, c.positive_count) == (2, 2)


def test_square_budget_one_finds_nothing(sq_view):
    assert find_positive_cycle(sq_view, 1) is None


@pytest.mark.parametrize("t", [0, 1, 3, 10])
def test_all_blue_has_no_positive_cycle(t):
    g = all_blue_complete(3)
    assert find_positive_cycle(OrientedView(g, min_cost_pm(g, ANY)), t) is None


def test_budget_zero_never_finds():
    for view in random_views(30):
        assert find_positive_cycle(view, 0) is None


def test_decompose_simple_cycle(sq_view):
    (c,) = enumerate_cycles_brute(sq_view)
    assert decompose_closed_walk(sq_view, list(c.edge_ids)) == [c]


def _walk(view, cycles):
    return [e for c in cycles for e in c.edge_ids]


def _rooted(view, vertex):
    out = []
    for c in enumerate_cycles_brute(view):
        i = c.vertices.index(vertex)
        out.append(view.cycle(c.edge_ids[i:] + c.edge_ids[:i]))
    return out


def test_decompose_figure_eight(two_squares_view):
    a, b = _rooted(two_squares_view, 0)
    assert decompose_closed_walk(two_squares_view, _walk(two_squares_view, [a, b])) == [a, b]


def test_decompose_a_b_a(two_squares_view):
    a, b = _rooted(two_squares_view, 0)
    walk = _walk(two_squares_view, [a, b, a])
    pieces = decompose_closed_walk(two_squares_view, walk)
    assert pieces == [a, b, a]
    assert Counter(e for c in pieces for e in c.edge_ids) == Counter(walk)


def test_decompose_rejects_bad_walks(sq_view):
    with pytest.raises(NotAWalk):
        decompose_closed_walk(sq_view, [0, 1])
    with pytest.raises(NotClosed):
        decompose_closed_walk(sq_view, [0, 3])
    with pytest.raises(NotAWalk):
        decompose_closed_walk(sq_view, [])


def test_enumerate_square(sq_view):
    assert len(enumerate_cycles_brute(sq_view)) == 1


def test_enumerate_matching_only_graph():
    g = ColoredBipartiteGraph.from_edges(3, 3, [(0, 0, "b"), (1, 1, "b"), (2, 2, "b")])
    assert enumerate_cycles_brute(OrientedView(g, min_cost_pm(g, ANY))) == []


def test_enumerate_two_disjoint_squares(sq):
    g = disjoint_union(sq, sq)
    m = matching_of(g, [(0, 0), (1, 1), (2, 2), (3, 3)])
    assert len(enumerate_cycles_brute(OrientedView(g, m))) == 2


def test_enumerate_guard():
    g, _ = generate(GenSpec(n=13, density=0.1, seed=1))
    with pytest.raises(TooLarge):
        enumerate_cycles_brute(OrientedView(g, min_cost_pm(g, ANY)))


def _random_closed_walk(view, rng, max_len=40):
    cycles = enumerate_cycles_brute(view)
    if not cycles:
        return None
    start = rng.choice(cycles).vertices[0]
    # concatenate random cycles through a common vertex plus random detours
    through = [c for c in cycles if start in c.vertices]
    walk = []
    for _ in range(rng.randint(1, 4)):
        c = rng.choice(through)
        i = c.vertices.index(start)
        walk.extend(c.edge_ids[i:] + c.edge_ids[:i])
        if len(walk) > max_len:
            break
    return walk


@given(st.integers(0, 10_000))
def test_decomposition_partitions_walk(seed):
    rng = random.Random(seed)
    view = list(random_views(1, n_max=6, salt=seed % 97))[0]
    walk = _random_closed_walk(view, rng)
    if walk is None:
        return
    pieces = decompose_closed_walk(view, walk)
    assert Counter(e for c in pieces for e in c.edge_ids) == Counter(walk)
    for c in pieces:
        assert len(set(c.vertices)) == len(c.vertices)
    budget = sum(view.weight[e] > 0 for e in walk)
    assert all(c.positive_count <= budget for c in pieces)


def _qualifying(cycles, t):
    return [c for c in cycles if c.weight > 0 and c.positive_count <= t]


@pytest.mark.parametrize("salt", range(4))
def test_search_agrees_with_enumeration(salt):
    for view in random_views(36, salt=salt):
        cycles = enumerate_cycles_brute(view)
        for t in range(0, 9):
            found = find_positive_cycle(view, t)
            assert (found is None) == (not _qualifying(cycles, t))
            if found is not None:
                again = view.cycle(found.edge_ids)
                assert again.weight > 0 and again.positive_count <= t


def _walk_minimum(view, s, i, j, v):
    """Least flipped weight over all walks s->v with i edges and <= j budget edges."""
    best = INF
    out = view.out_edges

    def rec(u, steps, weight, budget):
        nonlocal best
        if steps == i:
            if u == v and weight < best:
                best = weight
            return
        for e in out[u]:
            nb = budget + (view.weight[e] > 0)
            if nb <= j:
                rec(int(view.head[e]), steps + 1, weight - int(view.weight[e]), nb)

    rec(s, 0, 0, 0)
    return best


def test_table_invariants():
    rng = random.Random(5)
    for view in random_views(12, n_max=5, salt=9):
        n = view.n_vertices
        for s in range(n):
            t = rng.randint(0, 4)
            table = fill_budgeted_table(view, s, t)
            assert all(table.dist_at(0, j, s) == 0 for j in range(t + 1))
            assert all(table.dist_at(0, 0, v) == INF for v in range(n) if v != s)
            for i in range(1, table.filled_length + 1):
                for v in range(n):
                    for j in range(t):
                        assert table.dist_at(i, j + 1, v) <= table.dist_at(i, j, v)
            for i, j, v in itertools.islice(
                ((i, j, v) for i in range(min(6, table.filled_length + 1))
                 for j in range(t + 1) for v in range(n)),
                0, None, 3,
            ):
                assert table.dist_at(i, j, v) == _walk_minimum(view, s, i, j, v)


def test_table_pred_is_consistent():
    for view in random_views(20, n_max=6, salt=3):
        for s in range(view.n_vertices):
            table = fill_budgeted_table(view, s, 3)
            for i in range(1, table.filled_length + 1):
                for v in range(view.n_vertices):
                    for j in range(4):
                        d = table.dist_at(i, j, v)
                        e = table.pred_at(i, j, v)
                        if d == INF:
                            assert e is None
                            continue
                        u = int(view.tail[e])
                        jj = j - (view.weight[e] > 0)
                        assert view.head[e] == v and jj >= 0
                        assert table.dist_at(i - 1, jj, u) - int(view.weight[e]) == d


def test_search_is_deterministic():
    for view in random_views(40, salt=2):
        for t in (1, 2, 5):
            assert find_positive_cycle(view, t) == find_positive_cycle(
                OrientedView(view.graph, view.matching), t
            )

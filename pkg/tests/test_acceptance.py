"""End-to-end acceptance checks. Each prints one PASS/FAIL line."""

import json
import time

import pytest

from emopt import emg
from emopt.approx import Status, cycle_budget, solve_em_opt, solve_fixed_k
from emopt.cli import main
from emopt.cycles import enumerate_cycles_brute, find_positive_cycle
from emopt.errors import NoPerfectMatching, NoPerfectMatchingThroughEdge
from emopt.generator import GenSpec, generate
from emopt.matching import (
    ForcedEdgeSolver,
    max_red_pm,
    min_red_pm,
    prune_irrelevant,
)
from emopt.oracle import allowed_edges_brute, attainable_red_counts, enumerate_pms, exact_em_opt

from .corpus import random_views, small_instances

N_INSTANCES = 1000
N_VIEWS = 500


@pytest.fixture(scope="module")
def corpus():
    return list(small_instances(N_INSTANCES, n_min=2, n_max=8, salt=0))


def report(capsys, label, violations, checked, extra=""):
    ok = not violations
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {checked} checked, "
              f"{len(violations)} violations{extra}")
    assert ok, violations[:5]


def test_c1_three_approximation(capsys, corpus):
    bad = []
    start = time.perf_counter()
    for spec, g, k in corpus:
        res = solve_em_opt(g, k)
        exact = exact_em_opt(g, k)
        if exact is None:
            if res.status is not Status.INFEASIBLE:
                bad.append((spec, "status"))
            continue
        r = res.achieved_red
        if res.status is not Status.SOLVED or not (r <= exact[0] <= 3 * r):
            bad.append((spec, r, exact[0]))
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        bad.append(f"runtime {elapsed:.1f}s")
    report(capsys, "C1 3-approximation vs oracle", bad, len(corpus), f", {elapsed:.1f}s")


def test_c2_no_bot_on_yes_instances(capsys):
    bad, pairs = [], 0
    instances = list(small_instances(N_INSTANCES, n_max=8, salt=100))
    for spec, g, _ in instances:
        pg = prune_irrelevant(g).graph
        for k in sorted(attainable_red_counts(pg)):
            pairs += 1
            if solve_fixed_k(pg, k).is_bot:
                bad.append((spec, k))
    report(capsys, "C2 no Bot on YES-instances", bad, len(instances), f" ({pairs} budgets)")


def test_c3_cycle_search_equivalence(capsys):
    bad, checked = [], 0
    for view in random_views(N_VIEWS, n_max=12, salt=7):
        cycles = enumerate_cycles_brute(view)
        for t in range(9):
            checked += 1
            exists = any(c.weight > 0 and c.positive_count <= t for c in cycles)
            found = find_positive_cycle(view, t)
            if (found is not None) != exists:
                bad.append((view.graph, t, "decision"))
            elif found is not None:
                again = view.cycle(found.edge_ids)
                if not (again.weight > 0 and again.positive_count <= t):
                    bad.append((view.graph, t, "witness"))
    report(capsys, "C3 budgeted cycle search vs enumeration", bad, checked)


def test_c4_matching_extremes_and_forcing(capsys, corpus):
    bad, checked = [], 0
    for spec, g, _ in corpus:
        pms = list(enumerate_pms(g))
        counts = [m.red_count for m in pms]
        checked += 1
        if min_red_pm(g).red_count != min(counts) or max_red_pm(g).red_count != max(counts):
            bad.append((spec, "extremes"))
        forced = ForcedEdgeSolver(g)
        for e in range(len(g.edges)):
            through = [m.red_count for m in pms if e in m.edge_ids]
            try:
                got = forced.solve(e).red_count
            except NoPerfectMatchingThroughEdge:
                got = None
            if got != (min(through) if through else None):
                bad.append((spec, e))
    report(capsys, "C4 matching extremes and forcing", bad, checked)


def test_c5_pruning_equivalence(capsys, corpus):
    bad = []
    for spec, g, _ in corpus:
        pruned = prune_irrelevant(g)
        if set(pruned.kept) != allowed_edges_brute(g):
            bad.append((spec, "allowed"))
        before = {m.edge_ids for m in enumerate_pms(g)}
        after = {tuple(sorted(pruned.kept[e] for e in m.edge_ids))
                 for m in enumerate_pms(pruned.graph)}
        if before != after:
            bad.append((spec, "matchings"))
    report(capsys, "C5 pruning equivalence", bad, len(corpus))


def _loop_ok(out, n_left):
    r = None
    for step in out.trace:
        if step.cycle_weight <= 0 or 3 * step.cycle_positive > 2 * out.k:
            return False
        if r is not None and step.red_before != r:
            return False
        r = step.red_before + step.cycle_weight
        if r > out.k:
            return False
    return out.iterations == len(out.trace) and out.iterations <= n_left


def test_c6_loop_discipline(capsys, corpus):
    bad, checked = [], 0
    for spec, g, k in corpus:
        res = solve_em_opt(g, k, trace=True)
        n_left = g.n_left
        for out in res.runs:
            checked += 1
            if not _loop_ok(out, n_left):
                bad.append((spec, out.k))
        try:
            pg = prune_irrelevant(g).graph
        except NoPerfectMatching:
            continue
        for kp in range(k + 1):
            checked += 1
            if not _loop_ok(solve_fixed_k(pg, kp, trace=True), n_left):
                bad.append((spec, kp))
    report(capsys, "C6 cycle-loop discipline", bad, checked)


def test_c7_desk_scale(capsys):
    n = 200
    g, k = generate(GenSpec(n=n, density=0.1, seed=1, k=n // 2))
    start = time.perf_counter()
    res = solve_em_opt(g, k)
    elapsed = time.perf_counter() - start
    bad = [] if elapsed < 10 and res.status is Status.SOLVED else [f"{elapsed:.2f}s"]
    report(capsys, "C7 n=200 density 0.1 k=100 under 10s", bad, 1,
           f", {elapsed:.2f}s, achieved {res.achieved_red}")


def _cli(capsys, argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def _strip_elapsed(text):
    try:
        obj = json.loads(text)
    except ValueError:
        return "\n".join(",".join(r.split(",")[:8] + r.split(",")[9:]) for r in text.splitlines())
    obj.pop("elapsed_ms", None)
    return obj


def test_c8_determinism(capsys, corpus, tmp_path):
    bad, checked = [], 0
    for spec, g, k in corpus[:300]:
        checked += 1
        a, b = solve_em_opt(g, k, trace=True), solve_em_opt(g, k, trace=True)
        if (a.matching, a.branch, [r.trace for r in a.runs]) != (
            b.matching, b.branch, [r.trace for r in b.runs]
        ):
            bad.append((spec, "library"))
        if emg.dumps(*generate(spec)) != emg.dumps(g, k):
            bad.append((spec, "generator"))

    path = tmp_path / "inst.emg"
    emg.save(*generate(GenSpec(n=8, density=0.4, seed=21)), path)
    commands = [
        ["gen", "--n", "9", "--seed", "4", "--mode", "planted", "--k", "3"],
        ["solve", path, "--json", "--trace"],
        ["solve", path, "--json", "--fixed-k", "--trace"],
        ["check", path, "--json"],
        ["bench", "--grid", "4,7", "--per-size", "4", "--seed", "2", "--oracle"],
    ]
    for argv in commands:
        checked += 1
        first, second = _cli(capsys, argv), _cli(capsys, argv)
        if first[0] != second[0] or _strip_elapsed(first[1]) != _strip_elapsed(second[1]):
            bad.append(argv)
    report(capsys, "C8 determinism", bad, checked)

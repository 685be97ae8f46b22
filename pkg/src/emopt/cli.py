"""Command-line interface: ``emopt {solve,check,gen,bench}``.

Exit codes: 0 solved / check passed, 2 infeasible (or no answer from a
fixed-k run), 3 approximation guarantee violated, 1 any error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Any

from . import emg
from .approx import FixedKOutcome, Status, solve_em_opt, solve_fixed_k
from .errors import EmError, NoPerfectMatching
from .generator import GenSpec, Mode, generate
from .graph import Matching
from .matching import prune_irrelevant
from .oracle import EnumerationBudget, exact_em_opt

log = logging.getLogger("emopt")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_VIOLATION = 3


@dataclass
class RunRecord:
    instance: str
    command: str
    status: str
    achieved_red: int | None
    k: int
    k_star: int | None
    branch: str | None
    iterations: int
    elapsed_ms: float
    seed: int | None
    matching: str

    _INT_FIELDS = ("achieved_red", "k", "k_star", "iterations", "seed")

    @classmethod
    def fields(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    def to_json(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> RunRecord:
        return cls(**{name: obj[name] for name in cls.fields()})

    def to_csv_row(self) -> list[str]:
        return ["" if v is None else str(v) for v in dataclasses.astuple(self)]

    @classmethod
    def from_csv_row(cls, row: list[str]) -> RunRecord:
        vals: dict[str, Any] = {}
        for name, raw in zip(cls.fields(), row):
            if raw == "" and name not in ("matching", "instance"):
                vals[name] = None
            elif name in cls._INT_FIELDS:
                vals[name] = int(raw)
            elif name == "elapsed_ms":
                vals[name] = float(raw)
            else:
                vals[name] = raw
        return cls(**vals)

    def deterministic_view(self) -> dict[str, Any]:
        out = self.to_json()
        del out["elapsed_ms"]
        return out


def format_matching(m: Matching | None) -> str:
    if m is None:
        return ""
    return " ".join(f"{a + 1}:{b + 1}" for a, b in sorted(m.pairs()))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 2 means "infeasible" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _trace_json(outcome: FixedKOutcome) -> dict[str, Any]:
    return {
        "k": outcome.k,
        "branch": outcome.branch.value,
        "red_count": outcome.red_count,
        "iterations": outcome.iterations,
        "forced_edge": outcome.forced_edge,
        "steps": [list(s) for s in outcome.trace or ()],
    }


def _emit(rec: RunRecord, args: argparse.Namespace, extra: dict[str, Any] | None = None) -> None:
    if args.json:
        obj = rec.to_json()
        if extra:
            obj.update(extra)
        print(json.dumps(obj, sort_keys=True))
        return
    print(f"instance:     {rec.instance}")
    print(f"status:       {rec.status}")
    print(f"k:            {rec.k}")
    if rec.achieved_red is not None:
        print(f"achieved_red: {rec.achieved_red}")
    if rec.k_star is not None:
        print(f"k_star:       {rec.k_star}")
    if rec.branch:
        print(f"branch:       {rec.branch} ({rec.iterations} cycle iterations)")
    if rec.matching:
        print(f"matching:     {rec.matching}")
    for run in (extra or {}).get("trace", []):
        steps = ", ".join(f"{r}+{w}(|E+|={p})" for r, w, p in run["steps"])
        print(f"  k'={run['k']}: {run['branch']} red={run['red_count']} [{steps}]")


def cmd_solve(args: argparse.Namespace) -> int:
    inst = emg.load(args.file)
    start = time.perf_counter()
    extra: dict[str, Any] = {}
    if args.fixed_k:
        try:
            pruned = prune_irrelevant(inst.graph)
            out = solve_fixed_k(pruned.graph, inst.k, trace=args.trace)
        except NoPerfectMatching:
            out = None
        elapsed = (time.perf_counter() - start) * 1e3
        if out is None:
            status, matching, branch, iters = Status.INFEASIBLE.value, None, None, 0
        else:
            matching = out.matching and Matching(
                inst.graph,
                tuple(pruned.kept[e] for e in out.matching.edge_ids),
                out.matching.red_count,
            )
            status = Status.SOLVED.value if matching else out.branch.value
            branch, iters = out.branch.value, out.iterations
            if args.trace:
                extra["trace"] = [_trace_json(out)]
        rec = RunRecord(
            str(args.file), "solve --fixed-k", status,
            matching.red_count if matching else None, inst.k, None, branch, iters,
            round(elapsed, 3), None, format_matching(matching),
        )
        _emit(rec, args, extra)
        return EXIT_OK if matching else EXIT_INFEASIBLE

    res = solve_em_opt(inst.graph, inst.k, trace=args.trace)
    elapsed = (time.perf_counter() - start) * 1e3
    if args.trace:
        extra["trace"] = [_trace_json(r) for r in res.runs]
    rec = _record(str(args.file), "solve", res, elapsed, None)
    _emit(rec, args, extra)
    return EXIT_OK if res.status is Status.SOLVED else EXIT_INFEASIBLE


def _record(instance: str, command: str, res, elapsed: float, seed: int | None) -> RunRecord:
    return RunRecord(
        instance, command, res.status.value, res.achieved_red, res.k, res.k_star_hint,
        res.branch.value if res.branch else None, res.iterations, round(elapsed, 3), seed,
        format_matching(res.matching),
    )


def cmd_check(args: argparse.Namespace) -> int:
    inst = emg.load(args.file)
    budget = EnumerationBudget(max_vertices_per_side=args.max_side)
    start = time.perf_counter()
    res = solve_em_opt(inst.graph, inst.k)
    elapsed = (time.perf_counter() - start) * 1e3
    exact = exact_em_opt(inst.graph, inst.k, budget)
    res.k_star_hint = None if exact is None else exact[0]
    rec = _record(str(args.file), "check", res, elapsed, None)
    problems = []
    if (exact is None) != (res.status is Status.INFEASIBLE):
        problems.append(f"status {res.status.value} but oracle says "
                        f"{'infeasible' if exact is None else 'feasible'}")
    elif exact is not None:
        got, best = res.achieved_red, exact[0]
        if got > best:
            problems.append(f"achieved {got} exceeds optimum {best}")
        if 3 * got < best:
            problems.append(f"achieved {got} below a third of optimum {best}")
    _emit(rec, args, {"violations": problems})
    for p in problems:
        print(f"VIOLATION: {p}", file=sys.stderr)
    return EXIT_VIOLATION if problems else EXIT_OK


def _spec_from(args: argparse.Namespace, n: int, seed: int) -> GenSpec:
    return GenSpec(n=n, density=args.density, red_prob=args.red, seed=seed,
                   mode=Mode(args.mode), k=args.k)


def cmd_gen(args: argparse.Namespace) -> int:
    spec = _spec_from(args, args.n, args.seed)
    g, k = generate(spec)
    comments = [f"generated mode={spec.mode.value} n={spec.n} density={spec.density} "
                f"red={spec.red_prob} seed={spec.seed}"]
    if args.out in (None, "-"):
        emg.write(g, k, sys.stdout, comments)
    else:
        emg.save(g, k, args.out, comments)
    return EXIT_OK


def instance_seed(base: int, n: int, index: int) -> int:
    return (base * 1_000_003 + n * 10_007 + index) % 2**64


def bench_records(args: argparse.Namespace) -> list[RunRecord]:
    records = []
    budget = EnumerationBudget()
    for n in args.grid:
        for i in range(args.per_size):
            seed = instance_seed(args.seed, n, i)
            g, k = generate(_spec_from(args, n, seed))
            start = time.perf_counter()
            res = solve_em_opt(g, k)
            elapsed = (time.perf_counter() - start) * 1e3
            if args.oracle and n <= budget.max_vertices_per_side:
                exact = exact_em_opt(g, k, budget)
                res.k_star_hint = None if exact is None else exact[0]
            records.append(_record(f"{args.mode}:n={n}:i={i}", "bench", res, elapsed, seed))
            log.info("n=%d i=%d %s %.1f ms", n, i, res.status.value, elapsed)
    return records


def cmd_bench(args: argparse.Namespace) -> int:
    if not args.grid:
        raise EmError("empty --grid")
    records = bench_records(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RunRecord.fields())
    for rec in records:
        writer.writerow(rec.to_csv_row())
    if args.out in (None, "-"):
        sys.stdout.write(buf.getvalue())
        summary = sys.stderr
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        summary = sys.stdout
    for n in args.grid:
        rows = [r for r in records if r.instance.split(":")[1] == f"n={n}"]
        times = [r.elapsed_ms for r in rows]
        solved = sum(r.status == Status.SOLVED.value for r in rows)
        print(f"n={n:<5d} runs={len(rows):<4d} solved={solved:<4d} "
              f"median_ms={statistics.median(times):.1f} max_ms={max(times):.1f}", file=summary)
    return EXIT_OK


def _grid(text: str) -> list[int]:
    sizes = [int(x) for x in text.split(",") if x.strip()]
    if any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="emopt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="approximate EM-opt on an .emg file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--fixed-k", action="store_true", help="run the fixed-k routine on the file's k")
    p.add_argument("--trace", action="store_true", help="include the cycle-loop trace")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="compare the solver against brute force")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-side", type=int, default=12)
    p.set_defaults(func=cmd_check)

    def gen_flags(p: argparse.ArgumentParser, density: float) -> None:
        p.add_argument("--density", type=float, default=density)
        p.add_argument("--red", type=float, default=0.5)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.RANDOM_PLANTED_PM.value)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("gen", help="write a generated .emg instance")
    p.add_argument("--n", type=int, required=True)
    gen_flags(p, 0.5)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="solve a seeded suite, emit CSV")
    p.add_argument("--grid", type=_grid, required=True, help="comma-separated sizes")
    p.add_argument("--per-size", type=int, default=10)
    p.add_argument("--oracle", action="store_true", help="also compute k* when n <= 12")
    gen_flags(p, 0.1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (EmError, OSError) as exc:
        print(f"emopt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Reader and writer for the ``.emg`` instance text format.

::

    c <comment>
    p em <n_left> <n_right> <m_edges> <k>
    e <a> <b> <r|b>        (m_edges times, 1-based vertex indices)

The ``p`` line must be the first non-comment line. Blank lines are skipped;
any other tag or extra token is an error.
"""

from __future__ import annotations

import io
import os
from typing import NamedTuple, TextIO

from .errors import ParseError
from .graph import Color, ColoredBipartiteGraph, Edge, validate


class Instance(NamedTuple):
    graph: ColoredBipartiteGraph
    k: int


def _int(tok: str, what: str, lineno: int) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise ParseError(f"{what} is not an integer: {tok!r}", lineno) from None
    if val < 0:
        raise ParseError(f"{what} must be non-negative, got {val}", lineno)
    return val


def parse(text: str) -> Instance:
    header: tuple[int, int, int, int] | None = None
    edges: list[Edge] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        tag = toks[0]
        if tag == "p":
            if header is not None:
                raise ParseError("second 'p' line", lineno)
            if len(toks) != 6 or toks[1] != "em":
                raise ParseError("expected 'p em <n_left> <n_right> <m_edges> <k>'", lineno)
            n_left, n_right, m, k = (
                _int(t, name, lineno)
                for t, name in zip(toks[2:], ("n_left", "n_right", "m_edges", "k"))
            )
            header = (n_left, n_right, m, k)
        elif tag == "e":
            if header is None:
                raise ParseError("'e' line before the 'p' line", lineno)
            if len(toks) != 4:
                raise ParseError("expected 'e <a> <b> <r|b>'", lineno)
            a = _int(toks[1], "a", lineno)
            b = _int(toks[2], "b", lineno)
            if toks[3] not in ("r", "b"):
                raise ParseError(f"color must be 'r' or 'b', got {toks[3]!r}", lineno)
            if not (1 <= a <= header[0] and 1 <= b <= header[1]):
                raise ParseError(f"edge ({a}, {b}) out of range", lineno)
            if (a, b) in seen:
                raise ParseError(f"duplicate edge ({a}, {b})", lineno)
            seen.add((a, b))
            edges.append(Edge(a - 1, b - 1, Color(toks[3])))
        else:
            raise ParseError(f"unknown line tag {tag!r}", lineno)
    if header is None:
        raise ParseError("missing 'p em' header line")
    n_left, n_right, m, k = header
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return Instance(validate(ColoredBipartiteGraph(n_left, n_right, tuple(edges))), k)


def load(path: str | os.PathLike[str]) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write(g: ColoredBipartiteGraph, k: int, fh: TextIO, comments: list[str] | None = None) -> None:
    for line in comments or ():
        fh.write(f"c {line}\n")
    fh.write(f"p em {g.n_left} {g.n_right} {g.n_edges} {k}\n")
    for e in g.edges:
        fh.write(f"e {e.a + 1} {e.b + 1} {e.color.value}\n")


def dumps(g: ColoredBipartiteGraph, k: int, comments: list[str] | None = None) -> str:
    buf = io.StringIO()
    write(g, k, buf, comments)
    return buf.getvalue()


def save(
    g: ColoredBipartiteGraph, k: int, path: str | os.PathLike[str], comments: list[str] | None = None
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write(g, k, fh, comments)

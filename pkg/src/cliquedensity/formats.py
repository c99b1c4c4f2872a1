"""Text formats for weighted graphs (``wg 1``) and simple graphs (``sg 1``).

Weighted graph::

    wg 1
    <n>
    <x_1> ... <x_n>
    <a(1,2)> ... <a(1,n)>
    <a(2,3)> ... <a(2,n)>
    ...

Simple graph::

    sg 1
    <n>
    <i> <j>          one line per edge, 1-based

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from typing import List

import numpy as np

from .errors import FormatError
from .extremal import SimpleGraph
from .graph import RENORMALIZE_TOL, WeightedGraph


def _lines(text: str) -> List[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]


def _floats(line: str, what: str) -> List[float]:
    try:
        return [float(tok) for tok in line.split()]
    except ValueError as exc:
        raise FormatError(f"bad number in {what}: {line!r}") from exc


def parse_weighted(text: str) -> WeightedGraph:
    lines = _lines(text)
    if not lines or lines[0].split() != ["wg", "1"]:
        raise FormatError("weighted graph must start with 'wg 1'")
    try:
        n = int(lines[1])
    except (IndexError, ValueError) as exc:
        raise FormatError("missing or invalid order line") from exc
    if n < 1:
        raise FormatError(f"order {n} must be positive")
    if len(lines) != 3 + (n - 1):
        raise FormatError(f"expected {n - 1} edge rows, found {len(lines) - 3}")
    x = _floats(lines[2], "vertex weights")
    if len(x) != n:
        raise FormatError(f"expected {n} vertex weights, found {len(x)}")
    if any(v < 0 for v in x):
        raise FormatError("negative vertex weight")
    if abs(sum(x) - 1.0) > RENORMALIZE_TOL:
        raise FormatError(f"vertex weights sum to {sum(x)!r}")
    a = np.zeros((n, n))
    for i in range(n - 1):
        row = _floats(lines[3 + i], f"edge row {i + 1}")
        if len(row) != n - 1 - i:
            raise FormatError(f"edge row {i + 1} has {len(row)} entries, expected {n - 1 - i}")
        for k, w in enumerate(row):
            if not 0.0 <= w <= 1.0:
                raise FormatError(f"edge weight {w} outside [0, 1]")
            j = i + 1 + k
            a[i, j] = a[j, i] = w
    return WeightedGraph(x, a)


def format_weighted(g: WeightedGraph, digits: int = 17) -> str:
    fmt = lambda v: format(float(v), f".{digits}g")  # noqa: E731
    out = ["wg 1", str(g.n), " ".join(fmt(v) for v in g.x)]
    for i in range(g.n - 1):
        out.append(" ".join(fmt(g.a[i, j]) for j in range(i + 1, g.n)))
    return "\n".join(out) + "\n"


def parse_simple(text: str) -> SimpleGraph:
    lines = _lines(text)
    if not lines or lines[0].split() != ["sg", "1"]:
        raise FormatError("simple graph must start with 'sg 1'")
    try:
        n = int(lines[1])
    except (IndexError, ValueError) as exc:
        raise FormatError("missing or invalid order line") from exc
    edges = []
    for ln in lines[2:]:
        toks = ln.split()
        if len(toks) != 2:
            raise FormatError(f"edge line must hold two vertices: {ln!r}")
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError as exc:
            raise FormatError(f"bad vertex in {ln!r}") from exc
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"vertex out of range in {ln!r}")
        edges.append((i - 1, j - 1))
    return SimpleGraph(n, edges)


def format_simple(g: SimpleGraph) -> str:
    out = ["sg 1", str(g.n)]
    out += [f"{i + 1} {j + 1}" for i, j in sorted(g.edges)]
    return "\n".join(out) + "\n"

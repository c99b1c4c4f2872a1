"""Exhaustive minimum r-clique counts over all labelled graphs with n vertices
and m edges, for checking F_r at desk scale.

Two independent paths are provided and must agree:

* ``pruned``: depth-first search over the edges in lexicographic order,
  including an edge before excluding it, abandoning partial edge sets whose
  clique count already reaches the best minimum found.
* ``full``: vectorized scan of every edge-subset bitmask.

Edge k of the lexicographic list ``combinations(range(n), 2)`` is stored at bit
E-1-k, so for edge sets of equal size the lexicographically smallest one has
the largest mask.  Fixing the top bits of a mask fixes the first edge decisions,
which is how the full scan is split into independent work items.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import bounds
from .errors import DomainError, LimitError
from .extremal import SimpleGraph, count_cliques_masks

MAX_N = 8
MAX_SWEEP_N = 7
_CHUNK = 1 << 20


@dataclass(frozen=True)
class OracleResult:
    n: int
    m: int
    r: int
    minimum: int
    witness: SimpleGraph


@dataclass(frozen=True)
class SweepRow:
    n: int
    m: int
    r: int
    minimum: int
    bound: float
    slack: float


def _edges(n: int) -> List[Tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _check(n: int, r: int, m: Optional[int] = None, limit: int = MAX_N) -> None:
    if n > limit:
        raise LimitError(f"n={n} exceeds the enumeration limit {limit}")
    if n < 1:
        raise DomainError("n must be positive")
    if not 1 <= r <= n:
        raise DomainError(f"need 1 <= r <= n, got r={r}, n={n}")
    if m is not None and not 0 <= m <= math.comb(n, 2):
        raise DomainError(f"m={m} outside [0, {math.comb(n, 2)}]")


def _witness(n: int, edge_ids: Sequence[int]) -> SimpleGraph:
    edges = _edges(n)
    return SimpleGraph(n, [edges[k] for k in edge_ids])


def _mask_to_ids(mask: int, E: int) -> List[int]:
    return [k for k in range(E) if mask >> (E - 1 - k) & 1]


# ---------------------------------------------------------------------------
# pruned depth-first search

def _min_pruned(n: int, m: int, r: int) -> Tuple[int, Tuple[int, ...]]:
    edges = _edges(n)
    E = len(edges)
    adj = [0] * n
    best = [math.inf, ()]
    chosen: List[int] = []
    base = n if r == 1 else 0

    def rec(e: int, k: int, count: int) -> None:
        if count >= best[0]:
            return
        if k == m:
            best[0], best[1] = count, tuple(chosen)
            return
        if E - e < m - k:
            return
        u, v = edges[e]
        added = 0 if r == 1 else count_cliques_masks(adj, r - 2, adj[u] & adj[v])
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        chosen.append(e)
        rec(e + 1, k + 1, count + added)
        chosen.pop()
        adj[u] ^= 1 << v
        adj[v] ^= 1 << u
        rec(e + 1, k, count)

    rec(0, 0, base)
    return int(best[0]), best[1]


# ---------------------------------------------------------------------------
# vectorized full enumeration

def _clique_masks(n: int, r: int) -> np.ndarray:
    edges = _edges(n)
    E = len(edges)
    bit = {e: E - 1 - k for k, e in enumerate(edges)}
    out = []
    for Q in itertools.combinations(range(n), r):
        mask = 0
        for e in itertools.combinations(Q, 2):
            mask |= 1 << bit[e]
        out.append(mask)
    return np.array(out, dtype=np.uint64)


def _scan(args) -> Tuple[np.ndarray, np.ndarray]:
    """Per edge count m: min clique count and, among minimizers, the largest mask."""
    n, r, start, stop = args
    E = math.comb(n, 2)
    qmasks = _clique_masks(n, r)
    best_key = np.full(E + 1, np.iinfo(np.uint64).max, dtype=np.uint64)
    full = np.uint64((1 << E) - 1)
    for lo in range(start, stop, _CHUNK):
        masks = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.uint64)
        pc = np.bitwise_count(masks).astype(np.intp)
        if r == 1:
            cnt = np.full(masks.size, n, dtype=np.uint64)
        else:
            cnt = np.zeros(masks.size, dtype=np.uint64)
            for q in qmasks:
                cnt += (masks & q) == q
        key = (cnt << np.uint64(E)) | (full - masks)
        np.minimum.at(best_key, pc, key)
    return best_key, np.array([E])


def _decode(key: int, E: int) -> Tuple[int, int]:
    mask = ((1 << E) - 1) - (key & ((1 << E) - 1))
    return key >> E, mask


def _full_keys(n: int, r: int, workers: int) -> List[int]:
    E = math.comb(n, 2)
    total = 1 << E
    pieces = max(1, min(workers * 4, total // _CHUNK or 1))
    step = -(-total // pieces)
    jobs = [(n, r, lo, min(lo + step, total)) for lo in range(0, total, step)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan, jobs))
    else:
        parts = [_scan(j) for j in jobs]
    keys = np.minimum.reduce([p[0] for p in parts])
    return [int(k) for k in keys]


def _default_workers(workers: Optional[int]) -> int:
    if workers is None:
        return os.cpu_count() or 1
    return max(1, int(workers))


def min_cliques(n: int, m: int, r: int, *, method: str = "pruned",
                workers: Optional[int] = None) -> OracleResult:
    """Exact minimum number of r-cliques over all graphs on n labelled vertices with m edges.

    The witness is the lexicographically smallest minimizing edge set.
    """
    _check(n, r, m)
    E = math.comb(n, 2)
    if method == "pruned":
        minimum, ids = _min_pruned(n, m, r)
    elif method == "full":
        key = _full_keys(n, r, _default_workers(workers))[m]
        minimum, mask = _decode(key, E)
        ids = _mask_to_ids(mask, E)
    else:
        raise DomainError(f"unknown method {method!r}")
    return OracleResult(n, m, r, int(minimum), _witness(n, ids))


def sweep(n: int, r: int, *, workers: Optional[int] = None, method: str = "full") -> List[SweepRow]:
    """One row (m, minimum, n^r F_r(m/n^2), slack) for every m in [0, C(n, 2)]."""
    _check(n, r, limit=MAX_SWEEP_N)
    E = math.comb(n, 2)
    if method == "full":
        minima = [_decode(k, E)[0] for k in _full_keys(n, r, _default_workers(workers))]
    elif method == "pruned":
        minima = [_min_pruned(n, m, r)[0] for m in range(E + 1)]
    else:
        raise DomainError(f"unknown method {method!r}")
    rows = []
    for m, low in enumerate(minima):
        bound = float(n) if r == 1 else float(bounds.clique_bound(r, m / n ** 2)) * n ** r
        rows.append(SweepRow(n, m, r, int(low), bound, low - bound))
    return rows

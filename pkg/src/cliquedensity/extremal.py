"""Complete multipartite constructions meeting F_r, integer blow-ups, and
exact clique counting in simple graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from . import bounds
from .errors import DomainError, FormatError, UnsupportedWeightsError
from .graph import WeightedGraph


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: FrozenSet[Tuple[int, int]]  # 0-based, i < j

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise FormatError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise FormatError(f"edge ({i}, {j}) outside [0, {n})")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_adjacency(cls, adj) -> "SimpleGraph":
        adj = np.asarray(adj)
        n = adj.shape[0]
        if adj.shape != (n, n) or not np.array_equal(adj, adj.T) or np.any(np.diag(adj) != 0):
            raise FormatError("adjacency must be square, symmetric and loopless")
        return cls(n, [(i, j) for i, j in itertools.combinations(range(n), 2) if adj[i, j]])

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, itertools.combinations(range(n), 2))

    @classmethod
    def complete_multipartite(cls, sizes: Sequence[int]) -> "SimpleGraph":
        labels = [c for c, k in enumerate(sizes) for _ in range(k)]
        n = len(labels)
        return cls(n, [(i, j) for i, j in itertools.combinations(range(n), 2) if labels[i] != labels[j]])

    @classmethod
    def cycle(cls, n: int) -> "SimpleGraph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def petersen(cls) -> "SimpleGraph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls(10, outer + spokes + inner)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.int8)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = 1
        return adj

    def neighbor_masks(self) -> List[int]:
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks


def extremal_weighted(gamma) -> WeightedGraph:
    """All-ones graph on s+1 vertices: s weights (1+alpha)/(s+1) and one (1-s alpha)/(s+1).

    Zero-weight classes (at breakpoints) are kept so the order is always s+1.
    """
    d = bounds.decompose_density(gamma)
    s, alpha = d.s, float(d.alpha)
    big = (1 + alpha) / (s + 1)
    small = max((1 - s * alpha) / (s + 1), 0.0)
    x = [big] * s + [small]
    return WeightedGraph(x, np.ones((s + 1, s + 1)))


def apportion(weights: Sequence[float], total: int) -> List[int]:
    """Largest-remainder class sizes summing to total; ties go to the lowest index."""
    quotas = [w * total for w in weights]
    sizes = [int(np.floor(q)) for q in quotas]
    short = total - sum(sizes)
    order = sorted(range(len(weights)), key=lambda k: (-(quotas[k] - sizes[k]), k))
    for k in order[:short]:
        sizes[k] += 1
    return sizes


def blowup(g: WeightedGraph, total: int) -> SimpleGraph:
    """Replace vertex i by an independent class of about total*x_i vertices and
    join two classes completely when their edge weight is 1."""
    if not g.is_zero_one():
        raise UnsupportedWeightsError("blow-up needs edge weights in {0, 1}")
    if total < g.n:
        raise DomainError(f"total={total} is smaller than the order {g.n}")
    sizes = apportion(g.x.tolist(), total)
    labels = [c for c, k in enumerate(sizes) for _ in range(k)]
    edges = [(i, j) for i, j in itertools.combinations(range(total), 2)
             if labels[i] != labels[j] and g.a[labels[i], labels[j]] == 1.0]
    return SimpleGraph(total, edges)


def count_cliques(graph: SimpleGraph, r: int) -> int:
    """Exact number of r-vertex cliques.

    Vertices with identical neighbourhoods (false twins, never adjacent) are
    merged into one vertex of integer weight c; a clique of the quotient then
    stands for the product of its weights.  Blow-ups collapse to their class
    graph, so counting is independent of N there.
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    nbrs = graph.neighbor_masks()
    groups: dict = {}
    for v, mask in enumerate(nbrs):
        groups.setdefault(mask, []).append(v)
    reps = [members[0] for members in groups.values()]
    weight = [len(members) for members in groups.values()]
    index = {v: k for k, v in enumerate(reps)}
    q = len(reps)
    qn = [0] * q
    for k, v in enumerate(reps):
        for u in range(graph.n):
            if nbrs[v] >> u & 1 and u in index:
                qn[k] |= 1 << index[u]
    forward = [qn[k] & ~((1 << (k + 1)) - 1) for k in range(q)]

    def extend(cand: int, depth: int) -> int:
        total = 0
        while cand:
            low = cand & -cand
            k = low.bit_length() - 1
            cand ^= low
            if depth == 1:
                total += weight[k]
            else:
                nxt = cand & forward[k]
                if nxt:
                    total += weight[k] * extend(nxt, depth - 1)
        return total

    return extend((1 << q) - 1, r)


def count_cliques_masks(nbrs: Sequence[int], r: int, within: int = -1) -> int:
    """r-cliques among the vertices of bitmask ``within`` (default: all)."""
    n = len(nbrs)
    if within == -1:
        within = (1 << n) - 1
    if r == 0:
        return 1
    if r == 1:
        return within.bit_count()
    forward = [nbrs[v] & ~((1 << (v + 1)) - 1) for v in range(n)]

    def extend(cand: int, depth: int) -> int:
        # depth = clique vertices still to choose, cand = admissible larger vertices
        if depth == 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            nxt = cand & forward[v]
            if nxt.bit_count() >= depth - 1:
                total += extend(nxt, depth - 1)
        return total

    return extend(within, r)

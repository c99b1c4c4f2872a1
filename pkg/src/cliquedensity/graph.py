"""Weighted graphs and their clique densities.

A weighted graph of order n carries vertex weights x (a probability vector)
and symmetric edge weights a in [0, 1].  Its K_rho density is

    G(K_rho) = sum over rho-subsets M of prod_{E in M^(2)} a(E) * prod_{i in M} x_i.

Vertices are 0-based in this module; the text format in ``formats`` is 1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import bounds
from .errors import DegenerateLinkError, DomainError, FormatError, LimitError
from .report import VerificationReport

WEIGHT_SUM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    x: np.ndarray
    a: np.ndarray

    def __init__(self, x, a: Union[np.ndarray, Mapping[Tuple[int, int], float], None] = None):
        x = np.array(x, dtype=float).reshape(-1)
        n = x.size
        if n < 1:
            raise FormatError("a weighted graph needs at least one vertex")
        if np.any(~np.isfinite(x)) or np.any(x < 0):
            raise FormatError("vertex weights must be finite and non-negative")
        total = x.sum()
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise FormatError(f"vertex weights sum to {total!r}, not 1")
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            x = x / total
        a = _edge_matrix(n, a)
        x.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def uniform(cls, n: int, a=None) -> "WeightedGraph":
        return cls(np.full(n, 1.0 / n), np.ones((n, n)) if a is None else a)

    def edge(self, i: int, j: int) -> float:
        return float(self.a[i, j])

    def edges(self) -> Dict[Tuple[int, int], float]:
        return {(i, j): float(self.a[i, j]) for i, j in itertools.combinations(range(self.n), 2)}

    def is_zero_one(self) -> bool:
        iu = np.triu_indices(self.n, 1)
        w = self.a[iu]
        return bool(np.all((w == 0.0) | (w == 1.0)))

    def with_weights(self, x) -> "WeightedGraph":
        return WeightedGraph(x, self.a)

    def with_edges(self, a) -> "WeightedGraph":
        return WeightedGraph(self.x, a)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.a, other.a)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, x={self.x.tolist()})"


def _edge_matrix(n: int, a) -> np.ndarray:
    if a is None:
        m = np.zeros((n, n))
    elif isinstance(a, Mapping):
        m = np.zeros((n, n))
        for (i, j), w in a.items():
            if i == j:
                raise FormatError(f"self-pair ({i}, {j}) in edge map")
            m[i, j] = m[j, i] = float(w)
    else:
        m = np.array(a, dtype=float)
        if m.shape != (n, n):
            raise FormatError(f"edge matrix has shape {m.shape}, expected {(n, n)}")
        if not np.allclose(m, m.T, rtol=0, atol=0):
            raise FormatError("edge matrix is not symmetric")
        m = m.copy()
    np.fill_diagonal(m, 0.0)
    if np.any(~np.isfinite(m)) or np.any(m < 0) or np.any(m > 1):
        raise FormatError("edge weights must lie in [0, 1]")
    return m


# ---------------------------------------------------------------------------
# clique sums on unnormalized vertex weights

@lru_cache(maxsize=256)
def _combos(n: int, rho: int) -> np.ndarray:
    if rho > n:
        return np.zeros((0, rho), dtype=np.intp)
    return np.array(list(itertools.combinations(range(n), rho)), dtype=np.intp).reshape(-1, rho)


@lru_cache(maxsize=64)
def _pair_columns(rho: int) -> Tuple[np.ndarray, np.ndarray]:
    pairs = list(itertools.combinations(range(rho), 2))
    p = np.array([u for u, _ in pairs], dtype=np.intp)
    q = np.array([v for _, v in pairs], dtype=np.intp)
    return p, q


def clique_levels(x: np.ndarray, a: np.ndarray, max_rho: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Nonzero subset products A_S * X_S level by level, rho = 1 .. max_rho.

    Each level is extended from the previous one by appending a larger vertex,
    so zero-weight subsets are pruned early and several densities of one graph
    share the work.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    keep = x != 0
    subsets = np.flatnonzero(keep).reshape(-1, 1)
    weights = x[keep]
    levels = [(subsets, weights)]
    for _ in range(1, max_rho):
        if subsets.shape[0] == 0:
            levels.append((np.zeros((0, subsets.shape[1] + 1), dtype=np.intp), np.zeros(0)))
            subsets = levels[-1][0]
            continue
        new_s, new_w = [], []
        last = subsets[:, -1]
        for v in range(n):
            if x[v] == 0.0:
                continue
            sel = last < v
            if not sel.any():
                continue
            s = subsets[sel]
            w = weights[sel] * x[v] * np.prod(a[s, v], axis=1)
            nz = w != 0.0
            if nz.any():
                new_s.append(np.hstack([s[nz], np.full((int(nz.sum()), 1), v, dtype=np.intp)]))
                new_w.append(w[nz])
        if new_s:
            both = np.vstack(new_s)
            w = np.concatenate(new_w)
            order = np.lexsort(both.T[::-1])  # index order of subsets
            subsets, weights = both[order], w[order]
        else:
            subsets = np.zeros((0, subsets.shape[1] + 1), dtype=np.intp)
            weights = np.zeros(0)
        levels.append((subsets, weights))
    return levels


def clique_sum(x, a, rho: int) -> float:
    """sum_{|S| = rho} A_S prod_{i in S} x_i for arbitrary non-negative x (no normalization)."""
    if rho == 0:
        return 1.0
    if rho < 0:
        raise DomainError("rho must be >= 0")
    x = np.asarray(x, dtype=float)
    if rho > x.size:
        return 0.0
    if _all_ones(a):
        return float(elementary_symmetric(x, rho)[rho])
    return float(np.sum(clique_levels(x, a, rho)[-1][1]))


def _all_ones(a) -> bool:
    a = np.asarray(a)
    n = a.shape[0]
    return bool(np.all(a[np.triu_indices(n, 1)] == 1.0))


def elementary_symmetric(x: np.ndarray, top: int) -> np.ndarray:
    """e_0(x), ..., e_top(x) by the one-vertex-at-a-time recurrence."""
    e = np.zeros(top + 1)
    e[0] = 1.0
    for v in x:
        e[1:] = e[1:] + v * e[:-1]
    return e


def clique_profile(g: WeightedGraph, max_rho: int) -> List[float]:
    """[G(K_1), ..., G(K_max_rho)] from one pass of the subset lattice."""
    top = min(max_rho, g.n)
    if _all_ones(g.a):
        out = [float(v) for v in elementary_symmetric(g.x, top)[1:]]
    else:
        out = [float(np.sum(w)) for _, w in clique_levels(g.x, g.a, top)]
    if out:
        out[0] = 1.0  # same convention as clique_density
    return out + [0.0] * (max_rho - len(out))


def clique_density(g: WeightedGraph, rho: int) -> float:
    if rho < 1:
        raise DomainError("rho must be >= 1")
    if rho == 1:
        return 1.0
    return clique_sum(g.x, g.a, rho)


def _rooted_weights(g: WeightedGraph, roots: Sequence[int]) -> np.ndarray:
    roots = [int(i) for i in roots]
    if len(set(roots)) != len(roots):
        raise DomainError(f"duplicate roots {roots}")
    for i in roots:
        if not 0 <= i < g.n:
            raise DomainError(f"root {i} outside [0, {g.n})")
    w = g.x.copy()
    for i in roots:
        w = w * g.a[i]
    w[roots] = 0.0
    return w


def rooted_density(g: WeightedGraph, roots: Sequence[int], rho: int) -> float:
    """G_{roots}(K_rho): rho-subsets of the other vertices, each weighted by its edges to every root."""
    if rho < 0:
        raise DomainError("rho must be >= 0")
    return clique_sum(_rooted_weights(g, roots), g.a, rho)


def link_graph(g: WeightedGraph, i: int) -> WeightedGraph:
    """Normalized neighbourhood of vertex i, of order n-1."""
    deg = rooted_density(g, [i], 1)
    if deg <= 0.0:
        raise DegenerateLinkError(f"vertex {i} has zero rooted degree")
    others = [j for j in range(g.n) if j != i]
    x = g.a[i, others] * g.x[others] / deg
    x = x / x.sum()
    return WeightedGraph(x, g.a[np.ix_(others, others)])


def edge_density(g: WeightedGraph) -> float:
    return 0.5 * float(g.x @ g.a @ g.x)


def deficit(g: WeightedGraph, r: int) -> float:
    """G(K_r) - F_r(G(K_2)); non-negative for every weighted graph."""
    if r < 2:
        raise DomainError("r must be >= 2")
    gamma = clique_density(g, 2)
    if gamma >= 0.5:
        raise DomainError(f"edge density {gamma} >= 1/2 lies outside the supported domain")
    return clique_density(g, r) - bounds.clique_bound(r, gamma)


def from_simple_graph(adjacency, n: Optional[int] = None) -> WeightedGraph:
    """Uniform weights 1/n and 0/1 edge weights; n^r G(K_r) counts the r-cliques."""
    adj = np.array(adjacency)
    if n is None:
        n = adj.shape[0]
    if adj.shape != (n, n):
        raise FormatError(f"adjacency has shape {adj.shape}, expected {(n, n)}")
    if not np.all((adj == 0) | (adj == 1)):
        raise FormatError("adjacency entries must be 0 or 1")
    if not np.array_equal(adj, adj.T):
        raise FormatError("adjacency is not symmetric")
    if np.any(np.diag(adj) != 0):
        raise FormatError("adjacency has loops")
    return WeightedGraph(np.full(n, 1.0 / n), adj.astype(float))


# ---------------------------------------------------------------------------
# local statistics on an (r+1)-set

@dataclass(frozen=True)
class LocalCliqueStats:
    a_m: float   # product of all edge weights on M
    b1_m: float  # sum over edges E of the product of the other edge weights
    b2_m: float  # sum over i of (degree of i inside M) * A_{M - i}
    c_m: float   # sum of A_Q over r-subsets Q
    d_m: float   # sum over i, {j, k} of (1 - a_ij)(1 - a_ik) A_{M - i}


@lru_cache(maxsize=16)
def _local_layout(r: int):
    size = r + 1
    pairs = list(itertools.combinations(range(size), 2))
    index = {p: k for k, p in enumerate(pairs)}
    idx = lambda u, v: index[(u, v) if u < v else (v, u)]  # noqa: E731
    # edges of M - {i}, edges at i, and pairs of edges {ij, ik} for each i
    without = [[index[p] for p in pairs if i not in p] for i in range(size)]
    touching = [[idx(i, j) for j in range(size) if j != i] for i in range(size)]
    wedges = [[(idx(i, j), idx(i, k)) for j, k in itertools.combinations([v for v in range(size) if v != i], 2)]
              for i in range(size)]
    return pairs, without, touching, wedges


def local_stats_batch(w: np.ndarray, r: int) -> Tuple[np.ndarray, ...]:
    """Vectorized A, B1, B2, C, D for a batch of edge-weight rows.

    ``w`` has shape (batch, C(r+1, 2)); column k holds the weight of the k-th
    pair of range(r+1) in lexicographic order.
    """
    pairs, without, touching, wedges = _local_layout(r)
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[1] != len(pairs):
        raise DomainError(f"expected {len(pairs)} edge columns for r={r}")
    a = np.prod(w, axis=1)
    ncol = w.shape[1]
    b1 = np.zeros(w.shape[0])
    for e in range(ncol):
        b1 += np.prod(np.delete(w, e, axis=1), axis=1)
    b2 = np.zeros(w.shape[0])
    c = np.zeros(w.shape[0])
    d = np.zeros(w.shape[0])
    for i in range(r + 1):
        a_rest = np.prod(w[:, without[i]], axis=1)
        c += a_rest
        b2 += w[:, touching[i]].sum(axis=1) * a_rest
        miss = np.zeros(w.shape[0])
        for e1, e2 in wedges[i]:
            miss += (1.0 - w[:, e1]) * (1.0 - w[:, e2])
        d += miss * a_rest
    return a, b1, b2, c, d


def local_clique_stats(g: WeightedGraph, m_set: Sequence[int], r: int) -> LocalCliqueStats:
    m_set = [int(v) for v in m_set]
    if len(m_set) != r + 1 or len(set(m_set)) != r + 1:
        raise DomainError(f"need {r + 1} distinct vertices, got {m_set}")
    pairs = _local_layout(r)[0]
    row = np.array([[g.a[m_set[u], m_set[v]] for u, v in pairs]])
    return LocalCliqueStats(*(float(v[0]) for v in local_stats_batch(row, r)))


def local_inequality_slacks(stats_arrays, r: int) -> Tuple[np.ndarray, np.ndarray]:
    """(rhs - lhs) for 2B1 - C <= (r^2-1) A and for B2 - (r-1) C + D >= (r+1) A."""
    a, b1, b2, c, d = stats_arrays
    first = (r * r - 1) * a - (2 * b1 - c)
    second = (b2 - (r - 1) * c + d) - (r + 1) * a
    return first, second


def check_local_inequalities(r: int, mode: str = "exhaustive01", *, samples: int = 100_000,
                             seed: int = 0, chunk: int = 1 << 16) -> VerificationReport:
    """Both local inequalities over all 0/1 edge assignments on r+1 vertices,
    or over uniformly random fractional assignments."""
    if mode == "exhaustive01":
        if not 3 <= r <= 7:
            raise LimitError(f"exhaustive mode supports 3 <= r <= 7, got r={r}")
    elif mode == "random_fractional":
        if not 2 <= r <= 12:
            raise LimitError(f"random mode supports 2 <= r <= 12, got r={r}")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    ncol = math.comb(r + 1, 2)
    rep = VerificationReport(f"local inequalities r={r} mode={mode}")
    worst = [math.inf, math.inf]
    wit: List[Optional[str]] = [None, None]
    checked = 0
    if mode == "exhaustive01":
        total = 1 << ncol
        shifts = np.arange(ncol, dtype=np.uint64)
        for start in range(0, total, chunk):
            codes = np.arange(start, min(start + chunk, total), dtype=np.uint64)
            w = ((codes[:, None] >> shifts) & np.uint64(1)).astype(float)
            checked += _scan(w, r, worst, wit, lambda k, c=codes: f"assignment={int(c[k]):#x}")
    else:
        rng = np.random.default_rng(seed)
        done = 0
        while done < samples:
            m = min(chunk, samples - done)
            w = rng.random((m, ncol))
            checked += _scan(w, r, worst, wit, lambda k, w=w: "weights=" + ",".join(f"{v:.6g}" for v in w[k]))
            done += m
    tol = 0.0 if mode == "exhaustive01" else 1e-12
    names = ("prod_bound_local", "lagrange_local")
    for j in range(2):
        rep.add(names[j], f"r={r} {mode}", worst[j] >= -tol, worst[j], wit[j], checked)
    return rep


def _scan(w, r, worst, wit, describe) -> int:
    s1, s2 = local_inequality_slacks(local_stats_batch(w, r), r)
    for j, s in enumerate((s1, s2)):
        k = int(np.argmin(s))
        if s[k] < worst[j]:
            worst[j] = float(s[k])
            wit[j] = describe(k) if s[k] < 0 else None
    return w.shape[0]


# ---------------------------------------------------------------------------
# proof identities

@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    residual: float


def second_step_identity(g: WeightedGraph) -> IdentityCheck:
    """sum_i x_i G_i(K_1)^2 = -Phi - sum_T V_T X_T + gamma + 3 G(K_3), term by term."""
    n, x, A = g.n, g.x, g.a
    deg = [sum(A[i, j] * x[j] for j in range(n) if j != i) for i in range(n)]
    lhs = sum(x[i] * deg[i] ** 2 for i in range(n))
    phi = 0.0
    for i, j in itertools.combinations(range(n), 2):
        phi += (x[i] ** 2 * x[j] + x[i] * x[j] ** 2) * (A[i, j] - A[i, j] ** 2)
    v_sum = 0.0
    for i, j, k in itertools.combinations(range(n), 3):
        v = (A[j, k] * (1 - A[i, j]) * (1 - A[i, k])
             + A[i, k] * (1 - A[i, j]) * (1 - A[j, k])
             + A[i, j] * (1 - A[i, k]) * (1 - A[j, k]))
        v_sum += v * x[i] * x[j] * x[k]
    gamma = clique_density(g, 2)
    k3 = clique_density(g, 3)
    rhs = -phi - v_sum + gamma + 3 * k3
    return IdentityCheck(lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class ChainCheck:
    lhs: float  # r^2 G(K_r)^2
    rhs: float  # G(K_{r-1}) (G(K_r) + (r^2-1) G(K_{r+1}))
    ok: bool
    weight_sum_residual: float  # |sum_L A_L X_L - G(K_{r-1})|
    eta_sum_residual: float     # |sum_L A_L X_L eta_L - r G(K_r)|
    cauchy_gap: float           # S0*S2 - S1^2 >= 0
    square_gap: float           # G(K_r) + (r^2-1) G(K_{r+1}) - S2 >= 0


def cauchy_chain_check(g: WeightedGraph, r: int, tol: float = 1e-12) -> ChainCheck:
    if r < 2:
        raise DomainError("r must be >= 2")
    n, x, A = g.n, g.x, g.a
    s0 = s1 = s2 = 0.0
    for L in itertools.combinations(range(n), r - 1):
        a_l = 1.0
        for u, v in itertools.combinations(L, 2):
            a_l *= A[u, v]
        x_l = math.prod(x[i] for i in L)
        eta = 0.0
        for i in range(n):
            if i in L:
                continue
            eta += x[i] * math.prod(A[i, l] for l in L)
        w = a_l * x_l
        s0 += w
        s1 += w * eta
        s2 += w * eta * eta
    prof = clique_profile(g, r + 1)
    k_prev, k_r, k_next = prof[r - 2], prof[r - 1], prof[r]
    lhs = r * r * k_r * k_r
    rhs = k_prev * (k_r + (r * r - 1) * k_next)
    return ChainCheck(lhs, rhs, lhs <= rhs + tol, abs(s0 - k_prev), abs(s1 - r * k_r),
                      s0 * s2 - s1 * s1, k_r + (r * r - 1) * k_next - s2)


def random_weighted_graph(n: int, rng: np.random.Generator, *, zero_one: bool = False,
                          edge_p: Optional[float] = None) -> WeightedGraph:
    """Dirichlet(1) vertex weights; uniform edge weights (or Bernoulli 0/1)."""
    x = rng.dirichlet(np.ones(n))
    if zero_one:
        p = 0.5 if edge_p is None else edge_p
        w = (rng.random((n, n)) < p).astype(float)
    else:
        w = rng.random((n, n))
    a = np.triu(w, 1)
    return WeightedGraph(x, a + a.T)

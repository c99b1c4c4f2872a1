"""Numerical minimization of the deficit G(K_r) - F_r(G(K_2)) over weighted
graphs of fixed order, and first-order (Lagrange/KKT) diagnostics at the
candidate minimizers.

Partial derivatives used throughout:

    d G(K_rho) / d x_i  = G_i(K_{rho-1})
    d G(K_rho) / d a_ij = x_i x_j G_ij(K_{rho-2})
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import analytic, bounds
from .errors import BreakpointError, DivergenceError, DomainError, NotStationaryError, ParameterError
from .graph import (WeightedGraph, _combos, _pair_columns, clique_density, clique_profile,
                    random_weighted_graph, rooted_density)

EDGE_EPS = 1e-7
VERTEX_EPS = 1e-12
KINK_TOL = 1e-9
MAX_GAMMA = 0.5 - 1e-6


# ---------------------------------------------------------------------------
# densities with gradients

def _prod_except(m: np.ndarray) -> np.ndarray:
    """Row-wise product of all columns but one, without division."""
    rows, k = m.shape
    out = np.ones_like(m)
    if k == 0:
        return out
    left = np.ones(rows)
    for j in range(k):
        out[:, j] = left
        left = left * m[:, j]
    right = np.ones(rows)
    for j in range(k - 1, -1, -1):
        out[:, j] *= right
        right = right * m[:, j]
    return out


def density_with_gradient(x: np.ndarray, a: np.ndarray, rho: int) -> Tuple[float, np.ndarray, np.ndarray]:
    """(G(K_rho), dG/dx, dG/da) for unnormalized x; dG/da is symmetric with
    entry (i, j) the derivative with respect to the unordered pair weight."""
    x = np.asarray(x, dtype=float)
    n = x.size
    dx = np.zeros(n)
    da = np.zeros((n, n))
    if rho == 0:
        return 1.0, dx, da
    if rho == 1:
        return float(x.sum()), np.ones(n), da
    if rho > n:
        return 0.0, dx, da
    C = _combos(n, rho)
    p, q = _pair_columns(rho)
    X = x[C]
    W = a[C[:, p], C[:, q]]
    xprod = X.prod(axis=1)
    aprod = W.prod(axis=1)
    value = float(np.sum(aprod * xprod))
    np.add.at(dx, C, aprod[:, None] * _prod_except(X))
    upper = np.zeros((n, n))
    np.add.at(upper, (C[:, p], C[:, q]), xprod[:, None] * _prod_except(W))
    da = upper + upper.T
    return value, dx, da


def deficit_with_gradient(x: np.ndarray, a: np.ndarray, r: int):
    """(deficit, gamma, lambda_hat, d/dx, d/da) with lambda_hat the local slope of F_r."""
    gamma = 0.5 * float(x @ a @ x)
    g2x = a @ x
    g2a = np.outer(x, x)
    np.fill_diagonal(g2a, 0.0)
    gr, grx, gra = density_with_gradient(x, a, r)
    if not 0.0 <= gamma < 0.5:
        raise DomainError(f"edge density {gamma} outside [0, 1/2)")
    lam = bounds.local_slope(r, gamma)
    f = gr - bounds.clique_bound(r, gamma)
    return f, gamma, lam, grx - lam * g2x, gra - lam * g2a


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1} by sorting."""
    n = v.size
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, n + 1)
    cond = u - css / k > 0
    rho = k[cond][-1]
    theta = css[cond][-1] / rho
    return np.maximum(v - theta, 0.0)


# ---------------------------------------------------------------------------
# stationarity diagnostics

@dataclass(frozen=True)
class StationarityReport:
    r: int
    gamma: float
    s: int
    alpha: float
    lam: float
    mu: float
    m_stat: float
    vertex_residuals: Tuple[float, ...]
    edge_residuals: Dict[Tuple[int, int], float]
    edge_kinds: Dict[Tuple[int, int], str]  # "upper" is the stated edge condition; "interior" and "lower" are derived
    eta: Tuple[float, ...]
    eta_mean_check: float

    @property
    def max_vertex_residual(self) -> float:
        return max(self.vertex_residuals, default=0.0)

    @property
    def max_edge_residual(self) -> float:
        return max(self.edge_residuals.values(), default=0.0)

    @property
    def max_residual(self) -> float:
        return max(self.max_vertex_residual, self.max_edge_residual)

    def lines(self, digits: int = 15) -> List[str]:
        f = lambda v: format(float(v), f".{digits}g")  # noqa: E731
        out = [
            f"gamma {f(self.gamma)}",
            f"s {self.s}",
            f"alpha {f(self.alpha)}",
            f"lambda {f(self.lam)}",
            f"mu {f(self.mu)}",
            f"m_stat {f(self.m_stat)}",
            f"eta_mean_check {f(self.eta_mean_check)}",
            f"max_vertex_residual {f(self.max_vertex_residual)}",
            f"max_edge_residual {f(self.max_edge_residual)}",
        ]
        for i, (res, eta) in enumerate(zip(self.vertex_residuals, self.eta)):
            out.append(f"vertex {i + 1} residual {f(res)} eta {f(eta)}")
        for (i, j), res in sorted(self.edge_residuals.items()):
            kind = self.edge_kinds[(i, j)]
            tag = "" if kind == "upper" else " (derived condition)"
            out.append(f"edge {i + 1} {j + 1} {kind} slack {f(res)}{tag}")
        return out


def m_scale(r: int, s: int, alpha: float) -> float:
    """The factor (r-2) r C(s+1, r) (1+alpha)^(r-1) / (s+1)^r relating mu to M."""
    return (r - 2) * r / (s + 1) ** r * math.comb(s + 1, r) * (1 + alpha) ** (r - 1)


def stationarity_report(g: WeightedGraph, r: int, *, edge_eps: float = EDGE_EPS) -> StationarityReport:
    if r < 3:
        raise DomainError("r must be >= 3")
    prof = clique_profile(g, max(r, 2))
    gamma = prof[1]
    lam = bounds.clique_bound_derivative(r, gamma)  # BreakpointError at kinks
    d = bounds.decompose_density(gamma)
    s, alpha = d.s, float(d.alpha)
    g_r = prof[r - 1]
    mu = 2 * gamma * lam - r * g_r
    scale = m_scale(r, s, alpha)
    m_stat = mu / scale if scale > 0 else math.nan

    n = g.n
    deg = [rooted_density(g, [i], 1) for i in range(n)]
    vres = []
    for i in range(n):
        val = rooted_density(g, [i], r - 1) - (lam * deg[i] - mu)
        if g.x[i] > VERTEX_EPS:
            vres.append(abs(val))
        else:
            vres.append(max(0.0, -val))  # derived: zero-weight vertices only need the one-sided condition
    eres, kinds = {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            aij = g.a[i, j]
            gij = rooted_density(g, [i, j], r - 2)
            if aij >= 1 - edge_eps:
                eres[(i, j)] = max(0.0, gij - lam)
                kinds[(i, j)] = "upper"
            elif aij <= edge_eps:
                eres[(i, j)] = max(0.0, lam - gij)
                kinds[(i, j)] = "lower"
            else:
                eres[(i, j)] = abs(lam - gij)
                kinds[(i, j)] = "interior"
    unit = s / (s + 1) * (1 + alpha)
    eta = tuple(dg / unit for dg in deg)
    eta_mean = abs(float(np.dot(g.x, eta)) - (1 - alpha))
    return StationarityReport(r, gamma, s, alpha, lam, mu, m_stat, tuple(vres), eres, kinds, eta, eta_mean)


@dataclass(frozen=True)
class VertexBound:
    vertex: int
    lhs: float
    rhs: float
    ok: bool


@dataclass(frozen=True)
class ChainResult:
    lhs: float
    rhs: float
    ok: bool
    vertex_bounds: Tuple[VertexBound, ...] = ()
    skipped: Optional[str] = None

    @property
    def all_ok(self) -> bool:
        return self.ok and all(v.ok for v in self.vertex_bounds)


def conditional_chain_check(g: WeightedGraph, r: int, report: StationarityReport, *,
                            stationary_tol: float = 1e-6, tol: float = 1e-8) -> ChainResult:
    """Inequalities that hold at stationary points only.

    (r-1) G(K_r) + (r+1) G(K_{r+1}) <= lambda (gamma + 3 G(K_3)) - 2 gamma mu, and per vertex
    lambda G_i(K_2) - G_i(K_r) <= c (r-1) s theta^2 / 2 - c (r-1) s theta M + c r (s-1) eta_i M
    with c = (r-2) s (1+alpha)^r C(s+1, r) / ((s-1)(s+1)^(r+1)) and theta from the analytic module.
    """
    if report.max_residual > stationary_tol:
        raise NotStationaryError(f"stationarity residual {report.max_residual:.3e} exceeds {stationary_tol}")
    prof = clique_profile(g, r + 1)
    gamma, k3, kr, kr1 = prof[1], prof[2], prof[r - 1], prof[r]
    lam, mu = report.lam, report.mu
    lhs = (r - 1) * kr + (r + 1) * kr1
    rhs = lam * (gamma + 3 * k3) - 2 * gamma * mu
    ok = lhs <= rhs + tol

    s, alpha, M = report.s, report.alpha, report.m_stat
    if not (s >= r - 1 and math.isfinite(M)):
        return ChainResult(lhs, rhs, ok, (), f"s={s} < r-1 or M undefined")
    if M < 1.0 - 1e-9:
        return ChainResult(lhs, rhs, ok, (), f"M={M:.12g} < 1")
    M_eff = max(M, 1.0)
    try:
        p = analytic.make_params(r, s, M_eff)
    except ParameterError as exc:
        return ChainResult(lhs, rhs, ok, (), f"analytic parameters rejected: {exc}")
    theta = p.theta
    c = (r - 2) * s * (1 + alpha) ** r / ((s - 1) * (s + 1) ** (r + 1)) * math.comb(s + 1, r)
    rows = []
    for i in range(g.n):
        if g.x[i] <= VERTEX_EPS:
            continue
        left = lam * rooted_density(g, [i], 2) - rooted_density(g, [i], r)
        right = c * (0.5 * (r - 1) * s * theta ** 2 - (r - 1) * s * theta * M_eff
                     + r * (s - 1) * report.eta[i] * M_eff)
        rows.append(VertexBound(i, left, right, left <= right + tol))
    return ChainResult(lhs, rhs, ok, tuple(rows), None)


# ---------------------------------------------------------------------------
# descent

@dataclass
class OptimizeResult:
    graph: WeightedGraph
    deficit: float
    report: Optional[StationarityReport]
    trace: List[Tuple[int, float, float]] = field(default_factory=list)
    steps: int = 0
    converged: bool = False
    min_deficit_seen: float = math.inf
    note: str = ""


def _near_kink(r: int, gamma: float) -> Optional[float]:
    """Distance to the nearest breakpoint where F_r has a kink, if within KINK_TOL."""
    d = bounds.decompose_density(gamma)
    best = None
    for t in (d.s - 1, d.s):
        if t >= r - 2 and t >= 1:
            dist = abs(gamma - bounds.breakpoint(t))
            if dist < KINK_TOL and (best is None or dist < best):
                best = dist
    return best


def _upper_dot(m1: np.ndarray, m2: np.ndarray) -> float:
    iu = np.triu_indices(m1.shape[0], 1)
    return float(np.dot(m1[iu], m2[iu]))


def minimize_deficit(n: int, r: int, init: Union[WeightedGraph, int, None] = None, *,
                     steps: int = 50_000, step_size: float = 0.1, gtol: float = 1e-12,
                     armijo: float = 1e-4, record_trace: bool = True,
                     fix_edges: bool = False) -> OptimizeResult:
    """Projected-gradient descent with halving backtracking on the deficit.

    Vertex weights are projected to the simplex, edge weights clipped to [0, 1].
    Steps that push the edge density to 1/2 - 1e-6 or within 1e-9 of a kink of
    F_r are shrunk.  ``init`` may be a graph of order n, an integer seed for a
    random start, or None (seed 0).
    """
    if n < r:
        raise DomainError(f"order n={n} must be at least r={r}")
    if r < 3:
        raise DomainError("r must be >= 3")
    if not step_size > 0:
        raise DomainError(f"step size must be positive, got {step_size}")
    if isinstance(init, WeightedGraph):
        g0 = init
        if g0.n != n:
            raise DomainError(f"initial graph has order {g0.n}, expected {n}")
    else:
        rng = np.random.default_rng(0 if init is None else int(init))
        g0 = random_weighted_graph(n, rng)
        while 0.5 * float(g0.x @ g0.a @ g0.x) >= MAX_GAMMA:
            g0 = random_weighted_graph(n, rng)

    x = g0.x.copy()
    a = g0.a.copy()
    f, gamma, lam, gx, ga = deficit_with_gradient(x, a, r)
    if fix_edges:
        ga = np.zeros_like(ga)
    trace = [(0, gamma, f)] if record_trace else []
    seen = f
    eta = step_size
    converged = False
    note = ""
    it = 0
    for it in range(1, steps + 1):
        accepted = False
        while eta >= 1e-18:
            with np.errstate(invalid="ignore", over="ignore"):
                x_try, a_try = x - eta * gx, a - eta * ga
            if not (np.all(np.isfinite(x_try)) and np.all(np.isfinite(a_try))):
                raise DivergenceError(f"non-finite weights at step {it}; reduce the step size")
            x_new = project_simplex(x_try)
            a_new = np.clip(a_try, 0.0, 1.0)
            np.fill_diagonal(a_new, 0.0)
            gamma_new = 0.5 * float(x_new @ a_new @ x_new)
            if gamma_new >= MAX_GAMMA:
                eta *= 0.5
                continue
            dk = _near_kink(r, gamma_new)
            if dk is not None:
                dk_old = _near_kink(r, gamma)
                if dk_old is None or dk < dk_old:
                    eta *= 0.5
                    continue
            f_new, _, lam_new, gx_new, ga_new = deficit_with_gradient(x_new, a_new, r)
            if not math.isfinite(f_new) or not np.all(np.isfinite(gx_new)):
                raise DivergenceError(f"non-finite values at step {it}; reduce the step size")
            seen = min(seen, f_new)
            decrease = float(np.dot(gx, x - x_new)) + _upper_dot(ga, a - a_new)
            if f_new <= f - armijo * decrease:
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            note = "step size underflow"
            break
        move = math.sqrt(float(np.sum((x_new - x) ** 2)) + _upper_dot(a_new - a, a_new - a))
        x, a, f, gamma, lam, gx, ga = x_new, a_new, f_new, gamma_new, lam_new, gx_new, ga_new
        if fix_edges:
            ga = np.zeros_like(ga)
        if record_trace:
            trace.append((it, gamma, f))
        if move / eta <= gtol:
            converged = True
            break
        eta = min(2 * eta, step_size)
    else:
        note = "step budget exhausted"

    g = WeightedGraph(x, a)
    final = clique_density(g, r) - bounds.clique_bound(r, clique_density(g, 2))
    try:
        rep = stationarity_report(g, r)
    except (BreakpointError, DomainError) as exc:
        rep = None
        note = (note + "; " if note else "") + f"no report: {exc}"
    return OptimizeResult(g, final, rep, trace, it, converged, min(seen, final), note)


def perturb(g: WeightedGraph, rng: np.random.Generator, scale: float = 0.01, *,
            edges: float = 0.0) -> WeightedGraph:
    """Add uniform noise in [-scale, scale] to the vertex weights (then renormalize),
    and optionally lower each edge weight by up to ``edges``."""
    x = np.maximum(g.x + rng.uniform(-scale, scale, g.n), 0.0)
    x = x / x.sum()
    a = g.a.copy()
    if edges > 0:
        iu = np.triu_indices(g.n, 1)
        a[iu] = np.clip(a[iu] - rng.uniform(0, edges, len(iu[0])), 0.0, 1.0)
        a = np.triu(a, 1)
        a = a + a.T
    return WeightedGraph(x, a)


def split_to_order(g: WeightedGraph, n: int) -> WeightedGraph:
    """Grow g to order n by halving its heaviest vertex into two non-adjacent
    copies; every clique density is unchanged."""
    if n < g.n:
        raise DomainError(f"cannot shrink order {g.n} to {n}")
    x, a = g.x.copy(), g.a.copy()
    while x.size < n:
        k = int(np.argmax(x))
        x = np.append(x, x[k] / 2)
        x[k] /= 2
        row = np.append(a[k], 0.0)
        a = np.vstack([np.hstack([a, a[k][:, None]]), row])
    return WeightedGraph(x, a)


def _run_one(args):
    n, r, init, kw = args
    return minimize_deficit(n, r, init, **kw)


def multistart(n: int, r: int, inits: Sequence[Union[WeightedGraph, int]], *,
               workers: Optional[int] = None, **kw) -> OptimizeResult:
    """Independent descents merged by lowest final deficit (ties: first start)."""
    jobs = [(n, r, init, kw) for init in inits]
    workers = os.cpu_count() or 1 if workers is None else max(1, workers)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return min(results, key=lambda res: res.deficit)

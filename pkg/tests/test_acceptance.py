"""Ten end-to-end acceptance checks, each with its tolerance and time budget.

Every check records one line in ACCEPTANCE_LINES; the conftest hook prints them
at the end of the session, and running this file directly prints them too.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from cliquedensity import analytic, bounds, extremal, graph, optimize, oracle

pytestmark = pytest.mark.acceptance

ACCEPTANCE_LINES = {}


def record(k, ok, seconds, detail):
    ACCEPTANCE_LINES[k] = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {seconds:8.3f}s  {detail}"
    assert ok, ACCEPTANCE_LINES[k]


def test_01_exact_bound_values():
    bounds.clique_bound(3, Fraction(7, 25))  # warm caches
    t0 = time.perf_counter()
    a = bounds.clique_bound(3, Fraction(1, 3))
    t1 = time.perf_counter()
    b = bounds.clique_bound(4, Fraction(3, 8))
    t2 = time.perf_counter()
    ok = a == Fraction(1, 27) and b == Fraction(1, 256) and t1 - t0 < 1e-3 and t2 - t1 < 1e-3
    record(1, ok, t2 - t0, f"F_3(1/3)={a}, F_4(3/8)={b}, per call {1e6 * (t1 - t0):.0f}us/{1e6 * (t2 - t1):.0f}us")


def test_02_product_bound_dominance():
    t0 = time.perf_counter()
    grid = np.linspace(0, 0.5, 2000, endpoint=False)
    worst, worst_eq = -math.inf, 0.0
    for r in range(3, 7):
        for g in grid:
            worst = max(worst, bounds.ls_bound(r, g) - bounds.clique_bound(r, g))
        for t in range(1, 400):
            b = t / (2 * (t + 1))
            worst_eq = max(worst_eq, abs(bounds.ls_bound(r, b) - bounds.clique_bound(r, b)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and worst_eq <= 1e-12 and dt < 1.0
    record(2, ok, dt, f"max(ls - F)={worst:.2e}, max breakpoint gap={worst_eq:.2e}")


def test_03_local_inequalities_exhaustive():
    details, ok, total = [], True, 0.0
    for r in (3, 4, 5, 6):
        t0 = time.perf_counter()
        rep = graph.check_local_inequalities(r, "exhaustive01")
        dt = time.perf_counter() - t0
        total += dt
        n_pts = rep.results[0].points
        ok &= rep.passed and n_pts == 2 ** math.comb(r + 1, 2)
        details.append(f"r={r}:{n_pts}")
    ok &= dt < 60  # budget stated for r = 6
    record(3, ok, total, "zero violations over " + ", ".join(details) + f"; r=6 took {dt:.1f}s")


def test_04_second_step_identity():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = 0.0
    for k in range(10_000):
        n = 3 + k % 6
        g = graph.random_weighted_graph(n, rng)
        worst = max(worst, graph.second_step_identity(g).residual / (1e-12 * n ** 3))
    dt = time.perf_counter() - t0
    record(4, worst <= 1.0 and dt < 30, dt, f"10000 graphs, max residual/(1e-12 n^3)={worst:.3f}")


def test_05_cauchy_chain():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    ok, worst_id = True, 0.0
    for k in range(10_000):
        g = graph.random_weighted_graph(3 + k % 6, rng)
        for r in (3, 4):
            c = graph.cauchy_chain_check(g, r)
            ok &= c.ok
            worst_id = max(worst_id, c.weight_sum_residual, c.eta_sum_residual)
    dt = time.perf_counter() - t0
    record(5, ok and worst_id <= 1e-12 and dt < 60, dt, f"10000 graphs x r in {{3,4}}, max identity residual={worst_id:.1e}")


def test_06_oracle_against_bound():
    t0 = time.perf_counter()
    cell = oracle.min_cliques(5, 7, 3)
    bound = float(bounds.clique_bound(3, 7 / 25)) * 125
    ok = cell.minimum == 2 and abs(bound - 1.8148148148) < 1e-9
    worst, t7 = math.inf, 0.0
    for n, r in ((5, 3), (6, 3), (7, 3), (6, 4), (7, 4)):
        ts = time.perf_counter()
        rows = oracle.sweep(n, r, workers=None)
        if n == 7:
            t7 = max(t7, time.perf_counter() - ts)
        worst = min(worst, min(row.slack for row in rows))
    dt = time.perf_counter() - t0
    ok &= worst >= -1e-9 and t7 < 600
    record(6, ok, dt, f"min(5,7,3)={cell.minimum} vs {bound:.4f}; worst slack={worst:.2e}; n=7 sweep {t7:.2f}s")


def test_07_extremal_equality():
    t0 = time.perf_counter()
    worst = 0.0
    for r in range(3, 8):
        for g in np.linspace(0, 0.5, 200, endpoint=False):
            worst = max(worst, abs(graph.deficit(extremal.extremal_weighted(g), r)))
    dt = time.perf_counter() - t0
    record(7, worst <= 1e-12 and dt < 5, dt, f"max |deficit|={worst:.1e} over r=3..7 x 200 densities")


def test_08_blowup_error():
    t0 = time.perf_counter()
    g = extremal.extremal_weighted(Fraction(1, 3))
    exact = all(extremal.count_cliques(extremal.blowup(g, N), 3) * 27 == N ** 3 for N in (12, 24, 48))
    ratio = max(abs(extremal.count_cliques(extremal.blowup(g, N), 3) - N ** 3 / 27) / N for N in range(13, 51))
    dt = time.perf_counter() - t0
    record(8, exact and ratio <= 2 and dt < 10, dt, f"exact at N=12,24,48: {exact}; max |error|/N over 13..50 = {ratio:.3f}")


def _m_values(r, s):
    sup = analytic.smallness_supremum(r, s)
    sup = 2.0 if math.isinf(sup) else sup  # s = r-1 allows every M; cap the range
    near = 0.999 * sup
    return [1.0, 1.01, 0.5 * (1 + near), near]


def test_09_analytic_claims():
    t0 = time.perf_counter()
    p = analytic.make_params(3, 3, 1.0)
    spot = (abs(analytic.h_eval(p, 2 / 3) - 0.25) <= 1e-12 and abs(p.theta - 2 / 3) <= 1e-12
            and abs(analytic.t_majorant_check(p, p.theta).slack) <= 1e-10)
    failures, count = [], 0
    for r in range(3, 7):
        for s in range(r - 1, 11):
            for M in _m_values(r, s):
                rep = analytic.verify_analytic_claims(analytic.make_params(r, s, M), 101)
                count += 1
                if not rep.passed:
                    failures.append((r, s, M, [f.claim for f in rep.failures()]))
    dt = time.perf_counter() - t0
    record(9, spot and not failures and dt < 120, dt, f"{count} parameter sets, spot values ok={spot}, failures={failures[:3]}")


def _fd_gradient_ok(g, r, h=1e-7):
    f, gamma, lam, gx, ga = optimize.deficit_with_gradient(g.x, g.a, r)

    def fval(x, a):
        return graph.clique_sum(x, a, r) - bounds.clique_bound(r, graph.clique_sum(x, a, 2))

    worst = 0.0
    for i in range(g.n):
        xp, xm = g.x.copy(), g.x.copy()
        xp[i] += h
        xm[i] -= h
        worst = max(worst, abs(gx[i] - (fval(xp, g.a) - fval(xm, g.a)) / (2 * h)))
    for i in range(g.n):
        for j in range(i + 1, g.n):
            ap, am = g.a.copy(), g.a.copy()
            ap[i, j] = ap[j, i] = g.a[i, j] + h
            am[i, j] = am[j, i] = g.a[i, j] - h
            worst = max(worst, abs(ga[i, j] - (fval(g.x, ap) - fval(g.x, am)) / (2 * h)))
    return worst


def test_10_optimizer():
    rng = np.random.default_rng(10)
    t0 = time.perf_counter()
    worst_def, worst_res, worst_m, worst_fd, runs = 0.0, 0.0, 0.0, 0.0, 0
    for gamma in (0.27, 0.30, 0.35):
        base = extremal.extremal_weighted(gamma)
        for _ in range(20):
            start = optimize.perturb(base, rng, 0.01)
            worst_fd = max(worst_fd, _fd_gradient_ok(start, 3))
            res = optimize.minimize_deficit(start.n, 3, start)
            rep = res.report
            runs += 1
            worst_def = max(worst_def, res.deficit)
            worst_res = max(worst_res, rep.max_residual if rep else math.inf)
            worst_m = max(worst_m, abs(rep.m_stat - 1) if rep else math.inf)
    dt = time.perf_counter() - t0
    ok = worst_def <= 1e-7 and worst_res <= 1e-5 and worst_m <= 1e-3 and worst_fd <= 1e-6 and dt < 300
    record(10, ok, dt, f"{runs} runs: max deficit={worst_def:.1e}, max residual={worst_res:.1e}, "
                       f"max |m_stat-1|={worst_m:.1e}, max FD gap={worst_fd:.1e}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

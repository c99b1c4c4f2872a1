"""Auxiliary functions of (r, s, M) used to bound the local structure of a
minimizer, and grid checks of the inequalities they satisfy.

Throughout, eta ranges over [(r-2)/(r-1) * M, M] and

    H(eta)   = C(s, r-1)/s^(r-1) * ((r-1) eta - (r-2) M) / eta^(r-1)
    nu(eta)  = F_{r-1}^{-1}(H(eta))
    Q(delta) = (r-1) C(s, r-1) delta - s^(r-1) eta^(r-2) F_r(delta)
    J(eta)   = eta^k F_k(nu(eta))
    T(eta)   = eta^2 Q(nu(eta))

theta_t is the point where H reaches F_{r-1}((t-1)/(2t)); theta = theta_{s-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from . import bounds
from .errors import DomainError, ParameterError
from .report import VerificationReport

_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class AnalyticParams:
    r: int
    s: int
    M: float
    theta_table: Tuple[float, ...]  # theta_t for t = r-2, ..., s-1

    @property
    def theta(self) -> float:
        return self.theta_table[-1]

    @property
    def eta_min(self) -> float:
        return (self.r - 2) / (self.r - 1) * self.M

    def theta_at(self, t: int) -> float:
        """theta_t, with theta_s taken to be M."""
        if t == self.s:
            return self.M
        return self.theta_table[t - (self.r - 2)]

    def intervals(self) -> List[Tuple[int, float, float]]:
        """(t, theta_t, theta_{t+1}) for t = r-2 .. s-1, the last one ending at M."""
        return [(t, self.theta_at(t), self.theta_at(t + 1)) for t in range(self.r - 2, self.s)]


def smallness_holds(r: int, s: int, M: float) -> bool:
    return ((s - 1) / s) ** (r - 2) > (s - r + 1) / (s - 1) * M ** (r - 2)


def smallness_supremum(r: int, s: int) -> float:
    """Least upper bound of the M allowed by the smallness condition (inf when s = r-1)."""
    if s == r - 1:
        return math.inf
    return (s - 1) / s * ((s - 1) / (s - r + 1)) ** (1.0 / (r - 2))


def _h(r, s, M, eta):
    return math.comb(s, r - 1) / s ** (r - 1) * ((r - 1) * eta - (r - 2) * M) / eta ** (r - 1)


def make_params(r: int, s: int, M: float, *, width: float = 1e-13) -> AnalyticParams:
    if int(r) != r or r < 3:
        raise ParameterError(f"r={r} must be an integer >= 3")
    if int(s) != s or s < r - 1:
        raise ParameterError(f"s={s} must be an integer >= r-1={r - 1}")
    M = float(M)
    if not M >= 1.0:
        raise ParameterError(f"M={M} must be >= 1")
    if not smallness_holds(r, s, M):
        raise ParameterError(
            f"smallness condition ((s-1)/s)^(r-2) > (s-r+1)/(s-1) * M^(r-2) fails for r={r}, s={s}, M={M}")
    lo = (r - 2) / (r - 1) * M
    table = [lo]
    for t in range(r - 1, s):
        target = bounds.breakpoint_value(r - 1, t - 1)
        a, b = lo, M
        while b - a > width:
            mid = 0.5 * (a + b)
            if _h(r, s, M, mid) < target:
                a = mid
            else:
                b = mid
        table.append(0.5 * (a + b))
    return AnalyticParams(r, s, M, tuple(table))


def _check_eta(p: AnalyticParams, eta: float) -> float:
    eta = float(eta)
    if not (p.eta_min - _DOMAIN_TOL <= eta <= p.M + _DOMAIN_TOL):
        raise DomainError(f"eta={eta} outside [{p.eta_min}, {p.M}]")
    return min(max(eta, p.eta_min), p.M)


def h_eval(p: AnalyticParams, eta: float) -> float:
    eta = _check_eta(p, eta)
    return max(_h(p.r, p.s, p.M, eta), 0.0)


def nu(p: AnalyticParams, eta: float) -> float:
    """F_{r-1}^{-1}(H(eta))."""
    return bounds.clique_bound_inverse(p.r - 1, h_eval(p, eta))


def q_eval(p: AnalyticParams, eta: float, delta: float, *, nu_value: float = None) -> float:
    eta = _check_eta(p, eta)
    top = nu(p, eta) if nu_value is None else nu_value
    if delta < 0 or delta > top + 1e-12:
        raise DomainError(f"delta={delta} outside [0, nu={top}]")
    r, s = p.r, p.s
    return (r - 1) * math.comb(s, r - 1) * delta - s ** (r - 1) * eta ** (r - 2) * bounds.clique_bound(r, delta)


def j_eval(p: AnalyticParams, k: int, eta: float) -> float:
    if k < 2:
        raise DomainError(f"k={k} must be >= 2")
    eta = _check_eta(p, eta)
    return eta ** k * bounds.clique_bound(k, nu(p, eta))


@dataclass(frozen=True)
class SlackRecord:
    lhs: float
    rhs: float
    slack: float


def t_eval(p: AnalyticParams, eta: float) -> float:
    """T(eta) = (r-1) C(s, r-1) eta^2 nu - s^(r-1) eta^r F_r(nu)."""
    eta = _check_eta(p, eta)
    v = nu(p, eta)
    r, s = p.r, p.s
    return (r - 1) * math.comb(s, r - 1) * eta ** 2 * v - s ** (r - 1) * eta ** r * bounds.clique_bound(r, v)


def t_upper(p: AnalyticParams, eta: float) -> float:
    """Linear-in-eta majorant of T anchored at theta."""
    r, s, M, th = p.r, p.s, p.M, p.theta
    coef = (r - 2) / ((s - 1) * (s + 1)) * math.comb(s + 1, r)
    return coef * (0.5 * (r - 1) * s * th ** 2 - (r - 1) * s * th * M + r * (s - 1) * M * eta)


def t_majorant_check(p: AnalyticParams, eta: float) -> SlackRecord:
    lhs = t_eval(p, eta)
    rhs = t_upper(p, _check_eta(p, eta))
    return SlackRecord(lhs, rhs, rhs - lhs)


def s_aux(p: AnalyticParams, t: int, eta: float) -> float:
    """S(eta) on (theta_t, theta_{t+1}): the root in (t/(t+1), 1) of
    C(t+1, r-1)/(t+1)^(r-1) * ((r-1) S - (r-2))/S^(r-1) = H(eta)."""
    r = p.r
    target = h_eval(p, eta)
    c = math.comb(t + 1, r - 1) / (t + 1) ** (r - 1)

    def f(x):
        return c * ((r - 1) * x - (r - 2)) / x ** (r - 1) - target

    lo, hi = t / (t + 1), 1.0
    flo, fhi = f(lo), f(hi)
    if flo >= 0:
        return lo
    if fhi <= 0:
        return hi
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def j_second_derivative(p: AnalyticParams, k: int, t: int, eta: float) -> float:
    """Closed-form J'' on (theta_t, theta_{t+1}) via S(eta)."""
    r, M = p.r, p.M
    S = s_aux(p, t, eta)
    c = math.comb(t + 1, k) / (t + 1) ** k
    lin = (r - 1) * eta - (r - 2) * M
    num = k * (k - 1) * (r - k - 1) * eta ** (k - 2) * (S * M - eta) ** 2
    den = S ** k * (1 - S) * lin ** 2
    return c * num / den


def _open_grid(a: float, b: float, n: int) -> np.ndarray:
    h = (b - a) / n
    return a + h * (np.arange(n) + 0.5)


def verify_analytic_claims(p: AnalyticParams, grid_points: int = 101) -> VerificationReport:
    """Grid checks of the five analytic inequalities; failures carry the witness point."""
    if grid_points < 3:
        raise DomainError("grid_points must be >= 3")
    r, s, M = p.r, p.s, p.M
    rep = VerificationReport(f"analytic r={r} s={s} M={M:.15g}")
    full = f"[{p.eta_min:.6g},{M:.6g}]"

    # H strictly increasing, with positive forward differences
    xs = _open_grid(p.eta_min, M, grid_points)
    hs = np.array([h_eval(p, x) for x in xs])
    diffs = np.diff(hs)
    k = int(np.argmin(diffs))
    fwd = min((h_eval(p, x + 1e-6) - h_eval(p, x)) / 1e-6 for x in xs if x + 1e-6 <= M)
    rep.add("h_monotone", full, diffs[k] > 0 and fwd > 0, min(diffs[k], fwd),
            None if diffs[k] > 0 else f"eta={xs[k]:.15g}", len(xs))
    hm = h_eval(p, M)
    low = bounds.breakpoint_value(r - 1, s - 2)
    high = bounds.breakpoint_value(r - 1, s - 1)
    rep.add("h_endpoint_bracket", f"H(M)={hm:.6g}", low < hm <= high + 1e-15,
            min(hm - low, high - hm), None, 1)

    # theta_t magnitudes
    worst, witness = math.inf, None
    for t in range(r - 2, s - 1):
        gap = t / (t + 1) * M - p.theta_at(t)
        if gap < worst:
            worst, witness = gap, f"t={t}"
    gap = p.theta - (s - 1) / s * M
    if gap < worst:
        worst, witness = gap, f"t={s - 1}"
    rep.add("theta_bounds", "t=r-2..s-1", worst >= -1e-12, worst, witness if worst < -1e-12 else None, s - r + 2)
    cor = -((s * s - 1) / (s * s)) * M * M - (p.theta ** 2 - 2 * M * p.theta)
    rep.add("theta_square_gap", f"theta={p.theta:.6g}", cor >= -1e-10, cor, None, 1)
    incr = all(b > a for a, b in zip(p.theta_table, p.theta_table[1:])) and p.theta < M
    rep.add("theta_ordering", "table", incr, 0.0 if incr else -1.0, None, len(p.theta_table))

    # Q peaks at delta = nu
    worst, witness = math.inf, None
    for eta in np.linspace(p.eta_min, M, grid_points):
        v = nu(p, eta)
        if v <= 0.0:
            continue
        ds = np.linspace(0.0, v, grid_points)
        qs = np.array([q_eval(p, eta, d, nu_value=v) for d in ds])
        top = q_eval(p, eta, v, nu_value=v)
        slack = top - qs.max()
        if slack < worst:
            worst, witness = slack, f"eta={eta:.15g}"
    rep.add("q_max_at_nu", full, worst >= -1e-12, worst,
            witness if worst < -1e-12 else None, grid_points * grid_points)

    # curvature of J for k = 2 (convex) and k = r (concave), by second differences
    for t, a, b in p.intervals():
        if b - a <= 1e-12:
            continue
        xs = _open_grid(a, b, grid_points)
        for kk in (2, r):
            js = np.array([j_eval(p, kk, x) for x in xs])
            sd = js[2:] - 2 * js[1:-1] + js[:-2]
            if kk == r:
                slack_arr = -sd  # concave: second differences <= 0
            else:
                slack_arr = sd  # convex: second differences >= 0
            i = int(np.argmin(slack_arr))
            ok = slack_arr[i] >= -1e-9
            rep.add(f"j_curvature_k{kk}", f"[{a:.6g},{b:.6g}]", ok, slack_arr[i],
                    None if ok else f"eta={xs[i + 1]:.15g}", len(xs))
            # closed form J'' must agree in sign with the second differences
            agree, worst_cf = True, math.inf
            for x in _open_grid(a, b, 10):
                cf = j_second_derivative(p, kk, t, x)
                h = 1e-3 * (b - a)
                fd = (j_eval(p, kk, x + h) - 2 * j_eval(p, kk, x) + j_eval(p, kk, x - h)) / h ** 2
                noise = 1e-6 * max(1.0, abs(cf))
                if abs(cf) > noise and abs(fd) > noise and math.copysign(1, cf) != math.copysign(1, fd):
                    agree = False
                want = cf if kk != r else -cf
                worst_cf = min(worst_cf, want)
            rep.add(f"j_closed_form_k{kk}", f"[{a:.6g},{b:.6g}]", agree and worst_cf >= -1e-9, worst_cf,
                    None, 10)

    # T bounded by its linear majorant, tight at theta
    worst, witness = math.inf, None
    for eta in np.linspace(p.eta_min, M, grid_points):
        rec = t_majorant_check(p, eta)
        if rec.slack < worst:
            worst, witness = rec.slack, f"eta={eta:.15g}"
    rep.add("t_upper_bound", full, worst >= -1e-10, worst, witness if worst < -1e-10 else None, grid_points)
    at = t_majorant_check(p, p.theta)
    rep.add("t_tight_at_theta", f"eta={p.theta:.6g}", abs(at.slack) <= 1e-10, -abs(at.slack), None, 1)
    return rep

"""Closed-form minimum clique density F_r, its derivative and inverse, and the
classical product lower bound (LS).

Edge densities are written gamma = s/(2(s+1)) * (1 - alpha**2) with
gamma in [(s-1)/(2s), s/(2(s+1))) and alpha in (0, 1/s].  Passing a
``fractions.Fraction`` (or an ``int``) for gamma selects exact rational
arithmetic; this only works when alpha comes out rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .errors import BreakpointError, DomainError

Real = Union[float, Fraction]

# Densities closer than this to t/(2(t+1)) are treated as that breakpoint.
BREAKPOINT_TOL = 1e-12
_RADICAND_FLOOR = -1e-15


@dataclass(frozen=True)
class DensityDecomposition:
    gamma: Real
    s: int
    alpha: Real
    # (s - 1, 0) when gamma sits on the breakpoint (s-1)/(2s), else None
    t_alias: Optional[Tuple[int, Real]] = None

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction)

    def reconstruct(self) -> Real:
        """gamma recomputed from (s, alpha)."""
        s, a = self.s, self.alpha
        if self.exact:
            return Fraction(s, 2 * (s + 1)) * (1 - a * a)
        return s / (2 * (s + 1)) * (1 - a * a)


def breakpoint(t: int) -> float:
    """The edge density t/(2(t+1)) at which the class count changes."""
    return t / (2 * (t + 1))


def turan_threshold(r: int) -> float:
    """(r-2)/(2(r-1)); F_r vanishes up to and including this density."""
    return (r - 2) / (2 * (r - 1))


def breakpoint_value(r: int, t: int) -> float:
    """F_r(t/(2(t+1))) = C(t+1, r)/(t+1)^r."""
    return math.comb(t + 1, r) / (t + 1) ** r


def _is_exact(gamma) -> bool:
    return isinstance(gamma, (Fraction, int)) and not isinstance(gamma, bool)


def _exact_sqrt(q: Fraction) -> Fraction:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise DomainError(f"alpha is irrational for radicand {q}; use float input")
    return Fraction(num, den)


def _decompose_exact(gamma: Fraction) -> DensityDecomposition:
    t = 1
    while gamma >= Fraction(t, 2 * (t + 1)):
        t += 1
    radicand = 1 - 2 * gamma * Fraction(t + 1, t)
    alpha = _exact_sqrt(radicand)
    alias = (t - 1, Fraction(0)) if (t > 1 and alpha == Fraction(1, t)) else None
    return DensityDecomposition(gamma, t, alpha, alias)


def decompose_density(gamma: Real) -> DensityDecomposition:
    """Canonical (s, alpha) with gamma in the half-open piece [(s-1)/(2s), s/(2(s+1))).

    At a breakpoint t/(2(t+1)) the canonical pair is (t+1, 1/(t+1)); the
    other legitimate pair (t, 0) is kept in ``t_alias``.
    """
    if _is_exact(gamma):
        gamma = Fraction(gamma)
        if not (0 <= gamma < Fraction(1, 2)):
            raise DomainError(f"edge density {gamma} outside [0, 1/2)")
        return _decompose_exact(gamma)

    g = float(gamma)
    if not (0.0 <= g < 0.5) or math.isnan(g):
        raise DomainError(f"edge density {gamma!r} outside [0, 1/2)")
    t = int(2 * g / (1 - 2 * g)) + 1
    while t > 1 and g < breakpoint(t - 1) - BREAKPOINT_TOL:
        t -= 1
    while g >= breakpoint(t) - BREAKPOINT_TOL:
        t += 1
    if abs(g - breakpoint(t - 1)) <= BREAKPOINT_TOL:
        alpha = 1.0 / t
        alias = (t - 1, 0.0) if t > 1 else None
        return DensityDecomposition(g, t, alpha, alias)
    radicand = 1.0 - 2.0 * g * (t + 1) / t
    if radicand < 0.0:
        if radicand < _RADICAND_FLOOR:
            raise AssertionError(f"negative radicand {radicand} at gamma={g}")
        radicand = 0.0
    return DensityDecomposition(g, t, math.sqrt(radicand), None)


def _check_r(r: int, least: int = 2) -> None:
    if int(r) != r or r < least:
        raise DomainError(f"clique size r={r} must be an integer >= {least}")


def _f_from_pair(r: int, s: int, alpha: Real) -> Real:
    c = math.comb(s + 1, r)
    if c == 0:
        return Fraction(0) if isinstance(alpha, Fraction) else 0.0
    if isinstance(alpha, Fraction):
        return Fraction(c, (s + 1) ** r) * (1 + alpha) ** (r - 1) * (1 - (r - 1) * alpha)
    return c / (s + 1) ** r * (1 + alpha) ** (r - 1) * (1 - (r - 1) * alpha)


def clique_bound(r: int, gamma: Real) -> Real:
    """F_r(gamma), the minimum K_r density at edge density gamma."""
    _check_r(r)
    d = decompose_density(gamma)
    if r == 2:
        return d.gamma
    if d.exact:
        if d.gamma <= Fraction(r - 2, 2 * (r - 1)):
            return Fraction(0)
    elif d.gamma <= turan_threshold(r) + BREAKPOINT_TOL:
        return 0.0
    return _f_from_pair(r, d.s, d.alpha)


def _slope(r: int, s: int, alpha: float) -> float:
    return (r - 1) * r / (s * (s + 1) ** (r - 1)) * math.comb(s + 1, r) * (1 + alpha) ** (r - 2)


def local_slope(r: int, gamma: float) -> float:
    """Derivative of F_r on the canonical piece containing gamma.

    Never raises at breakpoints: there it returns the right derivative,
    which serves as a subgradient for descent.
    """
    _check_r(r)
    if r == 2:
        return 1.0
    d = decompose_density(float(gamma))
    if d.gamma < turan_threshold(r):
        return 0.0
    return _slope(r, d.s, float(d.alpha))


def one_sided_slopes(r: int, gamma: float) -> Tuple[float, float]:
    """(left, right) derivatives of F_r at gamma."""
    _check_r(r)
    if r == 2:
        return 1.0, 1.0
    d = decompose_density(float(gamma))
    right = 0.0 if d.gamma < turan_threshold(r) - BREAKPOINT_TOL else _slope(r, d.s, float(d.alpha))
    if d.t_alias is None:
        left = 0.0 if d.gamma <= turan_threshold(r) + BREAKPOINT_TOL else right
        return left, right
    t = d.t_alias[0]
    return _slope(r, t, 0.0), right


def clique_bound_derivative(r: int, gamma: float) -> float:
    """lambda = F_r'(gamma); raises BreakpointError where F_r has a kink."""
    _check_r(r, 3)
    g = float(gamma)
    d = decompose_density(g)
    thr = turan_threshold(r)
    if g < thr - BREAKPOINT_TOL:
        return 0.0
    lower, upper = breakpoint(d.s - 1), breakpoint(d.s)
    if abs(g - lower) <= BREAKPOINT_TOL or abs(g - upper) <= BREAKPOINT_TOL:
        raise BreakpointError(f"F_{r} is not differentiable at breakpoint gamma={g}")
    return _slope(r, d.s, float(d.alpha))


def _piece_for_value(r: int, y: float) -> int:
    # smallest t >= r-1 with breakpoint_value(r, t) > y; galloping then bisection
    lo = r - 2
    hi = r - 1
    while breakpoint_value(r, hi) <= y:
        lo, hi = hi, 2 * hi
        if hi > 1 << 60:
            raise DomainError(f"value {y} too close to 1/{r}! to invert")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if breakpoint_value(r, mid) <= y:
            lo = mid
        else:
            hi = mid
    return hi


def clique_bound_inverse(r: int, y: float, *, tol: float = 1e-16, max_iter: int = 200) -> float:
    """The unique gamma in [(r-2)/(2(r-1)), 1/2) with F_r(gamma) = y.

    The piece containing the answer is located from the breakpoint values,
    then alpha is found by bisection of the monotone map
    alpha -> (1+alpha)^(r-1) (1-(r-1) alpha) on [0, 1/t].
    """
    _check_r(r)
    y = float(y)
    if not (0.0 <= y < 1.0 / math.factorial(r)):
        raise DomainError(f"value {y} outside [0, 1/{r}!)")
    if r == 2:
        return y
    if y == 0.0:
        return turan_threshold(r)
    t = _piece_for_value(r, y)
    target = y * (t + 1) ** r / math.comb(t + 1, r)

    def g(a):
        return (1 + a) ** (r - 1) * (1 - (r - 1) * a)

    lo, hi = 0.0, 1.0 / t  # g(lo) >= target >= g(hi)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) >= target:
            lo = mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)
    return breakpoint(t) * (1 - alpha * alpha)


def ls_bound(r: int, gamma: Real) -> Real:
    """(1/r!) * prod_{i=1}^{r-1} (2 i gamma - (i-1)) above the Turán threshold, else 0."""
    _check_r(r)
    exact = _is_exact(gamma)
    g = Fraction(gamma) if exact else float(gamma)
    if not 0 <= g < Fraction(1, 2):
        raise DomainError(f"edge density {gamma!r} outside [0, 1/2)")
    if g < Fraction(r - 2, 2 * (r - 1)):
        return Fraction(0) if exact else 0.0
    prod = Fraction(1) if exact else 1.0
    for i in range(1, r):
        prod *= 2 * i * g - (i - 1)
    return prod / math.factorial(r)


def power_lower_bound(r: int, s: int, gamma: float) -> float:
    """(1/s) * C(s, r) * (2 gamma/(s-1))^(r-1); valid lower bound for gamma > (s-1)/(2s)."""
    if s < 2 or s < r - 1:
        raise DomainError(f"need s >= max(2, r-1), got r={r}, s={s}")
    return math.comb(s, r) / s * (2 * gamma / (s - 1)) ** (r - 1)

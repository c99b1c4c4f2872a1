import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquedensity import bounds
from cliquedensity.bounds import (breakpoint, clique_bound, clique_bound_derivative, clique_bound_inverse,
                                  power_lower_bound, decompose_density, ls_bound)
from cliquedensity.errors import BreakpointError, DomainError

from conftest import densities


# -- decomposition ----------------------------------------------------------

def test_decompose_zero():
    d = decompose_density(0.0)
    assert (d.s, d.alpha) == (1, 1.0)


def test_decompose_interior():
    d = decompose_density(0.28)
    assert d.s == 2
    assert d.alpha == pytest.approx(0.4, abs=1e-14)
    assert d.t_alias is None


def test_decompose_breakpoint_exact():
    d = decompose_density(Fraction(1, 3))
    assert (d.s, d.alpha, d.t_alias) == (3, Fraction(1, 3), (2, 0))


def test_decompose_breakpoint_float_snaps():
    d = decompose_density(1 / 3)
    assert d.s == 3 and d.alpha == pytest.approx(1 / 3)
    assert d.t_alias[0] == 2


@pytest.mark.parametrize("bad", [-0.1, 0.5, 0.7, float("nan"), Fraction(1, 2)])
def test_decompose_rejects(bad):
    with pytest.raises(DomainError):
        decompose_density(bad)


@given(densities)
def test_decomposition_invariants(g):
    d = decompose_density(g)
    assert abs(d.reconstruct() - g) <= 1e-12
    assert (d.s - 1) / (2 * d.s) - 1e-12 <= g <= d.s / (2 * (d.s + 1)) + 1e-12
    assert 0 < d.alpha <= 1 / d.s + 1e-15


# -- F_r values ---------------------------------------------------------------

def test_bound_below_threshold():
    assert clique_bound(3, 0.25) == 0.0
    assert clique_bound(3, 0.1) == 0.0


def test_bound_exact_breakpoints():
    assert clique_bound(3, Fraction(1, 3)) == Fraction(1, 27)
    assert clique_bound(4, Fraction(3, 8)) == Fraction(1, 256)


def test_bound_interior_value():
    # s=2, alpha=0.4: (1/27) * 1.4^2 * 0.2
    assert clique_bound(3, 0.28) == pytest.approx(0.392 / 27, rel=1e-13)
    assert clique_bound(3, Fraction(7, 25)) == Fraction(49, 3375)


def test_bound_r2_is_identity():
    assert clique_bound(2, 0.3) == 0.3


@given(st.integers(2, 8), densities)
def test_bound_range(r, g):
    v = clique_bound(r, g)
    assert 0.0 <= v < 1 / math.factorial(r)


def test_alias_gives_same_value():
    for t in range(1, 30):
        for r in range(3, 9):
            canon = bounds._f_from_pair(r, t + 1, 1 / (t + 1))
            alias = bounds._f_from_pair(r, t, 0.0)
            if t + 1 < r:
                continue
            assert abs(canon - alias) <= 1e-14


def test_continuity_at_breakpoints():
    eps = 1e-9
    for t in range(1, 41):
        b = breakpoint(t)
        for r in range(2, 9):
            assert abs(clique_bound(r, b - eps) - clique_bound(r, b + eps)) <= 10 * eps


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_monotone_on_grid(r):
    thr = bounds.turan_threshold(r)
    grid = np.linspace(thr, 0.5, 10_000, endpoint=False)
    vals = np.array([clique_bound(r, g) for g in grid])
    assert np.all(np.diff(vals) >= 0)
    assert np.all(np.diff(vals[1:]) > 0)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_piecewise_concave(r):
    for t in range(r - 1, r + 6):
        lo, hi = breakpoint(t - 1), breakpoint(t)
        grid = np.linspace(lo, hi, 402)[1:-1]
        vals = np.array([clique_bound(r, g) for g in grid])
        assert np.max(np.diff(vals, 2)) <= 1e-10


# -- derivative --------------------------------------------------------------

def test_derivative_value():
    assert clique_bound_derivative(3, 0.28) == pytest.approx(1.4 / 3, rel=1e-13)


@pytest.mark.parametrize("r,g", [(3, 0.28), (4, 0.41), (5, 0.43), (3, 0.46), (6, 0.47)])
def test_derivative_matches_central_difference(r, g):
    h = 1e-6
    fd = (clique_bound(r, g + h) - clique_bound(r, g - h)) / (2 * h)
    assert clique_bound_derivative(r, g) == pytest.approx(fd, abs=1e-6)


def test_derivative_zero_below_threshold():
    assert clique_bound_derivative(3, 0.2) == 0.0


def test_derivative_raises_at_breakpoint():
    with pytest.raises(BreakpointError):
        clique_bound_derivative(3, 1 / 3)
    with pytest.raises(BreakpointError):
        clique_bound_derivative(4, 3 / 8 + 1e-13)


def test_one_sided_slopes_jump_at_breakpoint():
    left, right = bounds.one_sided_slopes(3, 1 / 3)
    assert left < right


def test_one_sided_slopes_match_differences():
    # 0.4 is the t=4 breakpoint, so F_4 has a kink there; on the left alpha
    # grows like sqrt(0.4 - gamma), so that difference quotient converges like sqrt(h)
    h = 1e-10
    left, right = bounds.one_sided_slopes(4, 0.4)
    assert left == pytest.approx((clique_bound(4, 0.4) - clique_bound(4, 0.4 - h)) / h, abs=1e-4)
    assert right == pytest.approx((clique_bound(4, 0.4 + 1e-7) - clique_bound(4, 0.4)) / 1e-7, abs=1e-5)
    assert (left, right) == pytest.approx((0.12, 0.24), abs=1e-14)
    with pytest.raises(BreakpointError):
        clique_bound_derivative(4, 0.4)


# -- inverse -----------------------------------------------------------------

def test_inverse_examples():
    assert clique_bound_inverse(3, 0.0) == 0.25
    assert clique_bound_inverse(3, 1 / 27) == pytest.approx(1 / 3, abs=1e-14)
    assert clique_bound_inverse(2, 0.3) == 0.3


def test_inverse_rejects_out_of_range():
    with pytest.raises(DomainError):
        clique_bound_inverse(3, 1 / 6)
    with pytest.raises(DomainError):
        clique_bound_inverse(3, -1e-3)


@given(st.integers(2, 7), st.floats(0.0, 0.4999))
def test_inverse_round_trip(r, g):
    g = max(g, bounds.turan_threshold(r))
    y = clique_bound(r, g)
    back = clique_bound_inverse(r, y)
    assert abs(clique_bound(r, back) - y) <= 1e-12
    if y > 0:
        assert abs(back - g) <= 1e-10


# -- product bound -------------------------------------------------------------

def test_ls_examples():
    assert ls_bound(3, 0.25) == 0
    assert ls_bound(3, Fraction(3, 8)) == Fraction(1, 16) == clique_bound(3, Fraction(3, 8))
    assert ls_bound(4, 0.4) == pytest.approx(0.008, abs=1e-16)


@given(st.integers(2, 8), densities)
def test_ls_dominated(r, g):
    assert ls_bound(r, g) <= clique_bound(r, g) + 1e-12


def test_ls_equality_at_breakpoints():
    for r in range(2, 8):
        for t in range(max(r - 2, 1), 40):
            b = Fraction(t, 2 * (t + 1))
            assert ls_bound(r, b) == clique_bound(r, b)


@pytest.mark.parametrize("r", range(2, 7))
def test_ls_above_power_bound(r):
    for s in range(max(r - 1, 2), 13):
        lo = (s - 1) / (2 * s)
        for g in np.linspace(lo, 0.5, 60, endpoint=False)[1:]:
            ls, cb = ls_bound(r, g), power_lower_bound(r, s, g)
            if r == 2:
                # both sides reduce to gamma
                assert ls == pytest.approx(cb, rel=1e-12)
            else:
                assert ls > cb

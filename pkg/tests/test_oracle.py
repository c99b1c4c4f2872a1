import math

import pytest

from cliquedensity import bounds
from cliquedensity.errors import DomainError, LimitError
from cliquedensity.extremal import SimpleGraph, count_cliques
from cliquedensity.oracle import min_cliques, sweep


@pytest.mark.parametrize("method", ["pruned", "full"])
def test_five_seven(method):
    res = min_cliques(5, 7, 3, method=method, workers=1)
    assert res.minimum == 2
    assert res.witness.m == 7 and count_cliques(res.witness, 3) == 2
    assert res.minimum >= float(bounds.clique_bound(3, 7 / 25)) * 125


def test_small_cells():
    assert min_cliques(4, 6, 3).minimum == 4
    assert min_cliques(5, 6, 3).minimum == 0


def test_witness_is_lexicographically_first():
    a = min_cliques(5, 7, 3, method="pruned")
    b = min_cliques(5, 7, 3, method="full", workers=1)
    assert a.witness == b.witness
    assert sorted(a.witness.edges) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]


def test_limits():
    with pytest.raises(LimitError):
        min_cliques(9, 10, 3)
    with pytest.raises(DomainError):
        min_cliques(5, 11, 3)
    with pytest.raises(DomainError):
        min_cliques(4, 3, 5)
    with pytest.raises(LimitError):
        sweep(8, 3)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_paths_agree(n, r):
    if r > n:
        return
    a = [row.minimum for row in sweep(n, r, method="pruned")]
    b = [row.minimum for row in sweep(n, r, method="full", workers=1)]
    assert a == b


def test_complete_graph_forced():
    for n in range(3, 8):
        for r in range(3, min(n, 4) + 1):
            assert min_cliques(n, math.comb(n, 2), r).minimum == math.comb(n, r)


def test_sweep_five_three():
    rows = sweep(5, 3, workers=1)
    assert len(rows) == 11
    assert rows[7].minimum == 2 and rows[7].bound == pytest.approx(1.8148148, abs=1e-6)
    assert all(row.slack >= 0 for row in rows)


def test_sweep_four_three_cycle_row():
    row = sweep(4, 3, workers=1)[4]
    assert row.minimum == 0 and row.bound == 0


@pytest.mark.parametrize("n,r", [(5, 3), (6, 3), (7, 3), (6, 4), (7, 4)])
def test_sweep_respects_bound_and_is_monotone(n, r):
    # F_r depends on m only, so this covers every simple graph of order n
    rows = sweep(n, r, workers=1)
    assert all(row.slack >= -1e-9 for row in rows)
    mins = [row.minimum for row in rows]
    assert mins == sorted(mins)

import random
from fractions import Fraction as F

import pytest

from gvp.instances import GvpError, Instance, evaluate_revenue
from gvp.lowdegree import (
    euler_split,
    solve_cycle,
    solve_degree2,
    solve_degree4,
    solve_path,
)
from gvp.oracle import fractional_opt


def test_path_examples():
    assert solve_path(Instance(3, [(0, 1, 1), (1, 2, 1)])).revenue == 2
    assert solve_path(Instance(4, [(0, 1, 3), (1, 2, 1), (2, 3, 3)])).revenue == 7
    assert solve_path(Instance(2, [(0, 1, F(9, 4))])).revenue == F(9, 4)


def test_path_with_dead_edge():
    # middle budget 0 forces a split; ends are extracted independently
    inst = Instance(4, [(0, 1, 2), (1, 2, 0), (2, 3, 5)])
    sol = solve_path(inst)
    assert sol.revenue == 7
    assert evaluate_revenue(inst, sol.prices) == 7


def test_path_validation():
    with pytest.raises(GvpError):
        solve_path(Instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
    with pytest.raises(GvpError):
        solve_path(Instance(4, [(0, 1, 1), (2, 3, 1)]))
    with pytest.raises(GvpError):
        solve_path(Instance(2, [(0, 1, 1), (0, 1, 2)]))


def test_path_unordered_labels():
    # path 2-0-1 (vertex ids out of order along the path)
    inst = Instance(3, [(2, 0, 4), (0, 1, 2)])
    assert solve_path(inst).revenue == fractional_opt(inst)


def test_cycle_examples():
    tri = Instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert solve_cycle(tri).revenue == 3
    c4 = Instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    assert solve_cycle(c4).revenue == 4
    mixed = Instance(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])
    assert solve_cycle(mixed).revenue == fractional_opt(mixed) == 4


def test_two_cycle_of_parallel_edges():
    pair = Instance(2, [(0, 1, 1), (0, 1, 3)])
    assert solve_cycle(pair).revenue == 3
    assert solve_degree2(pair).revenue == 3


def test_degree2_components_sum():
    left = Instance(3, [(0, 1, 1), (1, 2, 1)])
    tri = Instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    both = Instance(6, [(0, 1, 1), (1, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)])
    assert (
        solve_degree2(both).revenue
        == solve_path(left).revenue + solve_cycle(tri).revenue
    )
    assert solve_degree2(Instance(4, [])).revenue == 0


def test_degree2_rejects_high_degree():
    star = Instance(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    with pytest.raises(GvpError):
        solve_degree2(star)


def test_degree2_matches_fractional_oracle():
    rng = random.Random(4)
    for _ in range(15):
        n = rng.randint(2, 7)
        budgets = [F(rng.randint(0, 10), rng.choice([1, 2])) for _ in range(n)]
        path = Instance(n, [(i, i + 1, budgets[i]) for i in range(n - 1)])
        assert solve_degree2(path).revenue == fractional_opt(path)
        if n >= 3:
            cyc = Instance(n, [(i, (i + 1) % n, budgets[i]) for i in range(n)])
            assert solve_degree2(cyc).revenue == fractional_opt(cyc)


def test_euler_split_partitions():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(2, 8)
        edges = []
        deg = [0] * n
        for _ in range(rng.randint(1, 2 * n)):
            u, v = rng.sample(range(n), 2)
            if deg[u] < 4 and deg[v] < 4:
                edges.append((u, v, 1))
                deg[u] += 1
                deg[v] += 1
        inst = Instance(n, edges)
        e1, e2 = euler_split(inst)
        assert sorted(e1 + e2) == list(range(inst.m))
        for part in (e1, e2):
            pdeg = [0] * n
            for i in part:
                u, v, _ = inst.edges[i]
                pdeg[u] += 1
                pdeg[v] += 1
            assert max(pdeg, default=0) <= 2


def test_degree4_examples():
    k4 = Instance(4, [(a, b, 1) for a in range(4) for b in range(a + 1, 4)])
    sol = solve_degree4(k4)
    assert 2 * sol.revenue >= fractional_opt(k4)

    # degree <= 2 input: one side receives every edge, so the result is exact
    path = Instance(4, [(0, 1, 3), (1, 2, 1), (2, 3, 3)])
    assert solve_degree4(path).revenue == 7

    apex = Instance(5, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1), (2, 4, 1)])
    assert 2 * solve_degree4(apex).revenue >= fractional_opt(apex)


def test_degree4_rejects_degree5():
    star5 = Instance(6, [(0, i, 1) for i in range(1, 6)])
    with pytest.raises(GvpError):
        solve_degree4(star5)

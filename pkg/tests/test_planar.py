from fractions import Fraction as F

import pytest

from gvp.decomposition import build_decomposition, BuildConfig
from gvp.generators import gen_grid, gen_random_tree
from gvp.instances import GvpError, Instance
from gvp.oracle import brute_force_opt
from gvp.planar import (
    baker_partition,
    expected_reduction_opt,
    min_vertex_cover_size,
    ptas_planar,
    residual_instances,
    vc_to_gvp,
)


def test_partition_examples():
    path6 = Instance(6, [(i, i + 1, 1) for i in range(5)])
    parts = baker_partition(path6, 3).parts
    assert [sorted(p) for p in parts] == [[0, 3], [1, 4], [2, 5]]

    single = baker_partition(Instance(1, []), 4)
    assert [sorted(p) for p in single.parts] == [[0], [], [], []]

    grid = gen_grid(3, 3, budget=1)
    parts = baker_partition(grid, 3).parts
    # BFS from corner 0: depth is the Manhattan distance
    depth = {0: 0, 1: 1, 3: 1, 2: 2, 4: 2, 6: 2, 5: 3, 7: 3, 8: 4}
    for v, d in depth.items():
        assert v in parts[d % 3]


def test_partition_requires_k3():
    with pytest.raises(GvpError):
        baker_partition(Instance(2, [(0, 1, 1)]), 2)


def test_residuals_are_subgraphs():
    grid = gen_grid(3, 3, budget=1)
    partition = baker_partition(grid, 3)
    full = {(u, v) for u, v, _ in grid.edges}
    for part, sub in zip(partition.parts, residual_instances(grid, partition)):
        assert {(u, v) for u, v, _ in sub.edges} <= full
        for u, v, _ in sub.edges:
            assert u not in part and v not in part


def test_residuals_have_small_width():
    grid = gen_grid(3, 4, budget=1)
    for k in (3, 4):
        partition = baker_partition(grid, k)
        for sub in residual_instances(grid, partition):
            td = build_decomposition(
                sub, 3 * (k - 1), BuildConfig(max_width_cap=3 * (k - 1))
            )
            assert td.width <= 3 * (k - 1)


def test_ptas_on_trees_and_edges():
    tree = gen_random_tree(6, seed=3, budget_max=6)
    oracle = brute_force_opt(tree, 6).revenue
    sol = ptas_planar(tree, F(1, 2))
    assert sol.revenue * F(3, 2) >= oracle
    assert ptas_planar(Instance(2, [(0, 1, 9)]), F(1, 3)).revenue == 9
    assert ptas_planar(Instance(3, []), F(1, 3)).revenue == 0


def test_ptas_grid_bound():
    grid = gen_grid(3, 3, budget=1)
    oracle = brute_force_opt(grid, 1).revenue
    sol = ptas_planar(grid, F(1, 3))
    assert sol.revenue >= F(3, 5) * oracle


def test_vc_reduction_structure():
    k2 = Instance(2, [(0, 1, 1)])
    reduced = vc_to_gvp(k2)
    assert reduced.n == 4
    budgets = sorted(set(b for _, _, b in reduced.edges))
    assert budgets == [1, 4, 8]
    assert brute_force_opt(reduced, 8).revenue == expected_reduction_opt(k2) == 9


def test_vc_reduction_k3():
    k3 = Instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert min_vertex_cover_size(k3) == 2
    assert expected_reduction_opt(k3) == 55
    assert brute_force_opt(vc_to_gvp(k3), 18).revenue == 55


def test_vc_reduction_edgeless():
    e3 = Instance(3, [])
    assert expected_reduction_opt(e3) == 3
    assert brute_force_opt(vc_to_gvp(e3), 1).revenue == 3


def test_vc_reduction_rejects_multigraph():
    with pytest.raises(GvpError):
        vc_to_gvp(Instance(2, [(0, 1, 1), (1, 0, 1)]))

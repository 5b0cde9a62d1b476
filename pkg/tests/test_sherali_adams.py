from fractions import Fraction as F
from itertools import combinations, product

import pytest

from gvp.decomposition import TreeDecomposition, build_decomposition
from gvp.instances import GvpError, Instance
from gvp.lp import LPSolution, solve_lp
from gvp.oracle import brute_force_opt
from gvp.sherali_adams import (
    AssignmentKey,
    build_base_lp,
    build_lp_r,
    check_model_feasible,
    gap_report,
    indicator_assignment,
    mix_assignments,
    model_objective,
    sa_round,
    sa_round_deterministic,
    solve_lp_r,
)


def triangle():
    return Instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])


def test_variable_counts():
    edge = Instance(2, [(0, 1, 1)])
    model = build_lp_r(edge, 2, 1)
    assert len(model.keys) == 9
    lonely = build_lp_r(Instance(1, []), 2, 1)
    assert len(lonely.keys) == 3
    assert solve_lp_r(lonely).value == 0


def test_single_edge_value():
    model = build_lp_r(Instance(2, [(0, 1, 2)]), 2, 2)
    assert solve_lp_r(model).value == 2


def test_size_cap():
    with pytest.raises(GvpError, match="cap"):
        build_lp_r(triangle(), 3, 1, variable_cap=10)


def test_marginal_consistency_of_solutions():
    # the emitted single-extension equalities imply the full family
    inst = triangle()
    model = build_lp_r(inst, 3, 1)
    solution = solve_lp_r(model)
    y = solution.assignment
    prices = range(2)
    for r_small in range(3):
        for small in combinations(range(3), r_small):
            for big_extra in combinations([v for v in range(3) if v not in small], 2 - r_small if r_small else 2):
                big = tuple(sorted(small + big_extra))
                for alpha in product(prices, repeat=len(small)):
                    lhs = F(0)
                    for beta in product(prices, repeat=len(big)):
                        if all(
                            beta[big.index(v)] == alpha[small.index(v)] for v in small
                        ):
                            lhs += y[model.index[AssignmentKey(big, beta)]]
                    assert lhs == y[model.index[AssignmentKey(small, alpha)]]


def test_indicator_and_mix_are_feasible():
    inst = triangle()
    model = build_lp_r(inst, 3, 1)
    a = indicator_assignment(model, [1, 0, 0])
    b = indicator_assignment(model, [0, 1, 0])
    assert check_model_feasible(model, a)
    assert model_objective(model, a) == 2
    mixed = mix_assignments([a, b], [F(1, 2), F(1, 2)])
    assert check_model_feasible(model, mixed)
    assert model_objective(model, mixed) == 2


def test_gap_one_at_width_plus_one():
    inst = triangle()
    rows = gap_report(inst, [2, 3], 1)
    assert rows[1].gap == 1
    assert rows[0].gap >= rows[1].gap  # nonincreasing in r
    assert all(row.lp_value >= row.integral_opt for row in rows)


def test_rounding_attains_lp_value():
    inst = triangle()
    model = build_lp_r(inst, 3, 1)
    solution = solve_lp_r(model)
    td = build_decomposition(inst, 2)
    det = sa_round_deterministic(inst, td, model, solution)
    assert det.revenue == solution.value
    for seed in range(20):
        assert sa_round(inst, td, model, solution, seed).revenue == solution.value


def test_rounding_star_at_level_two():
    star = Instance(4, [(0, 1, 1), (0, 2, 2), (0, 3, 3)])
    model = build_lp_r(star, 2, 3)
    solution = solve_lp_r(model)
    assert solution.value == 6  # width-1 instance: level 2 already exact
    td = build_decomposition(star, 1)
    assert sa_round_deterministic(star, td, model, solution).revenue == 6


def test_rounding_edgeless_instance():
    inst = Instance(3, [])
    model = build_lp_r(inst, 2, 1)
    solution = solve_lp_r(model)
    td = build_decomposition(inst, 1)
    for seed in range(3):
        assert sa_round(inst, td, model, solution, seed).revenue == 0


def test_rounding_requires_enough_levels():
    inst = triangle()
    model = build_lp_r(inst, 2, 1)
    solution = solve_lp_r(model)
    td = build_decomposition(inst, 2)  # width 2 needs r >= 3
    with pytest.raises(GvpError, match="width"):
        sa_round_deterministic(inst, td, model, solution)


def test_rounding_seed_determinism():
    inst = Instance(3, [(0, 1, 1), (1, 2, 1)])
    model = build_lp_r(inst, 2, 1)
    solution = solve_lp_r(model)
    td = build_decomposition(inst, 1)
    assert sa_round(inst, td, model, solution, 5) == sa_round(inst, td, model, solution, 5)


def test_round_follows_given_distribution():
    # feed a 50/50 mixture of two optima; both must appear across seeds
    inst = Instance(3, [(0, 1, 1), (1, 2, 1)])
    model = build_lp_r(inst, 2, 1)
    a = indicator_assignment(model, [0, 1, 0])
    b = indicator_assignment(model, [1, 0, 1])
    mixed = mix_assignments([a, b], [F(1, 2), F(1, 2)])
    solution = LPSolution(status="optimal", value=F(2), assignment=mixed)
    td = build_decomposition(inst, 1)
    seen = {sa_round(inst, td, model, solution, seed).prices.prices for seed in range(40)}
    assert seen == {(F(0), F(1), F(0)), (F(1), F(0), F(1))}


def test_rounding_distribution_three_levels():
    # asymmetric mixture through a 3-level, width-2 decomposition: every bag
    # marginal must still match its y-distribution
    import math
    from itertools import product

    fan = Instance(5, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1), (2, 4, 1)])
    td = TreeDecomposition.from_bags(fan, [[0, 1, 2], [2, 3], [3, 4, 2]], [None, 0, 1])
    model = build_lp_r(fan, 3, 1)
    a = indicator_assignment(model, [1, 0, 1, 0, 1])
    b = indicator_assignment(model, [0, 1, 0, 1, 0])
    mixed = mix_assignments([a, b], [F(1, 3), F(2, 3)])
    assert check_model_feasible(model, mixed)
    solution = LPSolution(status="optimal", value=model_objective(model, mixed), assignment=mixed)
    runs = 1200
    counts = {}
    for seed in range(runs):
        out = sa_round(fan, td, model, solution, seed)
        for node, bag in enumerate(td.bags):
            key = (node, tuple(int(out.prices[v]) for v in sorted(bag)))
            counts[key] = counts.get(key, 0) + 1
    for node, bag in enumerate(td.bags):
        bag = sorted(bag)
        for alpha in product(range(2), repeat=len(bag)):
            y = float(mixed[model.column(dict(zip(bag, alpha)))])
            freq = counts.get((node, tuple(alpha)), 0) / runs
            se = math.sqrt(y * (1 - y) / runs)
            assert abs(freq - y) <= 3 * se + 1e-12, (node, alpha, freq, y)


def test_base_lp_bounds():
    inst = triangle()
    base = solve_lp(build_base_lp(inst, 1).program)
    lp2 = solve_lp_r(build_lp_r(inst, 2, 1)).value
    oracle = brute_force_opt(inst, 1).revenue
    assert base.value >= lp2 >= oracle
    edge = Instance(2, [(0, 1, 1)])
    assert solve_lp(build_base_lp(edge, 1).program).value >= 1
    empty = Instance(2, [])
    assert solve_lp(build_base_lp(empty, 1).program).value == 0


def test_lp_r_nonincreasing_in_r():
    inst = Instance(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])
    v2 = solve_lp_r(build_lp_r(inst, 2, 2)).value
    v3 = solve_lp_r(build_lp_r(inst, 3, 2)).value
    assert v2 >= v3
    assert v3 >= brute_force_opt(inst, 2).revenue

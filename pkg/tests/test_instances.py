import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gvp.instances import (
    GvpError,
    HyperInstance,
    Instance,
    PriceAssignment,
    Solution,
    evaluate_revenue,
    evaluate_revenue_smp,
    instance_from_json,
    instance_to_json,
    lift_prices,
    round_budgets,
    to_fraction,
)


def test_revenue_examples():
    inst = Instance(2, [(0, 1, 5)])
    assert evaluate_revenue(inst, PriceAssignment([2, 3])) == 5
    assert evaluate_revenue(inst, PriceAssignment([3, 3])) == 0
    tri = Instance(3, [(0, 1, 3), (1, 2, 3), (0, 2, 3)])
    assert evaluate_revenue(tri, PriceAssignment([1, 2, 1])) == 8


def test_revenue_smp_examples():
    h = HyperInstance(3, [([0, 1, 2], 6)])
    assert evaluate_revenue_smp(h, PriceAssignment([1, 2, 3])) == 6
    assert evaluate_revenue_smp(h, PriceAssignment([3, 3, 3])) == 0
    h2 = HyperInstance(3, [([0, 1], 2), ([0, 1, 2], 2)])
    assert evaluate_revenue_smp(h2, PriceAssignment([1, 1, 0])) == 4


def test_invalid_inputs():
    with pytest.raises(GvpError):
        Instance(2, [(0, 0, 1)])  # self-loop
    with pytest.raises(GvpError):
        Instance(2, [(0, 3, 1)])  # out of range
    with pytest.raises(GvpError):
        Instance(2, [(0, 1, -1)])  # negative budget
    with pytest.raises(GvpError):
        PriceAssignment([-1])
    with pytest.raises(GvpError):
        to_fraction(0.5)  # floats are rejected
    with pytest.raises(GvpError):
        evaluate_revenue(Instance(2, [(0, 1, 1)]), PriceAssignment([1]))
    with pytest.raises(GvpError):
        HyperInstance(2, [([], 1)])


def test_parallel_edges_kept_distinct():
    inst = Instance(2, [(0, 1, 4), (0, 1, 8)])
    assert inst.m == 2
    assert evaluate_revenue(inst, PriceAssignment([4, 0])) == 8


def test_round_budgets_examples():
    inst = Instance(4, [(0, 1, 10), (1, 2, 20), (2, 3, 30)])
    result = round_budgets(inst, F(1, 2))
    assert result.scale == 5
    assert [b for _, _, b in result.rounded.edges] == [2, 4, 6]
    assert result.price_cap == 6

    one = round_budgets(Instance(2, [(0, 1, 1)]), F(1))
    assert one.scale == 1 and one.price_cap == 1
    assert [b for _, _, b in one.rounded.edges] == [1]

    seven = round_budgets(Instance(2, [(0, 1, 7)]), F(1, 2))
    assert seven.scale == F(7, 2)
    assert [b for _, _, b in seven.rounded.edges] == [2]
    assert seven.price_cap == 2


def test_round_budgets_degenerate():
    zero = round_budgets(Instance(2, [(0, 1, 0)]), F(1, 2))
    assert zero.degenerate and zero.scale == 1
    assert zero.rounded.edges == Instance(2, [(0, 1, 0)]).edges


def test_lift_prices_examples():
    sol = Solution(PriceAssignment([2, 0]), F(0), "x")
    assert lift_prices(sol, F(5)).prices == (F(10), F(0))
    sol3 = Solution(PriceAssignment([2, 4, 6]), F(0), "x")
    assert lift_prices(sol3, F(5)).prices == (F(10), F(20), F(30))
    zeros = Solution(PriceAssignment([0, 0, 0]), F(0), "x")
    assert lift_prices(zeros, F(17, 3)).prices == (0, 0, 0)


budgets_strategy = st.lists(
    st.fractions(min_value=0, max_value=50, max_denominator=8), min_size=1, max_size=8
)


@settings(max_examples=60, deadline=None)
@given(budgets_strategy, st.fractions(min_value=F(1, 10), max_value=1, max_denominator=10))
def test_rounding_cap_bound(budgets, eps):
    n = len(budgets) + 1
    inst = Instance(n, [(i, i + 1, b) for i, b in enumerate(budgets)])
    result = round_budgets(inst, eps)
    if not result.degenerate:
        assert result.price_cap <= math.ceil(2 * inst.m / eps)
        for (_, _, orig), (_, _, new) in zip(inst.edges, result.rounded.edges):
            assert new == orig // result.scale


@settings(max_examples=40, deadline=None)
@given(budgets_strategy, st.fractions(min_value=F(1, 4), max_value=1, max_denominator=4))
def test_lift_feasible_per_edge(budgets, eps):
    # floor(x/M)*M <= x edge by edge: if a price vector is within a rounded
    # budget, its lift is within the original budget.
    n = len(budgets) + 1
    inst = Instance(n, [(i, i + 1, b) for i, b in enumerate(budgets)])
    result = round_budgets(inst, eps)
    if result.degenerate:
        return
    for (u, v, orig), (_, _, new) in zip(inst.edges, result.rounded.edges):
        assert result.scale * new <= orig


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.integers(min_value=0, max_value=9), min_size=2, max_size=6),
    st.integers(min_value=0, max_value=5),
    st.integers(min_value=1, max_value=5),
)
def test_revenue_monotone_in_budget(prices, edge_budget, bump):
    # raising any budget never lowers revenue at fixed prices
    n = len(prices)
    inst = Instance(n, [(0, 1, edge_budget), (n - 2, n - 1, 3)])
    bigger = Instance(n, [(0, 1, edge_budget + bump), (n - 2, n - 1, 3)])
    p = PriceAssignment(prices)
    assert evaluate_revenue(bigger, p) >= evaluate_revenue(inst, p)


def test_rounding_round_trip_guarantee():
    # at desk scale: scale * OPT(rounded) >= (1 - 2 eps) * OPT(original)
    import random

    from gvp.oracle import brute_force_opt

    rng = random.Random(77)
    for _ in range(12):
        n = rng.randint(2, 5)
        edges = []
        for _ in range(rng.randint(1, 6)):
            u, v = rng.sample(range(n), 2)
            edges.append((u, v, rng.randint(1, 8)))
        inst = Instance(n, edges)
        eps = F(rng.randint(1, 4), 4)
        result = round_budgets(inst, eps)
        original_opt = brute_force_opt(inst, 8).revenue
        rounded_opt = brute_force_opt(
            result.rounded, max(result.price_cap, 1)
        ).revenue
        assert result.scale * rounded_opt >= (1 - 2 * eps) * original_opt


def test_json_round_trip():
    inst = Instance(3, [(0, 1, F(7, 2)), (1, 2, 4)])
    text = instance_to_json(inst)
    assert '"7/2"' in text
    back = instance_from_json(text)
    assert back == inst
    h = HyperInstance(3, [([2, 0], F(1, 3))])
    from gvp.instances import hyper_to_json

    assert instance_from_json(hyper_to_json(h)) == h


def test_json_rejects_floats():
    with pytest.raises(GvpError):
        instance_from_json('{"n": 2, "edges": [[0, 1, 1.5]]}')

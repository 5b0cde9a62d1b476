import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from gvp.instances import GvpError, Instance
from gvp.lp import EQ, GE, LE, LPProgram, lp_opt, solve_lp


def test_trivial_examples():
    assert solve_lp(LPProgram([1], [([1], LE, 3)])).value == 3
    sol = solve_lp(LPProgram([1, 1], [([1, 1], LE, 1)]))
    assert sol.value == 1


def test_lp_opt_examples():
    assert lp_opt(Instance(2, [(0, 1, F(9, 4))])).value == F(9, 4)
    tri = Instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    sol = lp_opt(tri)
    assert sol.value == 3
    assert sol.assignment == (F(1, 2), F(1, 2), F(1, 2))
    path = Instance(4, [(0, 1, 3), (1, 2, 1), (2, 3, 3)])
    sol = lp_opt(path)
    assert sol.value == 7
    # assignment keeps every edge within budget
    for u, v, b in path.edges:
        assert sol.assignment[u] + sol.assignment[v] <= b


def test_lp_opt_path11():
    sol = lp_opt(Instance(3, [(0, 1, 1), (1, 2, 1)]))
    assert sol.value == 2


def test_statuses():
    assert solve_lp(LPProgram([1], [([1], GE, 2), ([1], LE, 1)])).status == "infeasible"
    assert solve_lp(LPProgram([1], [])).status == "unbounded"
    assert solve_lp(LPProgram([0, 0], [([1, 1], EQ, 1)])).status == "optimal"


def test_equality_and_bounds():
    sol = solve_lp(LPProgram([2, 3], [([1, 1], EQ, 1)], upper=[F(1, 2), None]))
    assert sol.value == 3
    sol = solve_lp(LPProgram([5], [], upper=[F(2, 7)]))
    assert sol.value == F(10, 7)
    with pytest.raises(GvpError):
        LPProgram([1], [], lower=[-1])


def test_dual_certificate_reported():
    sol = solve_lp(LPProgram([1, 2], [([1, 0], LE, 4), ([0, 1], LE, 5), ([1, 1], GE, 1)]))
    assert sol.status == "optimal"
    assert sol.dual_value == sol.value == 14
    assert len(sol.dual) == 3


def test_exact_resubstitution():
    # exactness: the assignment reproduces the value with zero error
    inst = Instance(5, [(0, 1, F(7, 3)), (1, 2, F(1, 6)), (2, 3, 5), (3, 4, F(11, 2))])
    sol = lp_opt(inst)
    obj = [F(0)] * 5
    for u, v, _ in inst.edges:
        obj[u] += 1
        obj[v] += 1
    assert sum(c * x for c, x in zip(obj, sol.assignment)) == sol.value


def test_lp_opt_dominates_all_pay_integral_enumeration():
    # filtered enumeration: over integer vectors where every edge pays,
    # revenue never beats the all-pay LP optimum
    from itertools import product

    rng = random.Random(6)
    for _ in range(10):
        n = rng.randint(2, 4)
        edges = []
        for _ in range(rng.randint(1, 4)):
            u, v = rng.sample(range(n), 2)
            edges.append((u, v, rng.randint(0, 4)))
        inst = Instance(n, edges)
        lp_value = lp_opt(inst).value
        best = F(0)
        for prices in product(range(5), repeat=n):
            if all(prices[u] + prices[v] <= b for u, v, b in inst.edges):
                best = max(best, F(sum(prices[u] + prices[v] for u, v, _ in inst.edges)))
        assert lp_value >= best


def test_random_cross_check_against_scipy():
    rng = random.Random(3)
    for trial in range(25):
        nv = rng.randint(1, 4)
        nr = rng.randint(1, 4)
        c = [rng.randint(-3, 5) for _ in range(nv)]
        rows = []
        for _ in range(nr):
            coeffs = [rng.randint(-3, 4) for _ in range(nv)]
            rel = rng.choice([LE, LE, GE, EQ])
            rhs = rng.randint(0, 8)
            rows.append((coeffs, rel, rhs))
        upper = [rng.choice([None, rng.randint(1, 6)]) for _ in range(nv)]
        ours = solve_lp(LPProgram(c, rows, upper=upper))

        a_ub, b_ub, a_eq, b_eq = [], [], [], []
        for coeffs, rel, rhs in rows:
            if rel == LE:
                a_ub.append(coeffs)
                b_ub.append(rhs)
            elif rel == GE:
                a_ub.append([-x for x in coeffs])
                b_ub.append(-rhs)
            else:
                a_eq.append(coeffs)
                b_eq.append(rhs)
        ref = linprog(
            [-x for x in c],
            A_ub=np.array(a_ub) if a_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=[(0, u) for u in upper],
            method="highs",
        )
        if ours.status == "optimal":
            assert ref.status == 0, trial
            assert abs(float(ours.value) + ref.fun) < 1e-7, trial
        elif ours.status == "infeasible":
            assert ref.status == 2, trial
        else:
            assert ref.status == 3, trial

"""Brute-force ground truth for all approximation tests.

`brute_force_opt` enumerates every integral price vector up to a cap and is
deliberately dumb: no search tricks beyond dropping prices that exceed every
budget a vertex appears in (which can never help and never changes the
lexicographic tie-break).  `fractional_opt` is the real-price counterpart:
it enumerates which consumers pay and solves the all-pay LP for each subset.
"""

from __future__ import annotations

import os
from fractions import Fraction
from itertools import combinations

import numpy as np

from gvp.instances import (
    GvpError,
    HyperInstance,
    Instance,
    PriceAssignment,
    Solution,
    evaluate_revenue,
    evaluate_revenue_smp,
)
from gvp.lp import lp_opt

DEFAULT_LIMIT = 10**8
_CHUNK = 1 << 18


class EnumerationLimitExceeded(GvpError):
    """The instance is too large for exhaustive enumeration."""


def _limit(override):
    if override is not None:
        return int(override)
    return int(os.environ.get("GVP_ORACLE_LIMIT", DEFAULT_LIMIT))


def _integral_budgets(budgets, price_cap):
    out = []
    for b in budgets:
        if b.denominator != 1:
            raise GvpError(f"oracle requires integral budgets, got {b}")
        if b > price_cap:
            raise GvpError(f"budget {b} exceeds price cap {price_cap}")
        out.append(int(b))
    return out


def _check_states(n: int, price_cap: int, limit: int) -> None:
    if price_cap < 1:
        raise GvpError(f"price cap must be positive, got {price_cap}")
    if (price_cap + 1) ** n > limit:
        raise EnumerationLimitExceeded(
            f"(cap+1)^n = {(price_cap + 1) ** n} exceeds enumeration limit {limit}"
        )


def _enumerate_best(domains, revenue_of_chunk):
    """Lexicographic scan over the mixed-radix grid given by domains.

    revenue_of_chunk maps an int64 matrix (states x n) to a revenue vector.
    Returns (best revenue, first/lex-smallest maximizing vector).
    """
    n = len(domains)
    sizes = [d + 1 for d in domains]
    total = 1
    for s in sizes:
        total *= s
    radix = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        radix[j] = radix[j + 1] * sizes[j + 1]
    best_val = None
    best_vec = None
    start = 0
    while start < total:
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        prices = (idx[:, None] // radix[None, :]) % np.asarray(sizes, dtype=np.int64)
        rev = revenue_of_chunk(prices)
        pos = int(np.argmax(rev))
        val = int(rev[pos])
        if best_val is None or val > best_val:
            best_val = val
            best_vec = [int(x) for x in prices[pos]]
        start = stop
    if best_val is None:  # zero vertices
        return 0, []
    return best_val, best_vec


def brute_force_opt(instance: Instance, price_cap: int, limit: int | None = None) -> Solution:
    """Exact integral optimum over {0..price_cap}^n by exhaustive enumeration.

    Ties are broken by the lexicographically smallest price vector, so the
    output is deterministic and directly comparable across algorithms.
    """
    lim = _limit(limit)
    _check_states(instance.n, price_cap, lim)
    budgets = _integral_budgets([b for _, _, b in instance.edges], price_cap)

    max_useful = [0] * instance.n
    for (u, v, _), b in zip(instance.edges, budgets):
        max_useful[u] = max(max_useful[u], b)
        max_useful[v] = max(max_useful[v], b)
    domains = [min(price_cap, mb) for mb in max_useful]

    us = np.array([u for u, _, _ in instance.edges], dtype=np.int64)
    vs = np.array([v for _, v, _ in instance.edges], dtype=np.int64)
    bs = np.array(budgets, dtype=np.int64)

    def revenue(prices):
        if len(us) == 0:
            return np.zeros(prices.shape[0], dtype=np.int64)
        sums = prices[:, us] + prices[:, vs]
        return np.where(sums <= bs[None, :], sums, 0).sum(axis=1)

    val, vec = _enumerate_best(domains, revenue)
    prices = PriceAssignment(vec)
    rev = evaluate_revenue(instance, prices)
    assert rev == val
    return Solution(prices=prices, revenue=rev, algorithm="oracle")


def brute_force_opt_smp(hyper: HyperInstance, price_cap: int, limit: int | None = None) -> Solution:
    """Exhaustive integral optimum for single-minded (hypergraph) pricing."""
    lim = _limit(limit)
    _check_states(hyper.n, price_cap, lim)
    budgets = _integral_budgets([b for _, b in hyper.hyperedges], price_cap)

    max_useful = [0] * hyper.n
    for (vertices, _), b in zip(hyper.hyperedges, budgets):
        for v in vertices:
            max_useful[v] = max(max_useful[v], b)
    domains = [min(price_cap, mb) for mb in max_useful]

    members = [np.array(sorted(s), dtype=np.int64) for s, _ in hyper.hyperedges]
    bs = np.array(budgets, dtype=np.int64)

    def revenue(prices):
        total = np.zeros(prices.shape[0], dtype=np.int64)
        for mem, b in zip(members, bs):
            sums = prices[:, mem].sum(axis=1)
            total += np.where(sums <= b, sums, 0)
        return total

    val, vec = _enumerate_best(domains, revenue)
    prices = PriceAssignment(vec)
    rev = evaluate_revenue_smp(hyper, prices)
    assert rev == val
    return Solution(prices=prices, revenue=rev, algorithm="oracle-smp")


def fractional_opt(instance: Instance) -> Fraction:
    """Optimal revenue over real-valued prices, via paying-subset enumeration.

    For every subset F of consumers, the best assignment under which exactly
    the consumers in F are required to stay affordable is the all-pay LP on F;
    the overall optimum is the maximum over subsets.  Exponential in the edge
    count, usable as an independent reference at desk scale only.
    """
    m = instance.m
    best = Fraction(0)
    edge_ids = list(range(m))
    for size in range(1, m + 1):
        for subset in combinations(edge_ids, size):
            sol = lp_opt(instance.subinstance(subset))
            assert sol.status == "optimal"
            if sol.value > best:
                best = sol.value
    return best

"""Constant-factor approximations driven by balanced bipartitions of color classes.

A proper k-coloring is split into two near-equal sides; edges inside a side
are written off, and the surviving bipartite instance is solved by the
price-one-side-zero rule.  The probability that a fixed edge survives a
uniformly random balanced bipartition has a closed form (k/(2(k-1)) for even
k, (k+1)/(2k) for odd), checked here against exhaustive counting.

Derandomization runs conditional expectation on the total budget of cut
edges: each edge's budget upper-bounds its contribution to any optimum, and
the completion counting is exact, so the realized cut budget never falls
below the unconditional mean.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from gvp.instances import (
    GvpError,
    Instance,
    PriceAssignment,
    Solution,
    evaluate_revenue,
)


@dataclass(frozen=True)
class Coloring:
    """A proper k-coloring: class_of[v] in 0..k-1 and no monochromatic edge."""

    k: int
    class_of: tuple[int, ...]

    def __init__(self, k: int, class_of):
        class_of = tuple(int(c) for c in class_of)
        if k < 1:
            raise GvpError(f"coloring needs k >= 1, got {k}")
        if any(not 0 <= c < k for c in class_of):
            raise GvpError("class ids must lie in 0..k-1")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "class_of", class_of)

    def check_proper(self, instance: Instance) -> None:
        if len(self.class_of) != instance.n:
            raise GvpError("coloring length does not match vertex count")
        for u, v, _ in instance.edges:
            if self.class_of[u] == self.class_of[v]:
                raise GvpError(f"edge ({u},{v}) is monochromatic in class {self.class_of[u]}")


def singleton_coloring(n: int) -> Coloring:
    return Coloring(n, range(n))


def cut_probability(k: int) -> Fraction:
    """Chance a fixed inter-class edge is cut by a random balanced bipartition."""
    if k < 2:
        raise GvpError(f"cut probability needs k >= 2, got {k}")
    if k % 2 == 0:
        return Fraction(k, 2 * (k - 1))
    return Fraction(k + 1, 2 * k)


def balanced_bipartitions(k: int):
    """All unordered balanced bipartitions, as the side containing class 0."""
    others = range(1, k)
    if k % 2 == 0:
        for rest in combinations(others, k // 2 - 1):
            yield frozenset((0,) + rest)
    else:
        # class 0 sits on either the small or the large side
        for size in (k // 2, k // 2 + 1):
            for rest in combinations(others, size - 1):
                yield frozenset((0,) + rest)


def exhaustive_cut_probability(k: int) -> Fraction:
    """Count-based reference for the closed form (classes 0 and 1 as the edge)."""
    if k < 2:
        raise GvpError(f"needs k >= 2, got {k}")
    total = 0
    cut = 0
    for side in balanced_bipartitions(k):
        total += 1
        if (0 in side) != (1 in side):
            cut += 1
    return Fraction(cut, total)


def _side_sizes(k: int) -> tuple[int, ...]:
    return (k // 2,) if k % 2 == 0 else (k // 2, k // 2 + 1)


def _completions(k: int, in_l: int, free: int) -> int:
    """Number of ways to finish a partial placement into a balanced bipartition."""
    total = 0
    for s in _side_sizes(k):
        x = s - in_l
        if 0 <= x <= free:
            total += comb(free, x)
    return total


def conditional_cut_probability(k: int, in_l: int, free: int, state: tuple) -> Fraction:
    """P(edge cut | partial placement) for an edge whose endpoint classes are
    in the given state: ("LL"/"RR"/"LR" when both placed), ("L", None) or
    ("R", None) with one free endpoint, or ("free",) with both free."""
    denom = _completions(k, in_l, free)
    if denom == 0:
        raise GvpError("partial placement cannot be completed")
    if state[0] in ("LL", "RR"):
        return Fraction(0)
    if state[0] == "LR":
        return Fraction(1)
    num = 0
    if state[0] == "L":  # placed endpoint in L, other endpoint free -> needs R
        for s in _side_sizes(k):
            x = s - in_l
            if 0 <= x <= free - 1:
                num += comb(free - 1, x)
    elif state[0] == "R":  # other endpoint must land in L
        for s in _side_sizes(k):
            x = s - in_l
            if 1 <= x <= free:
                num += comb(free - 1, x - 1)
    else:  # both endpoints free, on distinct classes
        for s in _side_sizes(k):
            x = s - in_l
            if 1 <= x <= free - 1:
                num += 2 * comb(free - 2, x - 1)
    return Fraction(num, denom)


def _expected_cut_budget(instance: Instance, coloring: Coloring, placed: dict[int, str]) -> Fraction:
    k = coloring.k
    in_l = sum(1 for side in placed.values() if side == "L")
    free = k - len(placed)
    total = Fraction(0)
    for u, v, budget in instance.edges:
        cu, cv = coloring.class_of[u], coloring.class_of[v]
        su, sv = placed.get(cu), placed.get(cv)
        if su is not None and sv is not None:
            state = ("LR",) if su != sv else (su + sv,)
        elif su is not None:
            state = (su, None)
        elif sv is not None:
            state = (sv, None)
        else:
            state = ("free",)
        total += budget * conditional_cut_probability(k, in_l, free, state)
    return total


def derandomized_balanced_sides(instance: Instance, coloring: Coloring) -> dict[int, str]:
    """Greedy conditional-expectation placement of classes into sides L/R.

    The potential is the expected total budget over cut edges; maximizing it
    at every step keeps the final cut budget at least cut_probability(k)
    times the total budget.
    """
    k = coloring.k
    placed: dict[int, str] = {0: "L"}
    for c in range(1, k):
        options = []
        for side in ("L", "R"):
            trial = dict(placed)
            trial[c] = side
            in_l = sum(1 for s in trial.values() if s == "L")
            if _completions(k, in_l, k - len(trial)) == 0:
                continue
            options.append((_expected_cut_budget(instance, coloring, trial), side))
        best = max(options, key=lambda t: (t[0], t[1] == "L"))
        placed[c] = best[1]
    return placed


def random_balanced_sides(k: int, seed: int) -> dict[int, str]:
    rng = random.Random(seed)
    order = list(range(k))
    rng.shuffle(order)
    left = set(order[: (k + 1) // 2])
    return {c: ("L" if c in left else "R") for c in range(k)}


def bipartite_2approx(instance: Instance, side_of) -> Solution:
    """Price one side zero, let each remaining vertex pick its best budget.

    side_of maps each vertex to "L" or "R"; every edge must cross.  With one
    side at zero, each vertex's optimal price is one of its incident budgets,
    chosen to maximize price times the number of consumers still affording
    it.  The better of the two zeroed sides collects at least half the
    bipartite optimum.
    """
    sides = [side_of[v] for v in range(instance.n)]
    if any(s not in ("L", "R") for s in sides):
        raise GvpError("side_of must map every vertex to 'L' or 'R'")
    for u, v, _ in instance.edges:
        if sides[u] == sides[v]:
            raise GvpError(f"edge ({u},{v}) does not cross the bipartition")

    candidates = []
    for zero_side in ("L", "R"):
        prices = [Fraction(0)] * instance.n
        incident: dict[int, list[Fraction]] = {}
        for u, v, budget in instance.edges:
            w = u if sides[u] != zero_side else v
            incident.setdefault(w, []).append(budget)
        for w, budgets in incident.items():
            best_price, best_gain = Fraction(0), Fraction(0)
            for p in sorted(set(budgets)):
                if p <= 0:
                    continue
                gain = p * sum(1 for b in budgets if b >= p)
                if gain > best_gain:
                    best_price, best_gain = p, gain
            prices[w] = best_price
        assignment = PriceAssignment(prices)
        candidates.append((evaluate_revenue(instance, assignment), assignment))
    revenue, assignment = max(candidates, key=lambda t: t[0])
    return Solution(prices=assignment, revenue=revenue, algorithm="bipartite2")


def kpartite_approx(
    instance: Instance,
    coloring: Coloring,
    mode: str = "derandomized",
    seed: int = 0,
) -> Solution:
    """Balanced-bipartition approximation on a properly colored instance.

    Ratio 4(k-1)/k for even k and 4k/(k+1) for odd k in expectation over
    bipartitions; the derandomized mode fixes a bipartition whose cut budget
    is at least the unconditional expectation.
    """
    coloring.check_proper(instance)
    if coloring.k < 2:
        if instance.m:
            raise GvpError("k=1 coloring cannot be proper on a nonempty edge set")
        return Solution(PriceAssignment([0] * instance.n), Fraction(0), "kpartite")
    if mode == "derandomized":
        placed = derandomized_balanced_sides(instance, coloring)
    elif mode == "randomized":
        placed = random_balanced_sides(coloring.k, seed)
    else:
        raise GvpError(f"unknown mode {mode!r}")
    side_of = [placed[coloring.class_of[v]] for v in range(instance.n)]
    cut_ids = [
        i for i, (u, v, _) in enumerate(instance.edges) if side_of[u] != side_of[v]
    ]
    sub = instance.subinstance(cut_ids)
    inner = bipartite_2approx(sub, side_of)
    revenue = evaluate_revenue(instance, inner.prices)
    return Solution(prices=inner.prices, revenue=revenue, algorithm="kpartite")


def general_graph_approx(instance: Instance, seed: int = 0) -> Solution:
    """Approximation for arbitrary graphs: every vertex is its own class."""
    if instance.n < 2 or instance.m == 0:
        return Solution(PriceAssignment([0] * instance.n), Fraction(0), "general")
    sol = kpartite_approx(
        instance, singleton_coloring(instance.n), mode="randomized", seed=seed
    )
    return Solution(prices=sol.prices, revenue=sol.revenue, algorithm="general")

"""Instance model, revenue evaluation and the budget-rounding reduction.

Instances are immutable after construction and every operation here is a pure
function, so everything is safe to share across threads.  Budgets and prices
are `fractions.Fraction`; deterministic algorithms iterate edges in input
order so results are bit-reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class GvpError(ValueError):
    """Base class for invalid instances, assignments or solver inputs."""


def to_fraction(value) -> Fraction:
    """Parse an exact rational from an int, Fraction, "p/q" or decimal string.

    Floats are rejected: they have usually been corrupted by binary rounding
    before they reach us, and every solver path needs exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise GvpError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise GvpError(f"cannot parse rational from {value!r}") from exc
    raise GvpError(f"budgets/prices must be ints or strings, got {type(value).__name__}")


def format_fraction(q: Fraction) -> str:
    """Canonical string form: "p/q", or just "p" when the denominator is 1."""
    return str(Fraction(q))


@dataclass(frozen=True)
class Instance:
    """A pricing problem: n vertices and weighted consumer edges.

    Vertices are 0..n-1.  Parallel edges are kept as distinct entries (the
    hardness reduction depends on them); self-loops are forbidden.
    """

    n: int
    edges: tuple[tuple[int, int, Fraction], ...]

    def __init__(self, n: int, edges: Iterable[Sequence]):
        if n < 0:
            raise GvpError(f"vertex count must be nonnegative, got {n}")
        parsed = []
        for e in edges:
            u, v, b = e
            u, v = int(u), int(v)
            budget = to_fraction(b)
            if u == v:
                raise GvpError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GvpError(f"edge ({u},{v}) out of range for n={n}")
            if budget < 0:
                raise GvpError(f"negative budget {budget} on edge ({u},{v})")
            parsed.append((u, v, budget))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(parsed))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_integral_budgets(self) -> bool:
        return all(b.denominator == 1 for _, _, b in self.edges)

    def adjacency(self) -> list[set[int]]:
        """Simple-graph adjacency (parallel edges collapse)."""
        adj = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def subinstance(self, edge_ids: Iterable[int]) -> "Instance":
        """Same vertex set, edges restricted to the given positions."""
        return Instance(self.n, [self.edges[i] for i in edge_ids])


@dataclass(frozen=True)
class HyperInstance:
    """Single-minded pricing input: consumers want whole vertex sets."""

    n: int
    hyperedges: tuple[tuple[frozenset[int], Fraction], ...]

    def __init__(self, n: int, hyperedges: Iterable[Sequence]):
        if n < 0:
            raise GvpError(f"vertex count must be nonnegative, got {n}")
        parsed = []
        for he in hyperedges:
            vertices, b = he
            s = frozenset(int(v) for v in vertices)
            budget = to_fraction(b)
            if not s:
                raise GvpError("empty hyperedge")
            if not all(0 <= v < n for v in s):
                raise GvpError(f"hyperedge {sorted(s)} out of range for n={n}")
            if budget < 0:
                raise GvpError(f"negative budget {budget} on hyperedge {sorted(s)}")
            parsed.append((s, budget))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "hyperedges", tuple(parsed))

    def has_integral_budgets(self) -> bool:
        return all(b.denominator == 1 for _, b in self.hyperedges)


@dataclass(frozen=True)
class PriceAssignment:
    """Nonnegative price per vertex; the decision variable."""

    prices: tuple[Fraction, ...]

    def __init__(self, prices: Iterable):
        parsed = tuple(to_fraction(p) for p in prices)
        for i, p in enumerate(parsed):
            if p < 0:
                raise GvpError(f"negative price {p} at vertex {i}")
        object.__setattr__(self, "prices", parsed)

    def __len__(self) -> int:
        return len(self.prices)

    def __getitem__(self, i: int) -> Fraction:
        return self.prices[i]


@dataclass(frozen=True)
class Solution:
    """A price assignment with its evaluated revenue and provenance."""

    prices: PriceAssignment
    revenue: Fraction
    algorithm: str


@dataclass(frozen=True)
class RoundingResult:
    """Outcome of reducing budgets to small integers.

    rounded carries floor(B_e/M) budgets; price_cap is the largest of them.
    degenerate marks all-zero-budget inputs, where M is fixed to 1.
    """

    rounded: Instance
    scale: Fraction
    price_cap: int
    degenerate: bool = field(default=False)


def _check_prices(n: int, prices: PriceAssignment) -> None:
    if len(prices) != n:
        raise GvpError(f"price vector has length {len(prices)}, instance has n={n}")


def evaluate_revenue(instance: Instance, prices: PriceAssignment) -> Fraction:
    """Total payment: each edge pays p(u)+p(v) iff that sum is within budget."""
    _check_prices(instance.n, prices)
    total = Fraction(0)
    for u, v, budget in instance.edges:
        s = prices[u] + prices[v]
        if s <= budget:
            total += s
    return total


def evaluate_revenue_smp(hyper: HyperInstance, prices: PriceAssignment) -> Fraction:
    """Hypergraph revenue: a consumer pays its set's total price iff affordable."""
    _check_prices(hyper.n, prices)
    total = Fraction(0)
    for vertices, budget in hyper.hyperedges:
        s = sum((prices[v] for v in vertices), Fraction(0))
        if s <= budget:
            total += s
    return total


def round_budgets(instance: Instance, epsilon: Fraction) -> RoundingResult:
    """Scale budgets down to integers bounded by O(m/epsilon).

    Uses M = epsilon * B_max / m and floors each budget.  Solving the rounded
    instance and rescaling prices by M loses at most a 2*epsilon fraction of
    the optimum.  All-zero-budget instances are returned unchanged with M=1
    and flagged degenerate.
    """
    epsilon = to_fraction(epsilon)
    if not (0 < epsilon <= 1):
        raise GvpError(f"epsilon must be in (0, 1], got {epsilon}")
    if instance.m == 0:
        return RoundingResult(instance, Fraction(1), 0, degenerate=True)
    b_max = max(b for _, _, b in instance.edges)
    if b_max == 0:
        return RoundingResult(instance, Fraction(1), 0, degenerate=True)
    scale = epsilon * b_max / instance.m
    rounded_edges = [(u, v, Fraction(b // scale)) for u, v, b in instance.edges]
    rounded = Instance(instance.n, rounded_edges)
    cap = int(max(b for _, _, b in rounded.edges))
    assert cap <= math.ceil(2 * instance.m / epsilon)
    return RoundingResult(rounded, scale, cap)


def lift_prices(rounded_solution: Solution, scale: Fraction) -> PriceAssignment:
    """Rescale a rounded-instance assignment back to original units."""
    scale = to_fraction(scale)
    return PriceAssignment([scale * p for p in rounded_solution.prices.prices])


# --- JSON instance format ----------------------------------------------------
#
# Graph:      {"n": int, "edges": [[u, v, "budget"], ...]}
# Hypergraph: {"n": int, "hyperedges": [[[v, ...], "budget"], ...]}
#
# Budgets are "p/q" or decimal strings (ints also accepted); writers emit the
# canonical "p/q" string form.


def instance_to_json(instance: Instance) -> str:
    doc = {
        "n": instance.n,
        "edges": [[u, v, format_fraction(b)] for u, v, b in instance.edges],
    }
    return json.dumps(doc, separators=(",", ":"), sort_keys=True) + "\n"


def hyper_to_json(hyper: HyperInstance) -> str:
    doc = {
        "n": hyper.n,
        "hyperedges": [[sorted(s), format_fraction(b)] for s, b in hyper.hyperedges],
    }
    return json.dumps(doc, separators=(",", ":"), sort_keys=True) + "\n"


def instance_from_dict(doc: dict) -> Instance | HyperInstance:
    if not isinstance(doc, dict) or "n" not in doc:
        raise GvpError("instance JSON must be an object with an 'n' field")
    if "hyperedges" in doc:
        return HyperInstance(doc["n"], doc["hyperedges"])
    return Instance(doc["n"], doc.get("edges", []))


def instance_from_json(text: str) -> Instance | HyperInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GvpError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(doc)


def load_instance(path) -> Instance | HyperInstance:
    with open(path) as fh:
        return instance_from_json(fh.read())

"""BFS-layer decomposition PTAS for planar inputs, and a hardness-derived
instance generator with a known optimum.

Planarity is asserted by the caller, not verified: the layering itself is
well-defined on any graph, and the small-treewidth residual claim is checked
empirically through decomposition construction.

The generator implements the vertex-cover reduction: each input vertex gains
a pendant partner joined by a budget-1 "poor" consumer, and each input edge
becomes two parallel "rich" consumers with budgets n^2 and 2n^2.  The
resulting optimum equals 2*|E|*n^2 + n - VC exactly, which makes reduced
instances self-checking test fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil

from gvp.decomposition import BuildConfig, DecompositionFailure, build_decomposition
from gvp.dp import fptas
from gvp.instances import (
    GvpError,
    Instance,
    PriceAssignment,
    Solution,
    evaluate_revenue,
    to_fraction,
)


@dataclass(frozen=True)
class LayerPartition:
    """Vertex classes by BFS depth mod k, per connected component."""

    k: int
    parts: tuple[frozenset[int], ...]


def baker_partition(instance: Instance, k: int) -> LayerPartition:
    """Bucket vertices by BFS depth mod k; roots are lowest-index per component."""
    if k < 3:
        raise GvpError(f"layer partition needs k >= 3, got {k}")
    adj = instance.adjacency()
    depth = [-1] * instance.n
    for root in range(instance.n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        frontier = [root]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for x in frontier:
                for w in sorted(adj[x]):
                    if depth[w] < 0:
                        depth[w] = d
                        nxt.append(w)
            frontier = nxt
    parts = [set() for _ in range(k)]
    for v in range(instance.n):
        parts[depth[v] % k].add(v)
    return LayerPartition(k, tuple(frozenset(p) for p in parts))


def residual_instances(instance: Instance, partition: LayerPartition) -> list[Instance]:
    """One instance per deleted part: same vertices, incident edges removed."""
    out = []
    for part in partition.parts:
        keep = [
            i
            for i, (u, v, _) in enumerate(instance.edges)
            if u not in part and v not in part
        ]
        out.append(instance.subinstance(keep))
    return out


def ptas_planar(instance: Instance, epsilon) -> Solution:
    """(1-O(epsilon))-approximation for planar instances.

    With k = ceil(1/epsilon)+2, deleting the lightest BFS residue class
    costs at most a 2/k fraction of the optimum, and what remains has small
    treewidth, where the FPTAS applies.  Deleted vertices end up isolated in
    the residual instance, so they are priced 0 automatically.
    """
    epsilon = to_fraction(epsilon)
    if epsilon <= 0:
        raise GvpError(f"epsilon must be positive, got {epsilon}")
    if instance.m == 0:
        return Solution(PriceAssignment([0] * instance.n), Fraction(0), "ptas-planar")
    k = ceil(1 / epsilon) + 2
    partition = baker_partition(instance, k)
    width_budget = 3 * (k - 1)
    config = BuildConfig(max_width_cap=max(width_budget, instance.n, 8))
    best: tuple[Fraction, PriceAssignment] | None = None
    for sub in residual_instances(instance, partition):
        try:
            sol = fptas(sub, epsilon, width_budget, build_config=config)
        except DecompositionFailure:
            # empirical width bound missed; pay for an exact-but-slow table
            sol = fptas(sub, epsilon, max(instance.n - 1, 1), build_config=config)
        revenue = evaluate_revenue(instance, sol.prices)
        if best is None or revenue > best[0]:
            best = (revenue, sol.prices)
    revenue, prices = best
    return Solution(prices=prices, revenue=revenue, algorithm="ptas-planar")


def vc_to_gvp(graph: Instance) -> Instance:
    """Reduce a simple graph's vertex-cover problem to a pricing instance.

    Output has 2n vertices (v and its pendant n+v).  Rich consumers come in
    parallel pairs with budgets n^2 and 2n^2 per input edge; each vertex gets
    one poor consumer of budget 1 to its pendant.  Optimal revenue equals
    2*|E|*n^2 + n - VC(graph).
    """
    n = graph.n
    if n < 1:
        raise GvpError("reduction needs at least one vertex")
    seen = set()
    for u, v, _ in graph.edges:
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise GvpError(f"input must be simple; edge {pair} repeated")
        seen.add(pair)
    rich = Fraction(n * n)
    edges = []
    for u, v, _ in graph.edges:
        edges.append((u, v, rich))
        edges.append((u, v, 2 * rich))
    for v in range(n):
        edges.append((v, n + v, Fraction(1)))
    return Instance(2 * n, edges)


def min_vertex_cover_size(graph: Instance, n_cap: int = 16) -> int:
    """Exhaustive minimum vertex cover (for reduction sidecars and tests)."""
    if graph.n > n_cap:
        raise GvpError(f"exhaustive vertex cover capped at n <= {n_cap}")
    pairs = {(min(u, v), max(u, v)) for u, v, _ in graph.edges}
    if not pairs:
        return 0
    for size in range(0, graph.n + 1):
        for cover in combinations(range(graph.n), size):
            cs = set(cover)
            if all(u in cs or v in cs for u, v in pairs):
                return size
    return graph.n


def expected_reduction_opt(graph: Instance) -> Fraction:
    """Closed-form optimum of vc_to_gvp(graph): 2|E|n^2 + n - VC."""
    vc = min_vertex_cover_size(graph)
    pairs = {(min(u, v), max(u, v)) for u, v, _ in graph.edges}
    return Fraction(2 * len(pairs) * graph.n**2 + graph.n - vc)

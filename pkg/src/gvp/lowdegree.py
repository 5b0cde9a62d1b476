"""Exact solvers for paths and cycles, and the degree-<=4 two-way split.

Paths and cycles are solved exactly over real-valued prices: either every
consumer stays affordable, in which case the all-pay LP is optimal, or some
consumer is priced out, in which case the instance splits at that consumer.
Prices here are first-class exact rationals; the integral-price solvers live
elsewhere.

Graphs of degree at most four are split into two degree-<=2 subgraphs along
an Eulerian circuit (after matching up odd-degree vertices with virtual
edges); solving both sides exactly gives a 2-approximation.
"""

from __future__ import annotations

from fractions import Fraction

from gvp.instances import (
    GvpError,
    Instance,
    PriceAssignment,
    Solution,
    evaluate_revenue,
)
from gvp.lp import lp_opt


def _edge_components(instance: Instance) -> list[list[int]]:
    """Connected components as vertex lists (isolated vertices included)."""
    parent = list(range(instance.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in instance.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(instance.n):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def _path_order(instance: Instance) -> list[int]:
    """Vertices of a single simple path in order, or raise.

    n=1 counts as a trivial path.  The path is traversed from its
    lower-indexed endpoint for determinism.
    """
    n = instance.n
    if n == 0:
        raise GvpError("not a path: empty instance")
    if instance.m != n - 1:
        raise GvpError(f"not a path: {instance.m} edges on {n} vertices")
    if len({(min(u, v), max(u, v)) for u, v, _ in instance.edges}) != instance.m:
        raise GvpError("not a simple path: parallel edges")
    adj = [[] for _ in range(n)]
    for u, v, _ in instance.edges:
        adj[u].append(v)
        adj[v].append(u)
    if n == 1:
        return [0]
    ends = [v for v in range(n) if len(adj[v]) == 1]
    if len(ends) != 2 or any(len(a) > 2 for a in adj):
        raise GvpError("not a path: wrong degree sequence")
    order = [min(ends)]
    prev = None
    while len(order) < n:
        nxt = [w for w in adj[order[-1]] if w != prev]
        if len(nxt) != 1:
            raise GvpError("not a path: disconnected")
        prev = order[-1]
        order.append(nxt[0])
    return order


def _cycle_order(instance: Instance) -> list[int]:
    """Vertices of a single cycle in order (2-cycles of parallel edges count)."""
    n = instance.n
    if n < 2 or instance.m != n:
        raise GvpError(f"not a cycle: {instance.m} edges on {n} vertices")
    adj = [[] for _ in range(n)]
    for idx, (u, v, _) in enumerate(instance.edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    if any(len(a) != 2 for a in adj):
        raise GvpError("not a cycle: wrong degree sequence")
    order = [0]
    prev_edge = None
    while True:
        choices = [(w, e) for w, e in adj[order[-1]] if e != prev_edge]
        w, prev_edge = choices[0]
        if w == 0:
            break
        order.append(w)
    if len(order) != n:
        raise GvpError("not a cycle: disconnected")
    return order


def _all_pay_positive(instance: Instance, assignment) -> bool:
    return all(assignment[u] + assignment[v] > 0 for u, v, _ in instance.edges)


def solve_path(instance: Instance) -> Solution:
    """Exact real-price optimum of a single simple path."""
    order = _path_order(instance)
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    # edge between consecutive positions i, i+1
    edge_at: dict[int, int] = {}
    for idx, (u, v, _) in enumerate(instance.edges):
        i = min(pos[u], pos[v])
        edge_at[i] = idx

    memo: dict[tuple[int, int], tuple[Fraction, object]] = {}

    def solve(i: int, j: int) -> tuple[Fraction, object]:
        """Best revenue from the subpath spanning positions i..j, with a plan."""
        if i >= j:
            return Fraction(0), ("empty",)
        key = (i, j)
        if key in memo:
            return memo[key]
        sub = instance.subinstance([edge_at[k] for k in range(i, j)])
        lp = lp_opt(sub)
        best, plan = Fraction(-1), None
        if _all_pay_positive(sub, lp.assignment):
            best, plan = lp.value, ("lp", lp.assignment)
        for k in range(i, j):
            left, _ = solve(i, k)
            right, _ = solve(k + 1, j)
            if left + right > best:
                best, plan = left + right, ("split", k)
        memo[key] = (best, plan)
        return memo[key]

    def extract(i: int, j: int, prices: list[Fraction]) -> None:
        _, plan = solve(i, j)
        if plan[0] == "empty":
            return
        if plan[0] == "lp":
            for p in range(i, j + 1):
                v = order[p]
                prices[v] = plan[1][v]
            return
        k = plan[1]
        extract(i, k, prices)
        extract(k + 1, j, prices)

    value, _ = solve(0, n - 1)
    prices = [Fraction(0)] * instance.n
    extract(0, n - 1, prices)
    assignment = PriceAssignment(prices)
    revenue = evaluate_revenue(instance, assignment)
    assert revenue == value, "price extraction lost revenue"
    return Solution(prices=assignment, revenue=revenue, algorithm="path")


def solve_cycle(instance: Instance) -> Solution:
    """Exact real-price optimum of a single cycle.

    Either the all-pay LP optimum certifies every consumer paying, or some
    consumer is priced out and deleting it leaves a path.
    """
    _cycle_order(instance)
    best: tuple[Fraction, PriceAssignment] | None = None
    lp = lp_opt(instance)
    if _all_pay_positive(instance, lp.assignment):
        best = (lp.value, PriceAssignment(lp.assignment))
    for drop in range(instance.m):
        sub = instance.subinstance([i for i in range(instance.m) if i != drop])
        sol = solve_path(sub)
        if best is None or sol.revenue > best[0]:
            best = (sol.revenue, sol.prices)
    value, prices = best
    revenue = evaluate_revenue(instance, prices)
    assert revenue == value
    return Solution(prices=prices, revenue=revenue, algorithm="cycle")


def _relabeled(instance: Instance, vertices: list[int], edge_ids: list[int]):
    index = {v: i for i, v in enumerate(vertices)}
    edges = [
        (index[u], index[v], b)
        for u, v, b in (instance.edges[i] for i in edge_ids)
    ]
    return Instance(len(vertices), edges), index


def solve_degree2(instance: Instance) -> Solution:
    """Exact real-price optimum for graphs of maximum degree two."""
    if instance.max_degree() > 2:
        raise GvpError(f"maximum degree {instance.max_degree()} exceeds 2")
    incident: dict[int, list[int]] = {}
    for idx, (u, v, _) in enumerate(instance.edges):
        incident.setdefault(u, []).append(idx)
        incident.setdefault(v, []).append(idx)

    prices = [Fraction(0)] * instance.n
    total = Fraction(0)
    for component in _edge_components(instance):
        edge_ids = sorted({i for v in component for i in incident.get(v, [])})
        if not edge_ids:
            continue  # isolated vertex, price 0
        sub, index = _relabeled(instance, component, edge_ids)
        if sub.m == sub.n - 1:
            sol = solve_path(sub)
        else:
            sol = solve_cycle(sub)
        total += sol.revenue
        for v, i in index.items():
            prices[v] = sol.prices[i]
    assignment = PriceAssignment(prices)
    revenue = evaluate_revenue(instance, assignment)
    assert revenue == total
    return Solution(prices=assignment, revenue=revenue, algorithm="degree2")


def euler_split(instance: Instance) -> tuple[list[int], list[int]]:
    """Partition edge ids into two sets, each inducing max degree <= 2.

    Components that are already paths or cycles go wholesale into the first
    set (nothing to halve, and degree-<=2 inputs must come out intact).  In
    the remaining components, odd-degree vertices are paired up (ascending)
    with virtual edges, making every augmented component Eulerian; walking
    each circuit and alternating edge classes halves the degrees.  An
    odd-length circuit is started at a degree-2 vertex so its single
    defective pass still stays within degree 2.  Virtual edges are discarded
    afterwards.
    """
    if instance.max_degree() > 4:
        raise GvpError(f"maximum degree {instance.max_degree()} exceeds 4")
    degree = [0] * instance.n
    for u, v, _ in instance.edges:
        degree[u] += 1
        degree[v] += 1

    side_a: list[int] = []
    side_b: list[int] = []
    complex_edge_ids: list[int] = []
    complex_vertices: set[int] = set()
    for vertices in _edge_components(instance):
        edge_ids = [
            i
            for i, (u, v, _) in enumerate(instance.edges)
            if u in vertices or v in vertices
        ]
        if max((degree[v] for v in vertices), default=0) <= 2:
            side_a.extend(edge_ids)
        else:
            complex_edge_ids.extend(edge_ids)
            complex_vertices.update(vertices)

    edges: list[tuple[int, int] | None] = [None] * instance.m
    for i in complex_edge_ids:
        u, v, _ = instance.edges[i]
        edges[i] = (u, v)
    odd = sorted(v for v in complex_vertices if degree[v] % 2 == 1)
    virtual_start = instance.m
    virtuals = list(zip(odd[0::2], odd[1::2]))

    adj: list[list[tuple[int, int]]] = [[] for _ in range(instance.n)]
    for idx, pair in enumerate(edges):
        if pair is not None:
            u, v = pair
            adj[u].append((v, idx))
            adj[v].append((u, idx))
    for offset, (u, v) in enumerate(virtuals):
        idx = virtual_start + offset
        adj[u].append((v, idx))
        adj[v].append((u, idx))

    used = [False] * (virtual_start + len(virtuals))
    aug_degree = [len(a) for a in adj]
    visited = [False] * instance.n
    for start in sorted(complex_vertices):
        if visited[start]:
            continue
        component = []
        stack = [start]
        visited[start] = True
        while stack:
            x = stack.pop()
            component.append(x)
            for w, _ in adj[x]:
                if not visited[w]:
                    visited[w] = True
                    stack.append(w)
        comp_edges = sum(aug_degree[v] for v in component) // 2
        root = component[0]
        if comp_edges % 2 == 1:
            # An odd circuit forces one same-class pair at its start vertex;
            # a degree-2 start absorbs it (one must exist: all-degree-4
            # components have an even number of edges).
            root = min(v for v in component if aug_degree[v] == 2)

        circuit = _hierholzer(adj, used, root)
        assert len(circuit) == comp_edges
        for i, edge_id in enumerate(circuit):
            (side_a if i % 2 == 0 else side_b).append(edge_id)

    e1 = sorted(i for i in side_a if i < virtual_start)
    e2 = sorted(i for i in side_b if i < virtual_start)
    for part in (e1, e2):
        deg = [0] * instance.n
        for i in part:
            u, v, _ = instance.edges[i]
            deg[u] += 1
            deg[v] += 1
        assert max(deg, default=0) <= 2, "euler split produced degree > 2"
    assert sorted(e1 + e2) == list(range(instance.m))
    return e1, e2


def _hierholzer(adj, used, start: int) -> list[int]:
    """Eulerian circuit from start, as a list of edge ids."""
    pointer = {start: 0}
    stack = [(start, None)]
    circuit: list[int] = []
    while stack:
        x, via = stack[-1]
        advanced = False
        i = pointer.get(x, 0)
        while i < len(adj[x]):
            w, edge_id = adj[x][i]
            i += 1
            if not used[edge_id]:
                used[edge_id] = True
                pointer[x] = i
                stack.append((w, edge_id))
                advanced = True
                break
        if not advanced:
            pointer[x] = i
            stack.pop()
            if via is not None:
                circuit.append(via)
    circuit.reverse()
    return circuit


def solve_degree4(instance: Instance) -> Solution:
    """2-approximation for graphs of maximum degree four.

    Both halves of the Euler split are solved exactly; their optima sum to at
    least the full optimum, so the better one collects at least half.
    """
    e1, e2 = euler_split(instance)
    candidates = []
    for part in (e1, e2):
        sol = solve_degree2(instance.subinstance(part))
        revenue = evaluate_revenue(instance, sol.prices)
        candidates.append((revenue, sol.prices))
    revenue, prices = max(candidates, key=lambda t: t[0])
    return Solution(prices=prices, revenue=revenue, algorithm="degree4")

"""Exact dynamic programming over tree decompositions, and the FPTAS.

Each tree node owns the edges whose endpoints first fit together in its bag
(nearest the root); a table per node maps bag price vectors to the best
revenue available from its subtree's edges.  Child tables are folded in by
maximizing over child assignments that agree with the parent on shared
vertices.  Budgets must be integral here, which lets the tables live in
int64 numpy tensors; the FPTAS supplies integrality via budget rounding.

Bags smaller than width+1 are handled natively with variable-arity tables,
and per-vertex price domains are clipped at the largest incident budget
(larger prices can never earn anything, so the optimal value is unchanged).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from gvp.decomposition import (
    BuildConfig,
    TreeDecomposition,
    build_decomposition,
    primal_graph,
    validate_decomposition,
)
from gvp.instances import (
    GvpError,
    HyperInstance,
    Instance,
    PriceAssignment,
    RoundingResult,
    Solution,
    evaluate_revenue,
    evaluate_revenue_smp,
    lift_prices,
    round_budgets,
    to_fraction,
)

MAX_TABLE_ENTRIES = 50_000_000


def _integral_cap_check(budgets, price_cap: int) -> list[int]:
    if price_cap < 1:
        raise GvpError(f"price cap must be positive, got {price_cap}")
    out = []
    for b in budgets:
        if b.denominator != 1:
            raise GvpError(f"DP requires integral budgets, got {b}")
        if b > price_cap:
            raise GvpError(f"budget {b} exceeds price cap {price_cap}")
        out.append(int(b))
    return out


def _domains(n: int, price_cap: int, incident_budget: list[int]) -> list[int]:
    # Highest price worth considering per vertex; beyond its largest incident
    # budget a vertex can never earn, so 0 dominates.
    return [min(price_cap, incident_budget[v]) for v in range(n)]


class _BagTables:
    """Shared machinery for the graph and hypergraph DPs."""

    def __init__(self, n: int, td: TreeDecomposition, domains: list[int]):
        self.td = td
        self.domains = domains
        self.bags = [sorted(b) for b in td.bags]
        self.shapes = [tuple(domains[v] + 1 for v in bag) for bag in self.bags]
        for shape in self.shapes:
            size = 1
            for s in shape:
                size *= s
            if size > MAX_TABLE_ENTRIES:
                raise GvpError(f"DP table with {size} entries exceeds the memory guard")
        self.tables: list[np.ndarray | None] = [None] * len(self.bags)
        self.children = td.children()

    def axis_vector(self, node: int, vertex: int) -> np.ndarray:
        """Price values of `vertex` broadcast along its axis in node's tensor."""
        bag = self.bags[node]
        axis = bag.index(vertex)
        shape = [1] * len(bag)
        shape[axis] = self.domains[vertex] + 1
        return np.arange(self.domains[vertex] + 1, dtype=np.int64).reshape(shape)

    def fold_children(self, node: int, table: np.ndarray) -> np.ndarray:
        for child in self.children[node]:
            child_table = self.tables[child]
            shared = set(self.bags[node]) & set(self.bags[child])
            reduce_axes = tuple(
                i for i, v in enumerate(self.bags[child]) if v not in shared
            )
            best = child_table.max(axis=reduce_axes) if reduce_axes else child_table
            # Shared vertices keep their relative (sorted) order in both bags,
            # so aligning is a pure reshape.
            shape = [
                self.domains[v] + 1 if v in shared else 1 for v in self.bags[node]
            ]
            table = table + best.reshape(shape)
        return table

    def run(self, local_revenue) -> tuple[int, dict[int, int]]:
        order = self.td.topo_order()
        for node in reversed(order):
            table = local_revenue(node)
            self.tables[node] = self.fold_children(node, table)

        root = order[0]
        prices: dict[int, int] = {}
        root_table = self.tables[root]
        best = int(root_table.max()) if root_table.size else 0
        self._assign(root, prices, int(np.argmax(root_table)))
        stack = [root]
        while stack:
            node = stack.pop()
            for child in self.children[node]:
                bag = self.bags[child]
                index = tuple(
                    prices[v] if v in prices else slice(None) for v in bag
                )
                sub = self.tables[child][index]
                free = [v for v in bag if v not in prices]
                if free:
                    flat = int(np.argmax(sub))
                    coords = np.unravel_index(flat, sub.shape)
                    for v, c in zip(free, coords):
                        prices[v] = int(c)
                stack.append(child)
        return best, prices

    def _assign(self, node: int, prices: dict[int, int], flat: int) -> None:
        table = self.tables[node]
        coords = np.unravel_index(flat, table.shape) if table.shape else ()
        for v, c in zip(self.bags[node], coords):
            prices[v] = int(c)


def dp_solve(instance: Instance, td: TreeDecomposition, price_cap: int) -> Solution:
    """Exact optimum over integral prices in {0..price_cap}^n."""
    budgets = _integral_cap_check([b for _, _, b in instance.edges], price_cap)
    report = validate_decomposition(instance, td)
    if not report.ok:
        raise GvpError(f"invalid decomposition: {report.violation}")
    if instance.m * price_cap >= 2**62:
        raise GvpError("instance too large for int64 revenue accumulation")

    incident = [0] * instance.n
    for (u, v, _), b in zip(instance.edges, budgets):
        incident[u] = max(incident[u], b)
        incident[v] = max(incident[v], b)
    bt = _BagTables(instance.n, td, _domains(instance.n, price_cap, incident))

    owned: list[list[tuple[int, int, int]]] = [[] for _ in td.bags]
    for (u, v, _), b, node in zip(instance.edges, budgets, td.edge_assignment):
        owned[node].append((u, v, b))

    def local_revenue(node: int) -> np.ndarray:
        table = np.zeros(bt.shapes[node], dtype=np.int64)
        for u, v, b in owned[node]:
            s = bt.axis_vector(node, u) + bt.axis_vector(node, v)
            table = table + np.where(s <= b, s, 0)
        return table

    best, price_map = bt.run(local_revenue)
    prices = PriceAssignment([price_map.get(v, 0) for v in range(instance.n)])
    revenue = evaluate_revenue(instance, prices)
    assert revenue == best, "traceback revenue disagrees with root table"
    return Solution(prices=prices, revenue=revenue, algorithm="dp")


def dp_solve_smp(hyper: HyperInstance, td: TreeDecomposition, price_cap: int) -> Solution:
    """Exact single-minded optimum; td must decompose the primal graph."""
    budgets = _integral_cap_check([b for _, b in hyper.hyperedges], price_cap)
    primal = primal_graph(hyper)
    primal_td = TreeDecomposition.from_bags(primal, td.bags, td.parents)
    report = validate_decomposition(primal, primal_td)
    if not report.ok:
        raise GvpError(f"invalid decomposition of the primal graph: {report.violation}")
    if len(hyper.hyperedges) * price_cap >= 2**62:
        raise GvpError("instance too large for int64 revenue accumulation")

    depth = primal_td.depths()
    owned: list[list[tuple[frozenset, int]]] = [[] for _ in td.bags]
    for (vertices, _), b in zip(hyper.hyperedges, budgets):
        holders = [i for i, bag in enumerate(primal_td.bags) if vertices <= bag]
        if not holders:
            raise GvpError(
                f"hyperedge {sorted(vertices)} fits in no bag; "
                "not a primal-graph decomposition"
            )
        node = min(holders, key=lambda i: (depth[i], i))
        owned[node].append((vertices, b))

    incident = [0] * hyper.n
    for (vertices, _), b in zip(hyper.hyperedges, budgets):
        for v in vertices:
            incident[v] = max(incident[v], b)
    bt = _BagTables(hyper.n, primal_td, _domains(hyper.n, price_cap, incident))

    def local_revenue(node: int) -> np.ndarray:
        table = np.zeros(bt.shapes[node], dtype=np.int64)
        for vertices, b in owned[node]:
            s = sum(bt.axis_vector(node, v) for v in sorted(vertices))
            table = table + np.where(s <= b, s, 0)
        return table

    best, price_map = bt.run(local_revenue)
    prices = PriceAssignment([price_map.get(v, 0) for v in range(hyper.n)])
    revenue = evaluate_revenue_smp(hyper, prices)
    assert revenue == best, "traceback revenue disagrees with root table"
    return Solution(prices=prices, revenue=revenue, algorithm="dp-smp")


@dataclass(frozen=True)
class FptasResult:
    """Solution plus the rounding used to reach it (for diagnostics/tests)."""

    solution: Solution
    rounding: RoundingResult
    decomposition: TreeDecomposition | None


def fptas(
    instance: Instance,
    epsilon,
    max_width: int,
    build_config: BuildConfig = BuildConfig(),
    return_details: bool = False,
):
    """(1+epsilon)-approximation on bounded-treewidth instances.

    Budgets are rounded to small integers (losing at most an epsilon-fraction
    of the optimum), the rounded instance is solved exactly by dp_solve, and
    prices are scaled back.  The rounding step uses an internal epsilon of
    eps/(2(1+eps)) so the returned revenue is >= OPT/(1+eps).

    When budgets are already small integers the rounding would only blur
    them, so it is skipped (scale 1) and the result is exact.
    """
    epsilon = to_fraction(epsilon)
    if epsilon <= 0:
        raise GvpError(f"epsilon must be positive, got {epsilon}")
    eps_int = epsilon / (2 * (1 + epsilon))

    if instance.m == 0 or all(b == 0 for _, _, b in instance.edges):
        # All-zero-budget inputs are degenerate by design: zero prices, no error.
        solution = Solution(
            prices=PriceAssignment([0] * instance.n),
            revenue=Fraction(0),
            algorithm="fptas",
        )
        rounding = RoundingResult(instance, Fraction(1), 0, degenerate=True)
        return FptasResult(solution, rounding, None) if return_details else solution

    b_max = max(b for _, _, b in instance.edges)
    if instance.has_integral_budgets() and eps_int * b_max / instance.m <= 1:
        rounding = RoundingResult(instance, Fraction(1), int(b_max))
    else:
        rounding = round_budgets(instance, eps_int)

    td = build_decomposition(instance, max_width, build_config)
    inner = dp_solve(rounding.rounded, td, max(rounding.price_cap, 1))
    prices = lift_prices(inner, rounding.scale)
    revenue = evaluate_revenue(instance, prices)
    assert revenue >= rounding.scale * inner.revenue
    solution = Solution(prices=prices, revenue=revenue, algorithm="fptas")
    return FptasResult(solution, rounding, td) if return_details else solution

"""Solvers for graph vertex pricing and its single-minded hypergraph variant.

A seller prices vertices; each consumer (an edge or hyperedge with a budget)
pays the total price of the vertices it wants iff that total is within its
budget.  This package bundles exact solvers (brute force, tree-decomposition
DP, degree-2 recursions), approximation schemes (FPTAS on bounded treewidth,
planar PTAS, k-partite and degree-4 constant factors), an exact rational LP
solver, and the level-r lifted relaxation with its rounding algorithms.

All arithmetic on budgets, prices and revenues is exact rational; there is no
floating-point solver path.
"""

from gvp.instances import (
    Instance,
    HyperInstance,
    PriceAssignment,
    RoundingResult,
    Solution,
    evaluate_revenue,
    evaluate_revenue_smp,
    round_budgets,
    lift_prices,
)

__all__ = [
    "Instance",
    "HyperInstance",
    "PriceAssignment",
    "RoundingResult",
    "Solution",
    "evaluate_revenue",
    "evaluate_revenue_smp",
    "round_budgets",
    "lift_prices",
]

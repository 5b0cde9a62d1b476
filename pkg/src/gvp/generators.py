"""Seed-deterministic instance generators for tests, benchmarks and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction

from gvp.instances import GvpError, Instance, to_fraction
from gvp.kpartite import Coloring
from gvp.planar import expected_reduction_opt, min_vertex_cover_size, vc_to_gvp


def _budgets(count: int, budgets, seed, budget_max) -> list[Fraction]:
    if budgets is not None:
        vals = [to_fraction(b) for b in budgets]
        if len(vals) != count:
            raise GvpError(f"expected {count} budgets, got {len(vals)}")
        return vals
    rng = random.Random(seed)
    top = int(budget_max)
    if top < 1:
        raise GvpError("budget range must be at least 1")
    return [Fraction(rng.randint(1, top)) for _ in range(count)]


def gen_path(n: int, budgets=None, seed: int = 0, budget_max: int = 10) -> Instance:
    if n < 1:
        raise GvpError("path needs n >= 1")
    vals = _budgets(n - 1, budgets, seed, budget_max)
    return Instance(n, [(i, i + 1, b) for i, b in enumerate(vals)])


def gen_cycle(n: int, budgets=None, seed: int = 0, budget_max: int = 10) -> Instance:
    if n < 3:
        raise GvpError("cycle needs n >= 3")
    vals = _budgets(n, budgets, seed, budget_max)
    return Instance(n, [(i, (i + 1) % n, b) for i, b in enumerate(vals)])


def gen_star(n: int, budgets=None, seed: int = 0, budget_max: int = 10) -> Instance:
    if n < 2:
        raise GvpError("star needs n >= 2")
    vals = _budgets(n - 1, budgets, seed, budget_max)
    return Instance(n, [(0, i + 1, b) for i, b in enumerate(vals)])


def gen_grid(rows: int, cols: int, budget=None, seed: int = 0, budget_max: int = 10) -> Instance:
    if rows < 1 or cols < 1:
        raise GvpError("grid needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    if budget is not None:
        vals = [to_fraction(budget)] * len(edges)
    else:
        vals = _budgets(len(edges), None, seed, budget_max)
    return Instance(rows * cols, [(u, v, b) for (u, v), b in zip(edges, vals)])


def gen_random_tree(n: int, seed: int = 0, budget_max: int = 10) -> Instance:
    """Uniform-ish random tree: each vertex attaches to a random predecessor."""
    if n < 1:
        raise GvpError("tree needs n >= 1")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, Fraction(rng.randint(1, budget_max))))
    return Instance(n, edges)


def gen_random_sp(ops: int, seed: int = 0, budget_max: int = 10) -> Instance:
    """Random series-parallel multigraph grown from a single edge.

    Each step either subdivides a random edge (series) or duplicates it
    (parallel); both preserve series-parallelness, so treewidth stays <= 2.
    """
    if ops < 0:
        raise GvpError("ops must be nonnegative")
    rng = random.Random(seed)
    n = 2
    pairs: list[tuple[int, int]] = [(0, 1)]
    for _ in range(ops):
        idx = rng.randrange(len(pairs))
        u, v = pairs[idx]
        if rng.random() < 0.5:
            w = n
            n += 1
            pairs[idx] = (u, w)
            pairs.append((w, v))
        else:
            pairs.append((u, v))
    edges = [(u, v, Fraction(rng.randint(1, budget_max))) for u, v in pairs]
    return Instance(n, edges)


def gen_kpartite_random(
    k: int,
    per_class: int,
    edge_prob: float = 0.5,
    seed: int = 0,
    budget_max: int = 10,
) -> tuple[Instance, Coloring]:
    if k < 2 or per_class < 1:
        raise GvpError("k-partite generator needs k >= 2 and per_class >= 1")
    rng = random.Random(seed)
    n = k * per_class
    class_of = [v // per_class for v in range(n)]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if class_of[u] != class_of[v] and rng.random() < edge_prob:
                edges.append((u, v, Fraction(rng.randint(1, budget_max))))
    return Instance(n, edges), Coloring(k, class_of)


def gen_vc_reduction(graph: Instance) -> tuple[Instance, dict]:
    """Reduced pricing instance plus a sidecar with the exact expected optimum."""
    reduced = vc_to_gvp(graph)
    pairs = {(min(u, v), max(u, v)) for u, v, _ in graph.edges}
    sidecar = {
        "expected_opt_formula": {
            "E": len(pairs),
            "V": graph.n,
            "VC": min_vertex_cover_size(graph),
        },
        "expected_opt": str(expected_reduction_opt(graph)),
    }
    return reduced, sidecar

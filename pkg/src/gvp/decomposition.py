"""Tree decompositions: validation, construction, and the primal graph.

Construction is elimination-order based: min-degree and min-fill heuristics
first, then an exact subset DP over elimination orders for small graphs
(n <= 12 by default), which makes failures at a requested width a proof of
impossibility.  No attempt is made at optimal treewidth for large n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from gvp.instances import GvpError, HyperInstance, Instance


class DecompositionFailure(GvpError):
    """No decomposition of the requested width was found.

    `proved` is True when an exhaustive search established that none exists.
    """

    def __init__(self, message: str, proved: bool):
        super().__init__(message)
        self.proved = proved


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree of vertex bags; node 0 is always the root.

    edge_assignment maps each instance edge to the owning node: among nodes
    whose bag contains both endpoints, the one nearest the root.
    """

    bags: tuple[frozenset[int], ...]
    parents: tuple[Optional[int], ...]
    width: int
    edge_assignment: tuple[int, ...]

    @staticmethod
    def from_bags(instance: Instance, bags: Iterable[Iterable[int]], parents: Iterable[Optional[int]]) -> "TreeDecomposition":
        bags = tuple(frozenset(int(v) for v in bag) for bag in bags)
        parents = tuple(None if p is None else int(p) for p in parents)
        depth = _depths(parents)
        width = max((len(b) for b in bags), default=1) - 1
        assignment = []
        for u, v, _ in instance.edges:
            owner = _nearest_containing(bags, depth, {u, v})
            if owner is None:
                raise GvpError(f"edge ({u},{v}) is contained in no bag")
            assignment.append(owner)
        return TreeDecomposition(bags, parents, width, tuple(assignment))

    def depths(self) -> list[int]:
        return _depths(self.parents)

    def children(self) -> list[list[int]]:
        kids = [[] for _ in self.bags]
        for i, p in enumerate(self.parents):
            if p is not None:
                kids[p].append(i)
        return kids

    def topo_order(self) -> list[int]:
        """Nodes ordered root first, every parent before its children."""
        depth = self.depths()
        return sorted(range(len(self.bags)), key=lambda i: depth[i])


def _depths(parents) -> list[int]:
    n = len(parents)
    roots = [i for i, p in enumerate(parents) if p is None]
    if len(roots) != 1:
        raise GvpError(f"decomposition must have exactly one root, found {len(roots)}")
    depth = [-1] * n
    depth[roots[0]] = 0
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(parents):
            if p is not None and depth[i] < 0 and 0 <= p < n and depth[p] >= 0:
                depth[i] = depth[p] + 1
                changed = True
    if any(d < 0 for d in depth):
        raise GvpError("decomposition tree is disconnected or cyclic")
    return depth


def _nearest_containing(bags, depth, vertices) -> Optional[int]:
    candidates = [i for i, b in enumerate(bags) if vertices <= b]
    if not candidates:
        return None
    return min(candidates, key=lambda i: (depth[i], i))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Optional[str] = None


def validate_decomposition(instance: Instance, td: TreeDecomposition) -> ValidationReport:
    """Check the decomposition properties; report the first violation found.

    Properties, in order: bags cover all vertices; every edge fits in its
    assigned bag; per-vertex occurrences form a connected subtree; the width
    field matches; each edge is owned by the containing bag nearest the root.
    """
    try:
        depth = _depths(td.parents)
    except GvpError as exc:
        return ValidationReport(False, f"malformed tree: {exc}")
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not (0 <= v < instance.n):
                return ValidationReport(False, f"bag {i} contains out-of-range vertex {v}")

    covered = set().union(*td.bags) if td.bags else set()
    missing = sorted(set(range(instance.n)) - covered)
    if missing:
        return ValidationReport(False, f"vertex {missing[0]} appears in no bag")

    if len(td.edge_assignment) != instance.m:
        return ValidationReport(False, "edge assignment length does not match edge count")
    for idx, (u, v, _) in enumerate(instance.edges):
        if not any({u, v} <= b for b in td.bags):
            return ValidationReport(False, f"edge ({u},{v}) in no bag")

    children = [[] for _ in td.bags]
    for i, p in enumerate(td.parents):
        if p is not None:
            children[p].append(i)
    for v in range(instance.n):
        nodes = {i for i, b in enumerate(td.bags) if v in b}
        if not nodes:
            continue
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            neighbours = children[t] + ([td.parents[t]] if td.parents[t] is not None else [])
            for nb in neighbours:
                if nb in nodes and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if seen != nodes:
            return ValidationReport(False, f"vertex {v} occurs in a disconnected set of bags")

    true_width = max((len(b) for b in td.bags), default=1) - 1
    if td.width != true_width:
        return ValidationReport(False, f"width field is {td.width}, bags give {true_width}")

    for idx, (u, v, _) in enumerate(instance.edges):
        owner = _nearest_containing(td.bags, depth, {u, v})
        if td.edge_assignment[idx] != owner:
            return ValidationReport(
                False,
                f"edge ({u},{v}) assigned to node {td.edge_assignment[idx]}, nearest-root bag is {owner}",
            )
    return ValidationReport(True)


# --- construction -------------------------------------------------------------


def _eliminate(adj: list[set[int]], order: list[int]) -> int:
    """Width of an elimination order; mutates adj by adding fill edges."""
    width = 0
    alive = set(range(len(adj)))
    for v in order:
        nbrs = adj[v] & alive
        width = max(width, len(nbrs))
        for a in nbrs:
            for b in nbrs:
                if a < b:
                    adj[a].add(b)
                    adj[b].add(a)
        alive.discard(v)
    return width


def _greedy_order(instance: Instance, criterion: str) -> list[int]:
    adj = instance.adjacency()
    alive = set(range(instance.n))
    order = []
    while alive:
        if criterion == "degree":
            key = lambda v: (len(adj[v] & alive), v)
        else:  # min-fill
            def key(v):
                nbrs = sorted(adj[v] & alive)
                fill = sum(
                    1
                    for i, a in enumerate(nbrs)
                    for b in nbrs[i + 1 :]
                    if b not in adj[a]
                )
                return (fill, v)
        v = min(alive, key=key)
        nbrs = adj[v] & alive
        for a in nbrs:
            for b in nbrs:
                if a < b:
                    adj[a].add(b)
                    adj[b].add(a)
        alive.discard(v)
        order.append(v)
    return order


def exact_treewidth_order(instance: Instance) -> tuple[list[int], int]:
    """Optimal elimination order via DP over eliminated subsets (exponential)."""
    n = instance.n
    adj = instance.adjacency()
    full = (1 << n) - 1

    def elim_degree(mask: int, v: int) -> int:
        # neighbours of v reachable through eliminated vertices
        seen = 1 << v
        stack = [v]
        count = 0
        while stack:
            x = stack.pop()
            for nb in adj[x]:
                bit = 1 << nb
                if seen & bit:
                    continue
                seen |= bit
                if mask & bit:
                    stack.append(nb)
                else:
                    count += 1
        return count

    memo: dict[int, int] = {full: 0}

    def best(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        result = n  # upper bound
        for v in range(n):
            if mask & (1 << v):
                continue
            d = elim_degree(mask, v)
            if d >= result:
                continue
            result = min(result, max(d, best(mask | (1 << v))))
        memo[mask] = result
        return result

    width = best(0)
    order = []
    mask = 0
    while mask != full:
        v = min(
            (v for v in range(n) if not mask & (1 << v)),
            key=lambda v: (max(elim_degree(mask, v), best(mask | (1 << v))), v),
        )
        order.append(v)
        mask |= 1 << v
    return order, width


def decomposition_from_order(instance: Instance, order: list[int]) -> TreeDecomposition:
    """Standard bags-from-elimination construction, rerooted so node 0 is root."""
    n = instance.n
    if n == 0:
        return TreeDecomposition.from_bags(instance, [frozenset()], [None])
    adj = instance.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    higher = []
    alive = set(range(n))
    for v in order:
        nbrs = adj[v] & alive
        bags.append(frozenset(nbrs | {v}))
        higher.append(nbrs)
        for a in nbrs:
            for b in nbrs:
                if a < b:
                    adj[a].add(b)
                    adj[b].add(a)
        alive.discard(v)

    parents: list[Optional[int]] = [None] * n
    for i, nbrs in enumerate(higher):
        if nbrs:
            parents[i] = pos[min(nbrs, key=lambda w: pos[w])]
    roots = [i for i, p in enumerate(parents) if p is None]
    for extra in roots[1:]:  # join components into a single tree
        parents[extra] = roots[0]

    # Reindex so the root comes first and parents precede children.
    old_order = [roots[0]]
    kids = [[] for _ in range(n)]
    for i, p in enumerate(parents):
        if p is not None:
            kids[p].append(i)
    seen = 0
    while seen < len(old_order):
        node = old_order[seen]
        seen += 1
        old_order.extend(kids[node])
    new_index = {old: new for new, old in enumerate(old_order)}
    new_bags = [bags[old] for old in old_order]
    new_parents = [None if parents[old] is None else new_index[parents[old]] for old in old_order]
    return TreeDecomposition.from_bags(instance, new_bags, new_parents)


@dataclass(frozen=True)
class BuildConfig:
    max_width_cap: int = 8     # refuse wider requests unless overridden
    exact_n_cap: int = 12      # exhaustive order search up to this many vertices


def build_decomposition(
    instance: Instance, max_width: int, config: BuildConfig = BuildConfig()
) -> TreeDecomposition:
    """Find a rooted decomposition of width <= max_width, or fail.

    Heuristic orders are tried first; for n <= exact_n_cap an exhaustive
    search follows, so failure there proves no such decomposition exists.
    """
    if max_width < 1:
        raise GvpError(f"max_width must be >= 1, got {max_width}")
    if max_width > config.max_width_cap:
        raise GvpError(
            f"max_width {max_width} exceeds configured cap {config.max_width_cap}"
        )
    best_order = None
    best_width = None
    for criterion in ("degree", "fill"):
        order = _greedy_order(instance, criterion)
        width = _eliminate(instance.adjacency(), order)
        if best_width is None or width < best_width:
            best_order, best_width = order, width
    if best_width is not None and best_width <= max_width:
        td = decomposition_from_order(instance, best_order)
        assert validate_decomposition(instance, td).ok
        return td
    if instance.n <= config.exact_n_cap:
        order, width = exact_treewidth_order(instance)
        if width <= max_width:
            td = decomposition_from_order(instance, order)
            assert validate_decomposition(instance, td).ok
            return td
        raise DecompositionFailure(
            f"treewidth is {width} > requested {max_width}", proved=True
        )
    raise DecompositionFailure(
        f"no width-{max_width} decomposition found (best heuristic: {best_width})",
        proved=False,
    )


def primal_graph(hyper: HyperInstance) -> Instance:
    """Graph on the same vertices with an edge per co-occurring pair.

    Budgets carry no meaning here (set to 0); the result exists to be fed to
    decomposition construction, which only looks at topology.
    """
    pairs = set()
    for vertices, _ in hyper.hyperedges:
        members = sorted(vertices)
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                pairs.add((a, b))
    return Instance(hyper.n, [(a, b, 0) for a, b in sorted(pairs)])


def decomposition_from_json_dict(instance: Instance, doc: dict) -> TreeDecomposition:
    """Load {"bags": [[v...]...], "parents": [int-or-null...]} for an instance."""
    if "bags" not in doc or "parents" not in doc:
        raise GvpError("decomposition JSON needs 'bags' and 'parents'")
    return TreeDecomposition.from_bags(instance, doc["bags"], doc["parents"])

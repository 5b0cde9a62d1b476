"""The level-r lifted LP relaxation, its rounding algorithms, and a gap reporter.

The relaxation has one variable y(S, alpha) per vertex set S of size <= r and
price assignment alpha on S, constrained so that the y's for each fixed S
behave like a joint distribution over price assignments whose marginals are
consistent.  Only single-vertex-extension marginalization equalities are
emitted; the full family follows by summing them in chains, which keeps the
constraint count down and is enforced as a tested invariant instead.

Rounding samples bag assignments top-down through a tree decomposition.  Each
bag is sampled conditioned on the vertices it shares with its parent, so bags
of size up to r suffice (r >= width+1); this matches the distribution the
marginal-consistency constraints pin down, and with an optimal solution every
outcome in the support collects exactly the LP value.

Prices run over {0..P}: a price of zero is essential (consider a star's
center), so 0 is always in the domain.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from gvp.decomposition import TreeDecomposition, validate_decomposition
from gvp.instances import GvpError, Instance, PriceAssignment, Solution, evaluate_revenue
from gvp.lp import EQ, LPProgram, LPSolution, solve_lp
from gvp.oracle import brute_force_opt

# The dense exact simplex is the binding constraint, not memory: a few
# hundred variables solve in seconds, a few thousand do not.  Callers doing
# larger studies must raise the cap deliberately.
DEFAULT_VARIABLE_CAP = 600


@dataclass(frozen=True)
class AssignmentKey:
    """A canonical (sorted vertex set, price per vertex) pair."""

    vertices: tuple[int, ...]
    prices: tuple[int, ...]

    @staticmethod
    def of(assignment: dict[int, int]) -> "AssignmentKey":
        vertices = tuple(sorted(assignment))
        return AssignmentKey(vertices, tuple(assignment[v] for v in vertices))


@dataclass(frozen=True)
class LPRModel:
    """Level-r relaxation of an instance at price cap P."""

    instance: Instance
    r: int
    price_cap: int
    keys: tuple[AssignmentKey, ...]
    index: dict[AssignmentKey, int]
    program: LPProgram

    def column(self, assignment: dict[int, int]) -> int:
        return self.index[AssignmentKey.of(assignment)]


def _integral_budgets(instance: Instance, price_cap: int) -> list[int]:
    out = []
    for _, _, b in instance.edges:
        if b.denominator != 1 or b > price_cap:
            raise GvpError(f"budget {b} must be integral and at most {price_cap}")
        out.append(int(b))
    return out


def count_variables(n: int, r: int, price_cap: int) -> int:
    from math import comb

    return sum(comb(n, s) * (price_cap + 1) ** s for s in range(r + 1))


def build_lp_r(
    instance: Instance,
    r: int,
    price_cap: int,
    variable_cap: int = DEFAULT_VARIABLE_CAP,
) -> LPRModel:
    """Construct the level-r relaxation.

    Variables: y(S, alpha) for |S| <= r, alpha in {0..P}^S.  Constraints:
    y(empty, empty) = 1; for every S of size < r, every alpha, and every
    vertex v outside S, the sum of y(S+v, alpha+i) over i equals y(S, alpha).
    Objective: affordable edge assignments weighted by their payment.
    """
    if r < 2:
        raise GvpError(f"relaxation level must be >= 2, got {r}")
    budgets = _integral_budgets(instance, price_cap)
    n = instance.n
    nvars = count_variables(n, r, price_cap)
    if nvars > variable_cap:
        raise GvpError(f"{nvars} variables exceed the size cap {variable_cap}")

    prices = range(price_cap + 1)
    keys: list[AssignmentKey] = []
    for size in range(r + 1):
        for vertices in combinations(range(n), size):
            for alpha in product(prices, repeat=size):
                keys.append(AssignmentKey(vertices, alpha))
    index = {key: i for i, key in enumerate(keys)}

    objective = [Fraction(0)] * len(keys)
    for (u, v, _), b in zip(instance.edges, budgets):
        lo, hi = (u, v) if u < v else (v, u)
        for i in prices:
            for j in prices:
                if i + j <= b:
                    alpha = {u: i, v: j}
                    col = index[AssignmentKey((lo, hi), (alpha[lo], alpha[hi]))]
                    objective[col] += i + j

    rows = []
    norm = [Fraction(0)] * len(keys)
    norm[index[AssignmentKey((), ())]] = Fraction(1)
    rows.append((norm, EQ, Fraction(1)))
    for size in range(r):
        for vertices in combinations(range(n), size):
            others = [v for v in range(n) if v not in vertices]
            for alpha in product(prices, repeat=size):
                base = index[AssignmentKey(vertices, alpha)]
                for v in others:
                    coeffs = [Fraction(0)] * len(keys)
                    coeffs[base] -= 1
                    merged_vertices = tuple(sorted(vertices + (v,)))
                    pos = merged_vertices.index(v)
                    for i in prices:
                        merged_alpha = alpha[:pos] + (i,) + alpha[pos:]
                        coeffs[index[AssignmentKey(merged_vertices, merged_alpha)]] += 1
                    rows.append((coeffs, EQ, Fraction(0)))

    program = LPProgram(
        objective,
        rows,
        lower=[Fraction(0)] * len(keys),
        upper=[Fraction(1)] * len(keys),
    )
    return LPRModel(instance, r, price_cap, tuple(keys), index, program)


def solve_lp_r(model: LPRModel) -> LPSolution:
    solution = solve_lp(model.program)
    assert solution.status == "optimal"  # the polytope contains indicators
    return solution


def indicator_assignment(model: LPRModel, integral_prices: list[int]) -> tuple[Fraction, ...]:
    """The 0/1 solution vector encoding one integral price vector."""
    values = [Fraction(0)] * len(model.keys)
    for i, key in enumerate(model.keys):
        if all(integral_prices[v] == p for v, p in zip(key.vertices, key.prices)):
            values[i] = Fraction(1)
    return tuple(values)


def mix_assignments(vectors, weights) -> tuple[Fraction, ...]:
    """Convex combination of solution vectors (stays feasible)."""
    weights = [Fraction(w) for w in weights]
    assert sum(weights) == 1
    out = [Fraction(0)] * len(vectors[0])
    for vec, w in zip(vectors, weights):
        for i, x in enumerate(vec):
            if x:
                out[i] += w * x
    return tuple(out)


def model_objective(model: LPRModel, assignment) -> Fraction:
    return sum(
        (c * x for c, x in zip(model.program.objective, assignment) if c), Fraction(0)
    )


def check_model_feasible(model: LPRModel, assignment) -> bool:
    for coeffs, rel, rhs in model.program.constraints:
        lhs = sum((c * x for c, x in zip(coeffs, assignment) if c), Fraction(0))
        if rel == EQ and lhs != rhs:
            return False
    return all(0 <= x <= 1 for x in assignment)


# --- rounding ------------------------------------------------------------------


def _bag_value(model: LPRModel, assignment, partial: dict[int, int]) -> Fraction:
    return assignment[model.column(partial)]


def _round_common(model, td, solution, choose):
    instance = model.instance
    report = validate_decomposition(instance, td)
    if not report.ok:
        raise GvpError(f"invalid decomposition: {report.violation}")
    if td.width + 1 > model.r:
        raise GvpError(
            f"rounding needs r >= width+1 (r={model.r}, width={td.width})"
        )
    values = solution.assignment
    prices: dict[int, int] = {}
    domain = range(model.price_cap + 1)
    for node in td.topo_order():
        bag = sorted(td.bags[node])
        fixed = {v: prices[v] for v in bag if v in prices}
        free = [v for v in bag if v not in prices]
        if not free:
            continue
        weighted = []
        for alpha in product(domain, repeat=len(free)):
            merged = dict(fixed)
            merged.update(zip(free, alpha))
            w = _bag_value(model, values, merged)
            if w < 0:
                raise GvpError("negative bag weight; LP solution infeasible")
            weighted.append((alpha, w))
        total = sum((w for _, w in weighted), Fraction(0))
        if total == 0:
            raise GvpError(
                "conditional distribution has empty support; "
                "marginal consistency violated"
            )
        alpha = choose(weighted, total)
        prices.update(zip(free, alpha))
    vec = PriceAssignment([prices[v] for v in range(instance.n)])
    revenue = evaluate_revenue(instance, vec)
    return vec, revenue


def sa_round(
    instance: Instance,
    td: TreeDecomposition,
    model: LPRModel,
    solution: LPSolution,
    seed: int,
) -> Solution:
    """Sample integral prices bag by bag from the relaxation's distributions.

    The root bag is drawn from its joint; every other bag draws its new
    vertices conditioned on the shared ones.  Each bag's marginal then equals
    its y-distribution, so the expected revenue is the LP objective of the
    given solution; with an optimal solution every outcome attains it.
    """
    if instance is not model.instance and instance != model.instance:
        raise GvpError("model was built for a different instance")
    rng = random.Random(seed)

    def choose(weighted, total):
        u = Fraction(rng.random()) * total
        acc = Fraction(0)
        for alpha, w in weighted:
            acc += w
            if u < acc:
                return alpha
        return weighted[-1][0]

    vec, revenue = _round_common(model, td, solution, choose)
    return Solution(prices=vec, revenue=revenue, algorithm="sa-round")


def sa_round_deterministic(
    instance: Instance,
    td: TreeDecomposition,
    model: LPRModel,
    solution: LPSolution,
) -> Solution:
    """Propagate the lexicographically first support assignment top-down."""
    if instance is not model.instance and instance != model.instance:
        raise GvpError("model was built for a different instance")

    def choose(weighted, total):
        for alpha, w in weighted:
            if w > 0:
                return alpha
        raise GvpError("empty support")

    vec, revenue = _round_common(model, td, solution, choose)
    return Solution(prices=vec, revenue=revenue, algorithm="sa-derandomized")


# --- base lifted LP -------------------------------------------------------------


@dataclass(frozen=True)
class BaseLPModel:
    """The unlifted relaxation: per-vertex price indicators x(v,i) plus pair
    variables z(u,v,i,j) for vertex pairs that carry at least one edge."""

    instance: Instance
    price_cap: int
    x_index: dict[tuple[int, int], int]
    z_index: dict[tuple[int, int, int, int], int]
    program: LPProgram


def build_base_lp(instance: Instance, price_cap: int) -> BaseLPModel:
    """Pair-indicator relaxation used only for gap comparison.

    z variables are instantiated only for pairs that actually carry an edge;
    others would be disconnected from the objective and from x entirely.
    """
    budgets = _integral_budgets(instance, price_cap)
    n = instance.n
    prices = range(price_cap + 1)
    x_index = {}
    cols = 0
    for v in range(n):
        for i in prices:
            x_index[(v, i)] = cols
            cols += 1
    pairs = sorted({(min(u, v), max(u, v)) for u, v, _ in instance.edges})
    z_index = {}
    for a, b in pairs:
        for i in prices:
            for j in prices:
                z_index[(a, b, i, j)] = cols
                cols += 1

    objective = [Fraction(0)] * cols
    for (u, v, _), budget in zip(instance.edges, budgets):
        a, b = (u, v) if u < v else (v, u)
        for i in prices:
            for j in prices:
                if i + j <= budget:
                    objective[z_index[(a, b, i, j)]] += i + j

    rows = []
    for v in range(n):
        coeffs = [Fraction(0)] * cols
        for i in prices:
            coeffs[x_index[(v, i)]] = Fraction(1)
        rows.append((coeffs, EQ, Fraction(1)))
    for a, b in pairs:
        coeffs = [Fraction(0)] * cols
        for i in prices:
            for j in prices:
                coeffs[z_index[(a, b, i, j)]] = Fraction(1)
        rows.append((coeffs, EQ, Fraction(1)))
        for i in prices:
            for j in prices:
                coeffs = [Fraction(0)] * cols
                coeffs[z_index[(a, b, i, j)]] = Fraction(1)
                coeffs[x_index[(a, i)]] -= 1
                coeffs[x_index[(b, j)]] -= 1
                rows.append((coeffs, ">=", Fraction(-1)))

    program = LPProgram(
        objective, rows, lower=[Fraction(0)] * cols, upper=[Fraction(1)] * cols
    )
    return BaseLPModel(instance, price_cap, x_index, z_index, program)


# --- gap table ------------------------------------------------------------------


@dataclass(frozen=True)
class GapRow:
    r: int
    lp_value: Fraction
    integral_opt: Fraction
    gap: Fraction | None  # None when the integral optimum is zero


def gap_report(
    instance: Instance,
    r_values,
    price_cap: int,
    variable_cap: int = DEFAULT_VARIABLE_CAP,
) -> list[GapRow]:
    """LP-r value against the brute-force optimum for each requested level."""
    oracle = brute_force_opt(instance, price_cap).revenue
    out = []
    for r in r_values:
        model = build_lp_r(instance, r, price_cap, variable_cap)
        value = solve_lp_r(model).value
        gap = None if oracle == 0 else value / oracle
        out.append(GapRow(r=r, lp_value=value, integral_opt=oracle, gap=gap))
    return out

#!/usr/bin/env python3
"""Measured approximation ratios against the brute-force optimum.

Generates seeded instance batches per family, runs every applicable solver,
and prints the worst and mean revenue/optimum ratio observed.  Guarantees to
compare against: fptas 1/(1+eps), ptas 1-O(eps), degree4 1/2, kpartite
cut_probability(k)/2 in expectation, general 1/4.
"""

import argparse
import random
from fractions import Fraction as F

from gvp.dp import fptas
from gvp.generators import gen_grid, gen_kpartite_random, gen_random_sp, gen_random_tree
from gvp.kpartite import general_graph_approx, kpartite_approx
from gvp.lowdegree import solve_degree2, solve_degree4
from gvp.oracle import brute_force_opt
from gvp.planar import ptas_planar


def batches(rng, count):
    for i in range(count):
        yield "tree", gen_random_tree(rng.randint(3, 8), seed=rng.randrange(10**6), budget_max=6), None
        sp = gen_random_sp(rng.randint(2, 8), seed=rng.randrange(10**6), budget_max=6)
        if sp.n <= 9:
            yield "series-parallel", sp, None
        inst, coloring = gen_kpartite_random(
            rng.randint(2, 4), 2, 0.7, seed=rng.randrange(10**6), budget_max=6
        )
        if inst.m:
            yield "kpartite", inst, coloring


def solvers_for(kind, instance, coloring):
    yield "fptas(0.1)", lambda: fptas(instance, F(1, 10), 8)
    if kind in ("tree", "series-parallel"):
        yield "ptas(1/3)", lambda: ptas_planar(instance, F(1, 3))
    if instance.max_degree() <= 2:
        yield "degree2", lambda: solve_degree2(instance)
    if instance.max_degree() <= 4:
        yield "degree4", lambda: solve_degree4(instance)
    if coloring is not None:
        yield "kpartite", lambda: kpartite_approx(instance, coloring)
    yield "general(seed=0)", lambda: general_graph_approx(instance, 0)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=8, help="batches per family")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    stats = {}
    for kind, instance, coloring in batches(rng, args.count):
        opt = brute_force_opt(instance, 6).revenue
        if opt == 0:
            continue
        for name, run in solvers_for(kind, instance, coloring):
            ratio = run().revenue / opt
            worst, total, count = stats.get((kind, name), (F(1), F(0), 0))
            stats[(kind, name)] = (min(worst, ratio), total + ratio, count + 1)

    print("family,algorithm,instances,worst_ratio,mean_ratio")
    for (kind, name), (worst, total, count) in sorted(stats.items()):
        print(f"{kind},{name},{count},{float(worst):.4f},{float(total / count):.4f}")


if __name__ == "__main__":
    main()

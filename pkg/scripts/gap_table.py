#!/usr/bin/env python3
"""Relaxation-level gap study on small named instances.

Prints one CSV block per instance: the LP value of the level-r relaxation
against the exact integral optimum, for increasing r.  The gap hits exactly 1
once r exceeds the treewidth.
"""

import argparse

from gvp.decomposition import exact_treewidth_order
from gvp.generators import gen_cycle, gen_grid, gen_path
from gvp.instances import Instance, format_fraction
from gvp.sherali_adams import gap_report


def named_instances():
    # (name, instance, price cap, highest affordable level)
    return [
        ("edge", Instance(2, [(0, 1, 2)]), 2, 2),
        ("path4", gen_path(4, budgets=[1, 2, 1]), 2, 4),
        ("triangle", gen_cycle(3, budgets=[1, 1, 1]), 1, 3),
        ("square", gen_cycle(4, budgets=[1, 1, 1, 1]), 1, 4),
        ("pentagon", gen_cycle(5, budgets=[1, 1, 1, 1, 1]), 1, 3),
        ("grid2x3", gen_grid(2, 3, budget=1), 1, 3),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", default="2,3,4", help="comma-separated r values")
    args = parser.parse_args()
    levels = [int(tok) for tok in args.levels.split(",")]

    print("instance,treewidth,r,lp_value,integral_opt,gap")
    for name, inst, cap, max_level in named_instances():
        _, width = exact_treewidth_order(inst)
        usable = [r for r in levels if r <= max_level]
        for row in gap_report(inst, usable, cap):
            gap = "" if row.gap is None else format_fraction(row.gap)
            print(
                f"{name},{width},{row.r},{format_fraction(row.lp_value)},"
                f"{format_fraction(row.integral_opt)},{gap}"
            )


if __name__ == "__main__":
    main()

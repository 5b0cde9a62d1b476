"""Command-line front end: instance I/O, generators, solvers, bench, validation.

stdout carries machine-readable output only (JSON, or CSV for tables);
diagnostics go to stderr.  Exit codes: 2 unknown algorithm / bad arguments,
3 instance parse failure, 4 algorithm precondition failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from gvp import generators
from gvp.decomposition import (
    BuildConfig,
    DecompositionFailure,
    build_decomposition,
    decomposition_from_json_dict,
    primal_graph,
    validate_decomposition,
)
from gvp.dp import dp_solve, dp_solve_smp, fptas
from gvp.instances import (
    GvpError,
    HyperInstance,
    Instance,
    Solution,
    evaluate_revenue,
    evaluate_revenue_smp,
    format_fraction,
    hyper_to_json,
    instance_to_json,
    load_instance,
    to_fraction,
)
from gvp.kpartite import Coloring, general_graph_approx, kpartite_approx
from gvp.lowdegree import solve_degree2, solve_degree4
from gvp.lp import lp_opt
from gvp.oracle import brute_force_opt, brute_force_opt_smp
from gvp.planar import ptas_planar
from gvp.sherali_adams import build_lp_r, gap_report, sa_round_deterministic, solve_lp_r

EXIT_BAD_ALGORITHM = 2
EXIT_PARSE_FAILURE = 3
EXIT_PRECONDITION = 4

ALGORITHMS = (
    "auto",
    "oracle",
    "dp",
    "fptas",
    "ptas-planar",
    "degree2",
    "degree4",
    "kpartite",
    "general",
    "lp-opt",
    "sa",
)


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _load(path):
    try:
        return load_instance(path)
    except (OSError, GvpError) as exc:
        raise _ParseFailure(str(exc))


class _ParseFailure(Exception):
    pass


def _default_cap(instance) -> int:
    budgets = (
        [b for _, _, b in instance.edges]
        if isinstance(instance, Instance)
        else [b for _, b in instance.hyperedges]
    )
    top = max(budgets, default=Fraction(0))
    if top.denominator != 1:
        raise GvpError("integral budgets required; pass --cap after rounding")
    return max(int(top), 1)


def _zero_solution(instance, label: str) -> Solution:
    from gvp.instances import PriceAssignment

    return Solution(PriceAssignment([0] * instance.n), Fraction(0), label)


def _solve_graph(instance: Instance, args) -> Solution:
    alg = args.alg
    if alg == "auto":
        if instance.max_degree() <= 2:
            alg = "degree2"
        else:
            try:
                build_decomposition(instance, 4)
                alg = "fptas"
            except DecompositionFailure:
                alg = "degree4" if instance.max_degree() <= 4 else "general"

    if alg == "oracle":
        if instance.m == 0 or all(b == 0 for _, _, b in instance.edges):
            return _zero_solution(instance, "oracle")
        return brute_force_opt(instance, args.cap or _default_cap(instance))
    if alg == "dp":
        if instance.m == 0 or all(b == 0 for _, _, b in instance.edges):
            return _zero_solution(instance, "dp")
        td = _decomposition_for(instance, args)
        return dp_solve(instance, td, args.cap or _default_cap(instance))
    if alg == "fptas":
        return fptas(
            instance,
            args.epsilon,
            args.max_width,
            build_config=BuildConfig(max_width_cap=max(8, args.max_width)),
        )
    if alg == "ptas-planar":
        return ptas_planar(instance, args.epsilon)
    if alg == "degree2":
        return solve_degree2(instance)
    if alg == "degree4":
        return solve_degree4(instance)
    if alg == "kpartite":
        if not args.coloring:
            raise GvpError("--alg kpartite requires --coloring")
        with open(args.coloring) as fh:
            doc = json.load(fh)
        coloring = Coloring(doc["k"], doc["class_of"])
        return kpartite_approx(instance, coloring, mode=args.mode, seed=args.seed)
    if alg == "general":
        return general_graph_approx(instance, seed=args.seed)
    if alg == "lp-opt":
        sol = lp_opt(instance)
        from gvp.instances import PriceAssignment

        prices = PriceAssignment(sol.assignment)
        return Solution(prices, evaluate_revenue(instance, prices), "lp-opt")
    if alg == "sa":
        if instance.m == 0 or all(b == 0 for _, _, b in instance.edges):
            return _zero_solution(instance, "sa")
        td = _decomposition_for(instance, args)
        r = args.r_level or td.width + 1
        cap = args.cap or _default_cap(instance)
        model = build_lp_r(instance, max(r, 2), cap)
        solution = solve_lp_r(model)
        return sa_round_deterministic(instance, td, model, solution)
    raise GvpError(f"algorithm {alg} not applicable")


def _decomposition_for(instance: Instance, args):
    if args.decomposition:
        with open(args.decomposition) as fh:
            td = decomposition_from_json_dict(instance, json.load(fh))
        report = validate_decomposition(instance, td)
        if not report.ok:
            raise GvpError(f"supplied decomposition invalid: {report.violation}")
        return td
    return build_decomposition(
        instance, args.max_width, BuildConfig(max_width_cap=max(8, args.max_width))
    )


def _solve_hyper(hyper: HyperInstance, args) -> Solution:
    alg = args.alg
    if alg in ("auto", "fptas"):
        alg = "dp"
    if alg == "oracle":
        if not hyper.hyperedges or all(b == 0 for _, b in hyper.hyperedges):
            return _zero_solution(hyper, "oracle-smp")
        return brute_force_opt_smp(hyper, args.cap or _default_cap(hyper))
    if alg == "dp":
        if not hyper.hyperedges or all(b == 0 for _, b in hyper.hyperedges):
            return _zero_solution(hyper, "dp-smp")
        primal = primal_graph(hyper)
        td = _decomposition_for(primal, args)
        return dp_solve_smp(hyper, td, args.cap or _default_cap(hyper))
    raise GvpError(f"algorithm {alg} does not support hypergraph instances")


def _print_solution(instance, solution: Solution, elapsed_ms: float, out) -> None:
    if isinstance(instance, Instance):
        check = evaluate_revenue(instance, solution.prices)
    else:
        check = evaluate_revenue_smp(instance, solution.prices)
    if check != solution.revenue:
        raise AssertionError("revenue re-verification failed; internal error")
    doc = {
        "algorithm": solution.algorithm,
        "revenue": format_fraction(solution.revenue),
        "prices": [format_fraction(p) for p in solution.prices.prices],
        "elapsed_ms": round(elapsed_ms, 3),
    }
    print(json.dumps(doc), file=out)


def cmd_solve(args) -> int:
    try:
        instance = _load(args.instance)
    except _ParseFailure as exc:
        return _fail(EXIT_PARSE_FAILURE, f"cannot read instance: {exc}")
    start = time.perf_counter()
    try:
        if isinstance(instance, Instance):
            solution = _solve_graph(instance, args)
        else:
            solution = _solve_hyper(instance, args)
    except (GvpError, DecompositionFailure) as exc:
        return _fail(EXIT_PRECONDITION, f"solver precondition failed: {exc}")
    elapsed = (time.perf_counter() - start) * 1000
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        _print_solution(instance, solution, elapsed, out)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_oracle(args) -> int:
    args.alg = "oracle"
    return cmd_solve(args)


def cmd_gen(args) -> int:
    try:
        coloring = None
        sidecar = None
        if args.generator == "path":
            instance = generators.gen_path(args.n, _parse_budgets(args), args.seed, args.budget_max)
        elif args.generator == "cycle":
            instance = generators.gen_cycle(args.n, _parse_budgets(args), args.seed, args.budget_max)
        elif args.generator == "star":
            instance = generators.gen_star(args.n, _parse_budgets(args), args.seed, args.budget_max)
        elif args.generator == "grid":
            instance = generators.gen_grid(args.rows, args.cols, args.budget, args.seed, args.budget_max)
        elif args.generator == "random-sp":
            instance = generators.gen_random_sp(args.ops, args.seed, args.budget_max)
        elif args.generator == "kpartite-random":
            instance, coloring = generators.gen_kpartite_random(
                args.k, args.per_class, args.edge_prob, args.seed, args.budget_max
            )
        elif args.generator == "vc-reduction":
            try:
                graph = _load(args.graph)
            except _ParseFailure as exc:
                return _fail(EXIT_PARSE_FAILURE, f"cannot read graph: {exc}")
            if not isinstance(graph, Instance):
                return _fail(EXIT_PARSE_FAILURE, "vc-reduction needs a graph instance")
            instance, sidecar = generators.gen_vc_reduction(graph)
        else:
            return _fail(EXIT_BAD_ALGORITHM, f"unknown generator {args.generator}")
    except GvpError as exc:
        return _fail(EXIT_PRECONDITION, f"generator failed: {exc}")

    text = instance_to_json(instance) if isinstance(instance, Instance) else hyper_to_json(instance)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if sidecar is not None:
            with open(args.out + ".sidecar.json", "w") as fh:
                json.dump(sidecar, fh, sort_keys=True)
                fh.write("\n")
        if coloring is not None:
            with open(args.out + ".coloring.json", "w") as fh:
                json.dump({"k": coloring.k, "class_of": list(coloring.class_of)}, fh, sort_keys=True)
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if sidecar is not None:
            print(f"sidecar (use --out to save): {json.dumps(sidecar, sort_keys=True)}", file=sys.stderr)
    return 0


def _parse_budgets(args):
    if getattr(args, "budgets", None):
        return [to_fraction(tok) for tok in args.budgets.split(",")]
    return None


def cmd_bench(args) -> int:
    try:
        with open(args.manifest) as fh:
            manifest = json.load(fh)
        instances = manifest.get("instances", [])
        algorithms = manifest.get("algorithms", [])
        with_oracle = bool(manifest.get("oracle", False))
        epsilon = to_fraction(manifest.get("epsilon", "1/10"))
        cap = manifest.get("cap")
    except (OSError, json.JSONDecodeError, GvpError) as exc:
        return _fail(EXIT_PARSE_FAILURE, f"cannot read manifest: {exc}")

    header = ["instance", "algorithm", "revenue"]
    if with_oracle:
        header += ["oracle", "ratio"]
    header.append("elapsed_ms")
    lines = [",".join(header)]
    for path in instances:
        try:
            instance = _load(path)
        except _ParseFailure as exc:
            return _fail(EXIT_PARSE_FAILURE, f"cannot read {path}: {exc}")
        oracle_value = None
        if with_oracle:
            try:
                if isinstance(instance, Instance):
                    oracle_value = brute_force_opt(instance, cap or _default_cap(instance)).revenue
                else:
                    oracle_value = brute_force_opt_smp(instance, cap or _default_cap(instance)).revenue
            except GvpError as exc:
                return _fail(EXIT_PRECONDITION, f"oracle on {path}: {exc}")
        for alg in algorithms:
            ns = argparse.Namespace(
                alg=alg,
                cap=cap,
                epsilon=epsilon,
                max_width=args.max_width,
                decomposition=None,
                coloring=None,
                mode="derandomized",
                seed=0,
                r_level=None,
            )
            start = time.perf_counter()
            try:
                if isinstance(instance, Instance):
                    sol = _solve_graph(instance, ns)
                else:
                    sol = _solve_hyper(instance, ns)
            except (GvpError, DecompositionFailure) as exc:
                return _fail(EXIT_PRECONDITION, f"{alg} on {path}: {exc}")
            elapsed = (time.perf_counter() - start) * 1000
            row = [path, sol.algorithm, format_fraction(sol.revenue)]
            if with_oracle:
                ratio = "" if oracle_value in (None, 0) else format_fraction(sol.revenue / oracle_value)
                row += [format_fraction(oracle_value), ratio]
            row.append(f"{elapsed:.3f}")
            lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    checks = []

    def record(name, ok, witness=""):
        checks.append({"check": name, "ok": bool(ok), "witness": witness})

    try:
        instance = _load(args.instance)
        record("instance", True)
    except _ParseFailure as exc:
        record("instance", False, str(exc))
        print(json.dumps({"ok": False, "checks": checks}))
        return 1

    if args.decomposition:
        if not isinstance(instance, Instance):
            base = primal_graph(instance)
        else:
            base = instance
        try:
            with open(args.decomposition) as fh:
                td = decomposition_from_json_dict(base, json.load(fh))
            report = validate_decomposition(base, td)
            record("decomposition", report.ok, report.violation or "")
        except (OSError, json.JSONDecodeError, GvpError) as exc:
            record("decomposition", False, str(exc))

    if args.coloring:
        try:
            with open(args.coloring) as fh:
                doc = json.load(fh)
            coloring = Coloring(doc["k"], doc["class_of"])
            if isinstance(instance, Instance):
                coloring.check_proper(instance)
            record("coloring", True)
        except (OSError, json.JSONDecodeError, KeyError, GvpError) as exc:
            record("coloring", False, str(exc))

    ok = all(c["ok"] for c in checks)
    print(json.dumps({"ok": ok, "checks": checks}))
    return 0 if ok else 1


def cmd_sa_gap(args) -> int:
    try:
        instance = _load(args.instance)
    except _ParseFailure as exc:
        return _fail(EXIT_PARSE_FAILURE, f"cannot read instance: {exc}")
    if not isinstance(instance, Instance):
        return _fail(EXIT_PRECONDITION, "sa-gap needs a graph instance")
    try:
        r_values = [int(tok) for tok in args.r.split(",")]
        rows = gap_report(instance, r_values, args.cap or _default_cap(instance))
    except GvpError as exc:
        return _fail(EXIT_PRECONDITION, f"sa-gap failed: {exc}")
    lines = ["r,lp_value,integral_opt,gap"]
    for row in rows:
        gap = "" if row.gap is None else format_fraction(row.gap)
        lines.append(
            f"{row.r},{format_fraction(row.lp_value)},{format_fraction(row.integral_opt)},{gap}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _add_solver_flags(p):
    p.add_argument("--cap", type=int, default=None, help="price cap (defaults to max budget)")
    p.add_argument("--epsilon", type=to_fraction, default=Fraction(1, 10))
    p.add_argument("--max-width", type=int, default=8, dest="max_width")
    p.add_argument("--decomposition", help="decomposition JSON to bypass construction")
    p.add_argument("--coloring", help="coloring JSON for --alg kpartite")
    p.add_argument("--mode", choices=("derandomized", "randomized"), default="derandomized")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, default=None, dest="r_level", help="relaxation level for --alg sa")
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gvp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--alg", choices=ALGORITHMS, default="auto")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force optimum of an instance file")
    p.add_argument("instance")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument(
        "generator",
        choices=("path", "cycle", "star", "grid", "random-sp", "kpartite-random", "vc-reduction"),
    )
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.add_argument("--ops", type=int, default=6)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--per-class", type=int, default=2, dest="per_class")
    p.add_argument("--edge-prob", type=float, default=0.5, dest="edge_prob")
    p.add_argument("--budgets", help="comma-separated exact budgets")
    p.add_argument("--budget", default=None, help="fixed budget for every consumer")
    p.add_argument("--budget-max", type=int, default=10, dest="budget_max")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph", help="input graph for vc-reduction")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a benchmark manifest, emit CSV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--max-width", type=int, default=8, dest="max_width")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="check instance/decomposition/coloring files")
    p.add_argument("instance")
    p.add_argument("--decomposition")
    p.add_argument("--coloring")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sa-gap", help="relaxation-level gap table as CSV")
    p.add_argument("instance")
    p.add_argument("--r", default="2,3")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sa_gap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

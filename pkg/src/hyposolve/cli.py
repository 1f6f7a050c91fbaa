"""Command-line front end.

Subcommands: ``solve`` a problem JSON, ``poly`` emit a polynomial family as
SLP JSON, ``check`` a hyperbolicity certificate, ``gen`` a benchmark
instance, ``bench`` a suite file.  Exit codes: 0 Optimal (or the expected
status), 2 Infeasible, 3 Unbounded, 4 IterationLimit, 5 NumericalFailure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench as _bench
from . import builders
from .cone import HyperbolicCone, check_hyperbolicity
from .monomial import mono_to_slp
from .problem import load_problem, problem_to_dict, save_problem
from .slp import SlpProgram
from .solver import EXIT_CODES, Settings, solve


def _vector(text):
    return np.array([float(v) for v in text.replace(",", " ").split()])


def _write_json(data, path):
    if path == "-" or path is None:
        json.dump(data, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            json.dump(data, fh, sort_keys=True)


def _cmd_solve(args):
    problem = load_problem(args.problem)
    settings = Settings(tol=args.tol, max_iter=args.max_iter, xi=args.xi)
    result = solve(problem, settings)
    print(f"status      : {result.status}")
    print(f"iterations  : {result.iterations}")
    print(f"objective   : {result.objective:.12g}")
    print(f"residuals   : primal {result.primal_feas:.3e}  dual {result.dual_feas:.3e}"
          f"  gap {result.gap:.3e}")
    print(f"wall time   : {result.wall_time:.3f} s")
    if result.message:
        print(f"message     : {result.message}")
    if args.log:
        result.write_log(args.log)
    if args.output:
        _write_json(result.to_dict(), args.output)
    if args.expect and result.status == args.expect:
        return 0
    return EXIT_CODES[result.status]


def _cmd_poly(args):
    fam = args.family
    if fam == "esp":
        program = builders.esp(args.n, args.k)
    elif fam == "vamos":
        program = builders.vamos()
    elif fam == "vamos-like":
        program = builders.vamos_like(args.m)
    elif fam == "linprod":
        program = builders.product_of_linear_forms(_matrix(args.rows))
    elif fam == "dirderiv":
        with open(args.slp) as fh:
            base = SlpProgram.from_dict(json.load(fh))
        program = builders.directional_derivative(base, _vector(args.dir))
    elif fam == "compose":
        program = builders.compose_esp_with_linear_forms(
            args.k, _matrix(args.rows), _vector(args.dir))
    elif fam == "spantree":
        graph = builders.SimpleGraph(num_vertices=args.vertices,
                                     edges=_edges(args.edges))
        program = mono_to_slp(builders.spanning_tree_poly(graph))
    else:  # unreachable through argparse choices
        raise SystemExit(f"unknown family {fam}")
    _write_json(program.to_dict(), args.output)
    return 0


def _matrix(text):
    return np.array([[float(v) for v in row.replace(",", " ").split()]
                     for row in text.split(";")])


def _edges(text):
    return [tuple(int(v) for v in pair.split("-")) for pair in text.split(",")]


def _cmd_check(args):
    with open(args.slp) as fh:
        program = SlpProgram.from_dict(json.load(fh))
    cone = HyperbolicCone(program, _vector(args.dir))
    report = check_hyperbolicity(cone, trials=args.trials, rng_seed=args.seed)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"{verdict}: max imaginary residue {report.max_residue:.3e} over "
          f"{report.trials} random lines (tolerance {report.tol:.0e})")
    if args.json:
        _write_json({"passed": report.passed, "trials": report.trials,
                     "max_residue": report.max_residue, "tol": report.tol,
                     "worst_line": list(report.worst_line)}, args.json)
    return 0 if report.passed else 1


def _cmd_gen(args):
    params = dict(kv.split("=", 1) for kv in args.param)
    problem = _bench.generate(args.family, params, args.seed)
    save_problem(problem, args.output)
    print(f"wrote {args.output}: {problem.name} "
          f"({problem.embedding_dim} rows, {problem.num_vars} variables)")
    return 0


def _cmd_bench(args):
    with open(args.suite) as fh:
        raw = json.load(fh)
    specs = [_bench.InstanceSpec(family=s["family"], params=s.get("params", {}),
                                 seed=int(s.get("seed", 0)),
                                 reps=int(s.get("reps", 1)))
             for s in raw]
    settings = Settings(tol=args.tol, max_iter=args.max_iter)
    records = _bench.run_suite(specs, settings)
    _bench.records_to_csv(records, args.output)
    table = _bench.aggregate_markdown(_bench.aggregate(records))
    print(table, end="")
    if args.markdown:
        with open(args.markdown, "w") as fh:
            fh.write(table)
    bad = [r for r in records if not r.status_ok]
    if bad:
        print(f"{len(bad)} run(s) did not match their expected status",
              file=sys.stderr)
        return 5
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hyposolve",
        description="Hyperbolic programming via straight-line programs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem JSON file")
    p.add_argument("problem")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--xi", type=float, default=2.0)
    p.add_argument("--log", help="write the iteration log CSV here")
    p.add_argument("--output", "-o", help="write the result JSON here")
    p.add_argument("--expect", help="exit 0 if the status matches")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("poly", help="emit a polynomial family as SLP JSON")
    p.add_argument("family", choices=["esp", "vamos", "vamos-like", "linprod",
                                      "dirderiv", "compose", "spantree"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--rows", help="matrix rows, e.g. '2 0 -1; 1 -3 4'")
    p.add_argument("--slp", help="input SLP JSON (dirderiv)")
    p.add_argument("--dir", help="direction vector, e.g. '1,1,1'")
    p.add_argument("--vertices", type=int, help="vertex count (spantree)")
    p.add_argument("--edges", help="edge list, e.g. '0-1,1-2,0-2' (spantree)")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=_cmd_poly)

    p = sub.add_parser("check", help="randomized hyperbolicity certificate")
    p.add_argument("slp")
    p.add_argument("--dir", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="also write the report JSON here")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("family", choices=list(_bench.FAMILIES))
    p.add_argument("--param", "-p", action="append", default=[],
                   metavar="KEY=VALUE", help="family parameter, repeatable")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="run a suite JSON and aggregate results")
    p.add_argument("suite")
    p.add_argument("--output", "-o", required=True, help="per-run CSV")
    p.add_argument("--markdown", help="aggregate markdown table")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

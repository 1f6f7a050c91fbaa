"""Compare the compiled and pure evaluation kernels on the hot sweeps.

Usage:  python3 benchmarks/bench_kernels.py [--n 200] [--k 20] [--repeat 5]

Times one forward evaluation, one gradient (forward + reverse sweep), one
full Hessian (batched reverse-over-forward), and a 64-point batched
evaluation of e_k^n, for each available backend.
"""

import argparse
import time

import numpy as np

from hyposolve import esp
from hyposolve.backend import get_kernels


def time_call(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(kernels, prog, x, X, repeat):
    ops, ia, ib, coef = prog.arrays
    m = prog.num_vars
    out = prog.output
    tape = kernels.forward(ops, ia, ib, coef, m, x)
    return {
        "forward": time_call(lambda: kernels.forward(ops, ia, ib, coef, m, x),
                             repeat),
        "gradient": time_call(
            lambda: kernels.reverse_grad(
                ops, ia, ib, coef, m,
                kernels.forward(ops, ia, ib, coef, m, x), out), repeat),
        "hessian": time_call(
            lambda: kernels.hessian_sweep(ops, ia, ib, coef, m, tape, out),
            repeat),
        "batch64": time_call(
            lambda: kernels.forward_batch(ops, ia, ib, coef, m, X), repeat),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    prog = esp(args.n, args.k)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(args.n)
    X = rng.standard_normal((64, args.n))
    print(f"e_{args.k}^{args.n}: {prog.node_count} nodes, {args.n} variables\n")

    results = {}
    for name in ("pure", "compiled"):
        try:
            kernels = get_kernels(name)
        except ImportError:
            print(f"{name:>9}: not available")
            continue
        results[name] = bench_backend(kernels, prog, x, X, args.repeat)

    cols = ["forward", "gradient", "hessian", "batch64"]
    header = f"{'backend':>9} " + " ".join(f"{c:>12}" for c in cols)
    print(header)
    for name, res in results.items():
        print(f"{name:>9} " + " ".join(f"{res[c] * 1e3:>10.3f}ms" for c in cols))
    if len(results) == 2:
        print(f"{'speedup':>9} " + " ".join(
            f"{results['pure'][c] / results['compiled'][c]:>11.1f}x"
            for c in cols))


if __name__ == "__main__":
    main()

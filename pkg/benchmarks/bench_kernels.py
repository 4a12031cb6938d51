"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Reports the best-of-``repeat`` wall time for each kernel in isolation and for
the two callers that spend most of their time in them: one Chernoff program
solve and one dense Jacobi diagonalization.
"""
import argparse
import json
import timeit
from contextlib import contextmanager

import numpy as np

from sbm_spectral import _kernels
from sbm_spectral._kernels import _fallback
from sbm_spectral.frontier import ChernoffProgram, solve_chernoff_program
from sbm_spectral.linalg import jacobi_eigh

try:
    from sbm_spectral._kernels import _ckernels
except ImportError:
    _ckernels = None


@contextmanager
def backend(impl):
    saved = _kernels.solve_tridiagonal, _kernels.jacobi_sweep
    _kernels.solve_tridiagonal, _kernels.jacobi_sweep = impl.solve_tridiagonal, impl.jacobi_sweep
    try:
        yield
    finally:
        _kernels.solve_tridiagonal, _kernels.jacobi_sweep = saved


def tridiagonal_case(size, rng):
    lower = rng.uniform(-1, 1, size - 1)
    upper = lower.copy()
    diag = 2.5 + rng.uniform(0, 1, size)
    rhs = rng.standard_normal(size)
    return lambda: _kernels.solve_tridiagonal(lower, diag, upper, rhs)


def jacobi_case(size, rng):
    B = rng.standard_normal((size, size))
    S = B + B.T

    def run():
        A = np.array(S, order="C")
        V = np.eye(size)
        _kernels.jacobi_sweep(A, V)
    return run


def cases(rng):
    prog = ChernoffProgram.build(500, 30, 20, 60)
    B = rng.standard_normal((40, 40))
    S = B + B.T
    return {
        "tridiagonal n=1000": tridiagonal_case(1000, rng),
        "tridiagonal n=20000": tridiagonal_case(20000, rng),
        "jacobi sweep 30x30": jacobi_case(30, rng),
        "jacobi sweep 80x80": jacobi_case(80, rng),
        "chernoff solve n=500 k=60": lambda: solve_chernoff_program(prog),
        "jacobi_eigh 40x40": lambda: jacobi_eigh(S),
    }


def best_time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10**5:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write the timings here")
    args = parser.parse_args(argv)

    impls = {"python": _fallback}
    if _ckernels is not None:
        impls["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the fallback only")

    results = {}
    for name in cases(np.random.default_rng(0)):
        results[name] = {}
        for label, impl in impls.items():
            fn = cases(np.random.default_rng(0))[name]
            with backend(impl):
                results[name][label] = best_time(fn, args.repeat)

    print(f"{'case':<28}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, t in results.items():
        cy = t.get("cython")
        cy_text = f"{cy * 1e3:10.3f}ms" if cy else f"{'-':>12}"
        speed = f"{t['python'] / cy:9.1f}x" if cy else f"{'-':>10}"
        print(f"{name:<28}{t['python'] * 1e3:10.3f}ms{cy_text}{speed}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

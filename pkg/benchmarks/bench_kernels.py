"""Time the numba and numpy twins of each batch kernel on the same inputs.

    python benchmarks/bench_kernels.py [--rows 200000] [--repeat 5]

The first numba call (compilation or cache load) is excluded; both outputs are
compared before timing.
"""
import argparse
import time

import numpy as np

from binteam.kernels import IMPLEMENTATIONS, USING_NUMBA
from binteam.polytopes import VERTEX_MATRIX
from binteam.quantum import random_strategy


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=200_000, help="weight rows for the integer kernels")
    parser.add_argument("--strategies", type=int, default=20_000, help="strategies for the occupation kernel")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    weights = rng.integers(-10**6, 10**6, size=(args.rows, 16), dtype=np.int64)
    vertices = np.ascontiguousarray(VERTEX_MATRIX)
    strats = [random_strategy(rng) for _ in range(args.strategies)]
    rho = np.ascontiguousarray(np.stack([s.rho for s in strats]))
    pa = np.ascontiguousarray(np.stack([s.proj_a for s in strats]))
    pb = np.ascontiguousarray(np.stack([s.proj_b for s in strats]))
    inputs = {
        "vertex_costs": (weights, vertices),
        "central_costs": (weights,),
        "occupation_batch": (rho, pa, pb),
    }

    print(f"numba active: {USING_NUMBA}")
    print(f"{'kernel':<18} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for name, (numpy_fn, numba_fn) in IMPLEMENTATIONS.items():
        data = inputs[name]
        a, b = numpy_fn(*data), numba_fn(*data)  # warm-up and cross-check
        if not np.allclose(a, b, atol=1e-12):
            raise SystemExit(f"{name}: implementations disagree")
        t_np = best_of(numpy_fn, data, args.repeat)
        t_nb = best_of(numba_fn, data, args.repeat)
        print(f"{name:<18} {1e3 * t_np:>11.2f} {1e3 * t_nb:>11.2f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()

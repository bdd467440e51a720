#!/usr/bin/env python3
"""Benchmark: compiled integer-rank kernel vs the pure-Python fallback.

Workloads mirror what the solvers actually feed the kernel:

* small-entry matrices (the compiled int64 path applies end to end),
* controllability-style matrices from the hitting-set compiler, whose
  entries overflow int64 and exercise the compiled object path,
* one full deterministic greedy solve per kernel.

Usage: python benchmarks/bench_rank.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

from minctrl._kernels import pure

try:
    from minctrl._kernels import _fastrank
except ImportError:
    _fastrank = None


def small_matrices(count: int, n: int, seed: int) -> list[list[list[int]]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = [[rng.randint(-99, 99) for _ in range(n)] for _ in range(n)]
        if rng.random() < 0.3:
            m[-1] = [2 * x for x in m[0]]
        out.append(m)
    return out


def controllability_matrices(count: int, seed: int) -> list[list[list[int]]]:
    from minctrl.greedy import _ExactPowers
    from minctrl.reductions import HittingSetInstance, build_reduction

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.randint(3, 5)
        sets = [sorted(rng.sample(range(1, m + 1), rng.randint(1, m)))
                for _ in range(rng.randint(2, 5))]
        for e in range(1, m + 1):
            if not any(e in s for s in sets):
                sets[rng.randrange(len(sets))].append(e)
        inst = HittingSetInstance.from_sets(m, [sorted(set(s)) for s in sets])
        powers = _ExactPowers(build_reduction(inst).system_matrix)
        b = [rng.randint(1, 9) for _ in range(powers.n)]
        out.append(powers.vector_columns(b))
    return out


def time_kernel(fn, matrices, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for m in matrices:
            fn(m)
        best = min(best, time.perf_counter() - start)
    return best


def time_solve(backend_fn) -> float:
    import minctrl._kernels as kernels
    from minctrl.greedy import deterministic_greedy_vector
    from minctrl.reductions import HittingSetInstance, build_reduction

    inst = HittingSetInstance.from_sets(
        5, [[1, 2], [2, 3], [3, 4], [4, 5], [1, 5], [1, 2, 3, 4, 5]]
    )
    system = build_reduction(inst).system_matrix
    original = kernels.integer_rank
    kernels.integer_rank = backend_fn
    # greedy module binds the name at import; patch it too
    import minctrl.greedy as greedy

    greedy.integer_rank = backend_fn
    try:
        start = time.perf_counter()
        result = deterministic_greedy_vector(system, "exact")
        elapsed = time.perf_counter() - start
        assert result.controllable
    finally:
        kernels.integer_rank = original
        greedy.integer_rank = original
    return elapsed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _fastrank is None:
        print("compiled kernel not built (run: python setup.py build_ext --inplace)")
        print("nothing to compare; pure backend is active.")
        return

    workloads = [
        ("small ints 10x10 (x200)", small_matrices(200, 10, seed=1)),
        ("small ints 14x14 (x200)", small_matrices(200, 14, seed=2)),
        ("ctrb big ints (x50)", controllability_matrices(50, seed=3)),
    ]
    print(f"{'workload':<28} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for label, matrices in workloads:
        for m in matrices:
            assert pure.integer_rank(m) == _fastrank.integer_rank(m)
        t_pure = time_kernel(pure.integer_rank, matrices, args.repeat)
        t_fast = time_kernel(_fastrank.integer_rank, matrices, args.repeat)
        print(f"{label:<28} {t_pure*1e3:>8.1f}ms {t_fast*1e3:>8.1f}ms "
              f"{t_pure/t_fast:>8.1f}x")

    t_pure = time_solve(pure.integer_rank)
    t_fast = time_solve(_fastrank.integer_rank)
    print(f"{'greedy solve 12x12 exact':<28} {t_pure*1e3:>8.1f}ms "
          f"{t_fast*1e3:>8.1f}ms {t_pure/t_fast:>8.1f}x")


if __name__ == "__main__":
    main()

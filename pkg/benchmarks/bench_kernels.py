"""Timing comparison of the compiled kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from adiaquant import backend
from adiaquant.hamiltonian import build_pair, initial_state
from adiaquant.instance import ring_instance
from adiaquant.trotter import TrotterBudget, compile_sequence


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_matvec(impl, n, iters):
    pair = build_pair(ring_instance(n))
    x = initial_state(n).amplitudes
    out = np.empty_like(x)

    def run():
        for _ in range(iters):
            impl.pair_matvec(pair._diag, pair._weights, 0.4, x, out, n)

    return timeit(run)


def bench_rk4(impl, n, steps):
    pair = build_pair(ring_instance(n))
    svals = np.linspace(0.0, 1.0, 2 * steps + 1)
    psi = initial_state(n).amplitudes.copy()

    def run():
        impl.rk4_propagate(pair._diag, pair._weights, svals, 1e-3, psi, n)

    return timeit(run, repeats=1)


def bench_gates(impl, n):
    inst = ring_instance(n)
    budget = TrotterBudget(512, 4, 10.0 / 512, 0.05, {})
    seq = compile_sequence(inst, 10.0, budget)
    dim = 1 << n
    idx = np.arange(dim)
    flags = np.array(
        [c.violations(idx, n) for c in inst.clauses], dtype=np.uint8
    )
    psi = initial_state(n).amplitudes.copy()

    def run():
        impl.execute_gates(psi, seq.kinds, seq.targets, seq.angles, flags, n)

    return timeit(run, repeats=1), len(seq)


def main():
    impls = backend.implementations()
    print(f"selected backend: {backend.BACKEND}")
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name, _ in impls)
          + f"{'speedup':>10}")

    rows = [
        ("matvec n=10 x2000", lambda impl: bench_matvec(impl, 10, 2000)),
        ("matvec n=16 x50", lambda impl: bench_matvec(impl, 16, 50)),
        ("rk4 n=8, 20k steps", lambda impl: bench_rk4(impl, 8, 20_000)),
    ]
    for label, bench in rows:
        times = [bench(impl) for _, impl in impls]
        speedup = times[-1] / times[0] if len(times) > 1 else float("nan")
        print(f"{label:<28}"
              + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
              + f"{speedup:>9.1f}x")

    label = "gates n=6"
    times = []
    count = 0
    for _, impl in impls:
        t, count = bench_gates(impl, 6)
        times.append(t)
    speedup = times[-1] / times[0] if len(times) > 1 else float("nan")
    print(f"{label + f' ({count} gates)':<28}"
          + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
          + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()

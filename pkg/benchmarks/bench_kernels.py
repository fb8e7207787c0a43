#!/usr/bin/env python3
"""Benchmark the packed GF(2) kernels: numba versus pure numpy.

Runs the same workloads through both implementation tables in one
process (no env fiddling needed) and prints a timing table.  The
jitted kernels are warmed before timing so compilation is excluded.

    python3 benchmarks/bench_kernels.py [--sizes 32 96 192] [--repeat 5]
"""

import argparse
import time

import numpy as np

from atomcat import bitmat


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(impl, n, repeat, rng):
    dense = rng.integers(0, 2, size=(n, n)).astype(np.uint8)
    packed = np.ascontiguousarray(bitmat.pack_rows(dense, n))
    return time_call(lambda: impl["rref"](packed, n), repeat)


def bench_cyclic(impl, n, repeat, rng):
    # a shift action plus two random sparse actions: the closure walks
    # the whole space, which is the lattice-enumeration inner loop
    shift = np.zeros((n, n), dtype=np.uint8)
    for i in range(n - 1):
        shift[i, i + 1] = 1
    acts_dense = [shift]
    for _ in range(2):
        a = (rng.random((n, n)) < 2.0 / n).astype(np.uint8)
        acts_dense.append(a)
    acts = np.ascontiguousarray(
        np.stack([bitmat.pack_rows(a, n) for a in acts_dense]))
    seed = bitmat.pack_vec(np.eye(n, dtype=np.uint8)[0], n)
    return time_call(lambda: impl["cyclic_closure"](seed, acts, n), repeat)


def bench_vector_scan(impl, n_dim, repeat, rng):
    # cyclic closures over every nonzero vector of a small module:
    # the exhaustive lattice seed scan
    a = (rng.random((n_dim, n_dim)) < 0.3).astype(np.uint8)
    acts = np.ascontiguousarray(bitmat.pack_rows(a, n_dim)[None, :, :])

    def run():
        for vec in bitmat.enumerate_nonzero_vectors(n_dim):
            impl["cyclic_closure"](vec, acts, n_dim)

    return time_call(run, repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[32, 96, 192])
    parser.add_argument("--scan-dim", type=int, default=12)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    tables = {"numpy": bitmat.IMPL_NUMPY}
    if bitmat.IMPL_NUMBA is not None:
        tables["numba"] = bitmat.IMPL_NUMBA
        # warm the jit once per kernel
        rng = np.random.default_rng(0)
        bench_rref(bitmat.IMPL_NUMBA, 8, 1, rng)
        bench_cyclic(bitmat.IMPL_NUMBA, 8, 1, rng)
    else:
        print("numba unavailable: benchmarking the numpy path only")

    rows = []
    for n in args.sizes:
        for name, impl in tables.items():
            rng = np.random.default_rng(42)
            rows.append((f"rref {n}x{n}", name,
                         bench_rref(impl, n, args.repeat, rng)))
    for n in args.sizes:
        for name, impl in tables.items():
            rng = np.random.default_rng(43)
            rows.append((f"cyclic closure n={n}", name,
                         bench_cyclic(impl, n, args.repeat, rng)))
    for name, impl in tables.items():
        rng = np.random.default_rng(44)
        rows.append((f"seed scan 2^{args.scan_dim}-1 closures", name,
                     bench_vector_scan(impl, args.scan_dim, 1, rng)))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  backend  best time")
    print("-" * (width + 26))
    base = {}
    for workload, name, t in rows:
        speedup = ""
        if name == "numpy":
            base[workload] = t
        elif workload in base and t > 0:
            speedup = f"  ({base[workload] / t:5.1f}x vs numpy)"
        print(f"{workload:<{width}}  {name:<7}  {t * 1e3:9.3f} ms{speedup}")


if __name__ == "__main__":
    main()

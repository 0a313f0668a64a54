"""Compare the numba and numpy variants of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

The numba variants are warmed up once before timing so compilation is not
counted. Setting ``RELPHASE_NO_JIT=1`` only changes which variant the library
uses; this script always times both.
"""

import argparse
import timeit

import numpy as np

from relphase import kernels


def _cases(rng):
    def vecs(n, d):
        return np.ascontiguousarray(rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d)))

    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = np.ascontiguousarray(a @ a.conj().T)
    rho2 = np.ascontiguousarray(rho[:2, :2])
    factors = 0.5 * np.exp(1j * rng.uniform(-np.pi, np.pi, 100_000))
    return [
        ("cyclic_overlaps  n=100000 d=8", "cyclic_overlaps", (vecs(100_000, 8),)),
        ("sandwich_overlaps n=20000 d=8", "sandwich_overlaps", (vecs(20_000, 8), rho)),
        ("chain_product    n=100000", "chain_product", (factors,)),
        ("connection_sum   n=20001 d=2", "connection_sum", (vecs(20_001, 2), rho2)),
        ("connection_sum   n=20001 d=8", "connection_sum", (vecs(20_001, 8), rho)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for label, name, inputs in _cases(rng):
        nb = getattr(kernels, f"_{name}_nb")
        npy = getattr(kernels, f"_{name}_np")
        nb(*inputs)
        t_nb = min(timeit.repeat(lambda: nb(*inputs), number=1, repeat=args.repeat))
        t_np = min(timeit.repeat(lambda: npy(*inputs), number=1, repeat=args.repeat))
        print(f"{label:32s} {1e3 * t_nb:11.3f} {1e3 * t_np:11.3f} {t_np / t_nb:8.2f}x")


if __name__ == "__main__":
    main()

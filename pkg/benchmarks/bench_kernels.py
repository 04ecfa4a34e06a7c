#!/usr/bin/env python3
"""Time the hot kernels under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from bogomolov import kernels
from bogomolov.core import annihilators, closure_dims
from bogomolov.experiments import subspace_B
from bogomolov.exterior import basis_index, quadric_system
from bogomolov.grassmannian import (
    iter_batches,
    projective_points,
    rank_table,
    sample_rref_batch,
    sparse_first_points,
)
from bogomolov.linalg import Field
from bogomolov.orbits import gl_generators, wedge_square_matrix


def census_d4_r3():
    B = np.concatenate([b for _, b in iter_batches(3, 6, 3)])
    return lambda: closure_dims(B, 4, 3)


def point_closure_d5():
    rng = np.random.default_rng(0)
    B = sample_rref_batch(4, 10, 5, 2000, rng)
    Q = quadric_system(B, Field.prime(5), 5)
    pts = projective_points(4, 5)
    return lambda: kernels.point_closure(Q, pts, 5)


def pencil_closure_d6():
    rng = np.random.default_rng(0)
    B = sample_rref_batch(12, 15, 3, 500, rng)
    ann = annihilators(B, 3)
    idx = basis_index(6)
    vp = sparse_first_points(6, 3)
    return lambda: kernels.pencil_closure(ann, idx.pair_i, idx.pair_j, 6, vp, 3)


def orbit_bfs_d4():
    tab = rank_table(3, 6, 3)
    gens = np.stack([wedge_square_matrix(g, 3) for g in gl_generators(4, 3)])
    seeds = tab.rank(subspace_B(3).basis[None])
    return lambda: kernels.orbit_bfs(seeds, gens, 3, tab)


def rref_batch():
    A = np.random.default_rng(0).integers(0, 101, size=(20000, 6, 10))
    return lambda: kernels.rref_batch(A, 101)


CASES = {
    "census d=4 r=3 p=3 (33880 subspaces)": census_d4_r3,
    "point closure d=5 r=4 p=5 (2000)": point_closure_d5,
    "pencil closure d=6 r=12 p=3 (500)": pencil_closure_d6,
    "orbit BFS of B in Gr(3,6) p=3": orbit_bfs_d4,
    "rref 20000 x 6x10 mod 101": rref_batch,
}


def timed(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available()
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, make in CASES.items():
        fn = make()
        row = {}
        for b in backends:
            with kernels.use_backend(b):
                row[b] = timed(fn, args.repeat)
        speed = row["numpy"] / row["numba"] if "numba" in row else float("nan")
        print(f"{name:40s}" + "".join(f"{row[b] * 1e3:10.1f}ms" for b in backends) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()

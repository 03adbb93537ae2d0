"""Benchmark the dense-oracle kernels: numba JIT vs pure-numpy fallback.

The workload is the hot path of the entanglement-measure oracle: for every
bipartition of an n-site state, build the bit-packed row/column index maps
and gather the amplitude vector into the cut matrix.  Run with

    python benchmarks/bench_kernels.py [n]

The SVD row at the end shows the LAPACK share of the full oracle, for
perspective on what the kernels can and cannot buy.
"""

import sys
import time

import numpy as np

from rvbpoly import _kernels
from rvbpoly.multilinear_poly import all_cuts


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(n: int) -> None:
    rng = np.random.default_rng(0)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    cuts = list(all_cuts(n))
    print(f"n={n} sites, {len(cuts)} cuts, backend available: {_kernels.backend_name()}")

    def pack_all(pack):
        for cut in cuts:
            pack(n, cut.mask_E)

    def gather_all(pack, gather):
        for cut in cuts:
            rows, cols = pack(n, cut.mask_E)
            gather(amps, rows, cols, 1 << cut.size_E, 1 << cut.size_E_prime)

    def svd_all(pack, gather):
        for cut in cuts:
            rows, cols = pack(n, cut.mask_E)
            m = gather(amps, rows, cols, 1 << cut.size_E, 1 << cut.size_E_prime)
            np.linalg.svd(m, compute_uv=False)

    variants = [("numpy", _kernels._pack_cut_indices_numpy, _kernels._gather_cut_matrix_numpy)]
    if _kernels.HAS_NUMBA:
        # trigger compilation outside the timed region
        _kernels._pack_cut_indices_numba(4, 0b0101)
        _kernels._gather_cut_matrix_numba(amps[:16], *_kernels._pack_cut_indices_numba(4, 0b0101), 4, 4)
        variants.append(("numba", _kernels._pack_cut_indices_numba, _kernels._gather_cut_matrix_numba))

    print(f"{'path':<8}{'pack indices':>14}{'pack+gather':>14}{'pack+gather+svd':>17}")
    for name, pack, gather in variants:
        t_pack = timeit(lambda: pack_all(pack))
        t_gather = timeit(lambda: gather_all(pack, gather))
        t_svd = timeit(lambda: svd_all(pack, gather))
        print(f"{name:<8}{t_pack:>13.3f}s{t_gather:>13.3f}s{t_svd:>16.3f}s")


if __name__ == "__main__":
    run(int(sys.argv[1]) if len(sys.argv) > 1 else 12)

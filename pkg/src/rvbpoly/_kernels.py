"""Hot kernels for the dense oracle: bit-packed index maps and matrix gathers.

Each kernel has a numba-compiled implementation and a pure-numpy fallback.
The fallback is selected automatically when numba is unavailable, or
explicitly by setting the environment variable ``RVBPOLY_DISABLE_NUMBA``
to a non-empty value before import.  ``benchmarks/bench_kernels.py``
compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = bool(os.environ.get("RVBPOLY_DISABLE_NUMBA"))

try:
    if _DISABLED:
        raise ImportError("numba disabled by RVBPOLY_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def backend_name() -> str:
    return "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# pack_cut_indices: for every basis index, the packed row index over the E
# bits and packed column index over the E' bits
# ---------------------------------------------------------------------------


def _pack_cut_indices_numpy(n: int, mask_e: int):
    idx = np.arange(1 << n, dtype=np.int64)
    rows = np.zeros(1 << n, dtype=np.int64)
    cols = np.zeros(1 << n, dtype=np.int64)
    ri = ci = 0
    for j in range(n):
        bit = (idx >> j) & 1
        if (mask_e >> j) & 1:
            rows |= bit << ri
            ri += 1
        else:
            cols |= bit << ci
            ci += 1
    return rows, cols


if HAS_NUMBA:

    @njit(cache=True)
    def _pack_cut_indices_numba(n, mask_e):  # pragma: no cover - compiled
        size = 1 << n
        rows = np.empty(size, dtype=np.int64)
        cols = np.empty(size, dtype=np.int64)
        for z in range(size):
            r = 0
            c = 0
            ri = 0
            ci = 0
            for j in range(n):
                bit = (z >> j) & 1
                if (mask_e >> j) & 1:
                    r |= bit << ri
                    ri += 1
                else:
                    c |= bit << ci
                    ci += 1
            rows[z] = r
            cols[z] = c
        return rows, cols


def pack_cut_indices(n: int, mask_e: int):
    """Row/column index of every basis state in the cut's matrix reshaping."""
    if HAS_NUMBA:
        return _pack_cut_indices_numba(n, mask_e)
    return _pack_cut_indices_numpy(n, mask_e)


# ---------------------------------------------------------------------------
# gather_cut_matrix: scatter a dense amplitude vector into the cut matrix
# ---------------------------------------------------------------------------


def _gather_cut_matrix_numpy(amps, rows, cols, nrows: int, ncols: int):
    out = np.zeros((nrows, ncols), dtype=np.complex128)
    out[rows, cols] = amps
    return out


if HAS_NUMBA:

    @njit(cache=True)
    def _gather_cut_matrix_numba(amps, rows, cols, nrows, ncols):  # pragma: no cover - compiled
        out = np.zeros((nrows, ncols), dtype=np.complex128)
        for z in range(amps.shape[0]):
            out[rows[z], cols[z]] = amps[z]
        return out


def gather_cut_matrix(amps, rows, cols, nrows: int, ncols: int):
    """Matrix of a state vector in a cut, given precomputed index maps."""
    if HAS_NUMBA:
        return _gather_cut_matrix_numba(amps, rows, cols, nrows, ncols)
    return _gather_cut_matrix_numpy(amps, rows, cols, nrows, ncols)

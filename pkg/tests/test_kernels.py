"""Both kernel backends must produce identical index maps and matrices."""

import os
import subprocess
import sys

import numpy as np

from rvbpoly import _kernels
from rvbpoly.multilinear_poly import all_cuts


def test_numpy_and_numba_paths_agree():
    rng = np.random.default_rng(7)
    for n in (4, 7, 10):
        amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        for cut in list(all_cuts(n))[:: max(1, (1 << (n - 1)) // 16)]:
            r_np, c_np = _kernels._pack_cut_indices_numpy(n, cut.mask_E)
            m_np = _kernels._gather_cut_matrix_numpy(
                amps, r_np, c_np, 1 << cut.size_E, 1 << cut.size_E_prime
            )
            if _kernels.HAS_NUMBA:
                r_nb, c_nb = _kernels._pack_cut_indices_numba(n, cut.mask_E)
                m_nb = _kernels._gather_cut_matrix_numba(
                    amps, r_nb, c_nb, 1 << cut.size_E, 1 << cut.size_E_prime
                )
                assert np.array_equal(r_np, r_nb) and np.array_equal(c_np, c_nb)
                assert np.array_equal(m_np, m_nb)


def test_index_maps_are_bijective():
    for n, mask in [(5, 0b10101), (6, 0b000111)]:
        rows, cols = _kernels.pack_cut_indices(n, mask)
        ncols = 1 << (n - bin(mask).count("1"))
        flat = rows * ncols + cols
        assert len(set(flat.tolist())) == 1 << n


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, RVBPOLY_DISABLE_NUMBA="1")
    code = "from rvbpoly._kernels import backend_name; print(backend_name())"
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"


def test_matrix_reshape_preserves_norm():
    rng = np.random.default_rng(13)
    n = 8
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    for cut in list(all_cuts(n))[:10]:
        rows, cols = _kernels.pack_cut_indices(n, cut.mask_E)
        m = _kernels.gather_cut_matrix(amps, rows, cols, 1 << cut.size_E, 1 << cut.size_E_prime)
        assert np.isclose(np.linalg.norm(m), np.linalg.norm(amps))

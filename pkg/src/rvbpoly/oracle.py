"""Brute-force ground truth on dense state vectors.

Every symbolic verdict in this package can be cross-checked here: the
polynomial is expanded into its full 2**n amplitude vector, each cut is a
matrix reshaping of that vector, and Schmidt structure comes from plain
singular value decompositions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from . import _kernels
from .exceptions import TooLarge, ZeroState
from .multilinear_poly import Cut, MultilinearPoly, all_cuts

MAX_DENSE_SITES = 20

#: relative singular-value cutoff for Schmidt rank
RANK_TOL = 1e-10


@dataclass(frozen=True)
class DenseState:
    """Full amplitude vector; index bit j-1 gives the state of site j."""

    n: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def to_dense(p: MultilinearPoly) -> DenseState:
    """Expand a polynomial to amplitudes: monomial mask -> basis index."""
    if p.n > MAX_DENSE_SITES:
        raise TooLarge(f"dense expansion capped at {MAX_DENSE_SITES} sites")
    amps = np.zeros(1 << p.n, dtype=np.complex128)
    scale = p.scale.value
    for mask, c in p.terms.items():
        amps[mask] = complex(c) * scale
    return DenseState(p.n, amps)


def cut_matrix(state: DenseState, cut: Cut) -> np.ndarray:
    rows, cols = _kernels.pack_cut_indices(state.n, cut.mask_E)
    return _kernels.gather_cut_matrix(
        state.amplitudes, rows, cols, 1 << cut.size_E, 1 << cut.size_E_prime
    )


def schmidt_spectrum(state: DenseState, cut: Cut) -> np.ndarray:
    """Nonincreasing singular values of the state's matrix in the cut."""
    if state.norm() == 0.0:
        raise ZeroState("zero vector has no Schmidt spectrum")
    return np.linalg.svd(cut_matrix(state, cut), compute_uv=False)


def schmidt_rank(state: DenseState, cut: Cut, tol: float = RANK_TOL) -> int:
    sv = schmidt_spectrum(state, cut)
    return int(np.sum(sv > tol * sv[0]))


def product_in_cut_oracle(state: DenseState, cut: Cut, tol: float = RANK_TOL) -> bool:
    return schmidt_rank(state, cut, tol) == 1


def is_genuinely_entangled_oracle(
    state: DenseState, tol: float = RANK_TOL
) -> Tuple[bool, Optional[Cut]]:
    """Schmidt-rank scan over all bipartitions; returns a product cut if any."""
    for cut in all_cuts(state.n):
        if schmidt_rank(state, cut, tol) == 1:
            return False, cut
    return True, None


def _top_singular_value(state: DenseState, cut: Cut) -> float:
    m = cut_matrix(state, cut)
    # the Gram trick keeps the SVD on the smaller side of the cut
    if m.shape[0] > m.shape[1]:
        m = m.T
    sv = np.linalg.svd(m, compute_uv=False)
    return float(sv[0])


def ggm_oracle(
    state: DenseState,
    cuts: Optional[Iterable[Cut]] = None,
    threads: int = 1,
) -> float:
    """1 minus the squared maximal product overlap across all cuts."""
    nrm = state.norm()
    if nrm == 0.0:
        raise ZeroState("zero vector has no entanglement measure")
    unit = DenseState(state.n, state.amplitudes / nrm)
    cut_list = list(cuts) if cuts is not None else list(all_cuts(state.n))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            best = max(pool.map(lambda c: _top_singular_value(unit, c), cut_list))
    else:
        best = max(_top_singular_value(unit, c) for c in cut_list)
    return 1.0 - best * best

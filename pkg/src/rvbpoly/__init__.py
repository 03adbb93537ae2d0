"""rvbpoly: multilinear-polynomial analysis of resonating-valence-bond ladder states."""

from .coverings import Covering, CoveringSet, covering_set, enumerate_all, enumerate_nn, enumerate_pnn
from .multilinear_poly import Cut, MultilinearPoly, Scale, build, multiply, try_factor_in_cut
from .rvb_states import RvbBuild, build_state, doped_rvb, rvb_vector, weighted_doped_rvb, weighted_rvb

__version__ = "0.1.0"

__all__ = [
    "Covering",
    "CoveringSet",
    "Cut",
    "MultilinearPoly",
    "RvbBuild",
    "Scale",
    "build",
    "build_state",
    "covering_set",
    "doped_rvb",
    "enumerate_all",
    "enumerate_nn",
    "enumerate_pnn",
    "multiply",
    "rvb_vector",
    "try_factor_in_cut",
    "weighted_doped_rvb",
    "weighted_rvb",
]

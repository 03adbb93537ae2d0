"""Tests for the dense brute-force oracle."""

import random
from fractions import Fraction as Fr

import numpy as np
import pytest

from rvbpoly import coverings as cov
from rvbpoly import entanglement_analysis as ana
from rvbpoly import multilinear_poly as mp
from rvbpoly import oracle as orc
from rvbpoly import rvb_states as rvb
from rvbpoly.bitsets import mask_from_sites
from rvbpoly.exceptions import TooLarge, ZeroState

from _fixtures import example_312_cut, example_312_set, random_covering_set


def test_to_dense_singlet_amplitudes():
    f = mp.build(2, [([2], Fr(1)), ([1], Fr(-1))], mp.Scale(1))
    amps = orc.to_dense(f).amplitudes
    s = 2 ** -0.5
    assert amps[0] == 0 and amps[3] == 0
    assert amps[0b01] == pytest.approx(-s)  # site 1 up
    assert amps[0b10] == pytest.approx(s)  # site 2 up


def test_to_dense_constant_and_cap():
    f = mp.build(1, [(0, Fr(1))])
    assert orc.to_dense(f).amplitudes[0] == 1
    with pytest.raises(TooLarge):
        orc.to_dense(mp.zero(21))


def test_to_dense_nn2_matches_displayed_amplitudes():
    f = rvb.rvb_vector(cov.covering_set(cov.enumerate_nn(2)))
    amps = orc.to_dense(f).amplitudes
    nz = {i: v for i, v in enumerate(amps) if abs(v) > 1e-14}
    assert len(nz) == 6
    assert nz[mask_from_sites([1, 3])] == pytest.approx(0.5)
    assert nz[mask_from_sites([2, 4])] == pytest.approx(0.5)
    for sites in ([1, 4], [2, 3], [1, 2], [3, 4]):
        assert nz[mask_from_sites(sites)] == pytest.approx(-0.25)


def test_schmidt_spectrum_product_and_singlet():
    prod = mp.multiply(
        mp.build(4, [([2], Fr(1)), ([1], Fr(-1))], mp.Scale(1)),
        mp.build(4, [([4], Fr(1)), ([3], Fr(-1))], mp.Scale(1)),
    )
    sv = orc.schmidt_spectrum(orc.to_dense(prod), mp.Cut(4, 0b0011))
    assert sv[0] == pytest.approx(1.0) and sv[1] == pytest.approx(0.0, abs=1e-14)
    singlet = mp.build(2, [([2], Fr(1)), ([1], Fr(-1))], mp.Scale(1))
    sv2 = orc.schmidt_spectrum(orc.to_dense(singlet), mp.Cut(2, 0b01))
    assert np.allclose(sv2, [2 ** -0.5, 2 ** -0.5])


def test_schmidt_rank_example_312():
    f = rvb.rvb_vector(example_312_set())
    assert orc.schmidt_rank(orc.to_dense(f), example_312_cut()) >= 2


def test_zero_state_raises():
    state = orc.DenseState(2, np.zeros(4, dtype=np.complex128))
    with pytest.raises(ZeroState):
        orc.schmidt_spectrum(state, mp.Cut(2, 0b01))
    with pytest.raises(ZeroState):
        orc.ggm_oracle(state)


def test_ggm_oracle_fixtures():
    ghz = mp.build(3, [(0, Fr(1)), ([1, 2, 3], Fr(1))], mp.Scale(1))
    assert orc.ggm_oracle(orc.to_dense(ghz)) == pytest.approx(0.5, abs=1e-12)
    prod = mp.multiply(
        mp.build(4, [([2], Fr(1)), ([1], Fr(-1))], mp.Scale(1)),
        mp.build(4, [([4], Fr(1)), ([3], Fr(-1))], mp.Scale(1)),
    )
    assert orc.ggm_oracle(orc.to_dense(prod)) == pytest.approx(0.0, abs=1e-10)


def test_ggm_oracle_matches_symbolic_on_nn3():
    f = rvb.rvb_vector(cov.covering_set(cov.enumerate_nn(3)))
    assert orc.ggm_oracle(orc.to_dense(f)) == pytest.approx(ana.ggm(f).value, abs=1e-9)


def test_ggm_oracle_threads_agree():
    f = rvb.rvb_vector(cov.covering_set(cov.enumerate_nn(3)))
    d = orc.to_dense(f)
    assert orc.ggm_oracle(d, threads=4) == pytest.approx(orc.ggm_oracle(d), abs=1e-15)


def test_norm_agreement_random_states():
    rng = random.Random(101)
    for _ in range(10):
        nu = rng.randint(2, 4)
        s = random_covering_set(rng, nu, rng.randint(1, 4))
        gamma = rng.randint(0, nu - 1)
        f = rvb.build_state(rvb.RvbBuild(s, gamma))
        assert f.l2_norm() == pytest.approx(orc.to_dense(f).norm(), abs=1e-12)


def test_symbolic_verdicts_match_oracle_per_cut():
    rng = random.Random(103)
    for _ in range(8):
        nu = rng.randint(2, 4)
        s = random_covering_set(rng, nu, rng.randint(1, 4))
        f = rvb.rvb_vector(s)
        dense = orc.to_dense(f)
        for cut in mp.all_cuts(2 * nu):
            assert ana.product_in_cut_rvb(f, cut).is_product == (
                orc.schmidt_rank(dense, cut) == 1
            )

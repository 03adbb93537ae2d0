"""Unit and property tests for the multilinear polynomial core."""

import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from rvbpoly import multilinear_poly as mp
from rvbpoly import oracle as orc
from rvbpoly import rvb_states as rvb
from rvbpoly.bitsets import mask_from_sites, popcount
from rvbpoly.exceptions import (
    ConstantPolynomial,
    InvalidDegree,
    OverlappingSupport,
    SubsetOutOfRange,
    ZeroPolynomial,
)

from _fixtures import example_312_cut, example_312_set


def singlet(n, a, b, extra_scale=0):
    return mp.build(n, [([b], Fr(1)), ([a], Fr(-1))], mp.Scale(1 + extra_scale))


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------


def test_build_constant_is_all_down_state():
    p = mp.build(1, [(0, Fr(1))], mp.Scale(0))
    assert p.terms == {0: Fr(1)}
    assert p.support() == 0


def test_build_singlet_matches_dimer_polynomial():
    p = singlet(2, 1, 2)
    assert p.terms == {2: Fr(1), 1: Fr(-1)}
    assert p.scale == mp.Scale(1)
    assert p.l2_norm() == pytest.approx(1.0)


def test_build_cancellation_gives_zero():
    p = mp.build(2, [([1], Fr(1)), ([1], Fr(-1))], mp.Scale(0))
    assert p.is_zero


def test_build_rejects_out_of_range_masks():
    with pytest.raises(SubsetOutOfRange):
        mp.build(2, [(4, Fr(1))])


def test_build_merges_duplicates():
    p = mp.build(2, [([1], Fr(1)), ([1], Fr(2)), ([2], Fr(1))])
    assert p.terms[1] == Fr(3)


# ---------------------------------------------------------------------------
# support / degree / terms
# ---------------------------------------------------------------------------


def test_support_and_degree_basics():
    p = singlet(2, 1, 2)
    assert p.support() == 0b11
    assert p.degree() == 1
    one = mp.build(2, [(0, Fr(1))])
    assert one.support() == 0
    mixed = mp.build(2, [(0, Fr(1)), ([1], Fr(1))])
    assert mixed.degree() == 1 and not mixed.is_homogeneous() and mixed.term_count() == 2


def test_single_covering_polynomial_stats():
    from rvbpoly.coverings import Covering

    f = rvb.covering_polynomial(Covering(4, (2, 1, 4, 3)))
    assert f.degree() == 4
    assert f.is_homogeneous()
    assert f.term_count() == 16
    assert f.support() == (1 << 8) - 1


def test_nn2_state_six_homogeneous_terms():
    from rvbpoly.coverings import covering_set, enumerate_nn

    f = rvb.rvb_vector(covering_set(enumerate_nn(2)))
    assert f.degree() == 2 and f.is_homogeneous() and f.term_count() == 6


def test_degree_of_zero_polynomial_raises():
    with pytest.raises(ZeroPolynomial):
        mp.zero(3).degree()


# ---------------------------------------------------------------------------
# multiply
# ---------------------------------------------------------------------------


def test_multiply_two_singlets_expands():
    p = mp.multiply(singlet(4, 1, 2), singlet(4, 3, 4))
    assert p.scale == mp.Scale(2)
    assert p.terms == {
        mask_from_sites([2, 4]): Fr(1),
        mask_from_sites([2, 3]): Fr(-1),
        mask_from_sites([1, 4]): Fr(-1),
        mask_from_sites([1, 3]): Fr(1),
    }


def test_multiply_by_constant_one_is_identity():
    f = singlet(3, 1, 2)
    one = mp.build(3, [(0, Fr(1))])
    assert mp.multiply(one, f) == f


def test_multiply_rejects_overlapping_support():
    with pytest.raises(OverlappingSupport):
        mp.multiply(singlet(2, 1, 2), singlet(2, 1, 2))


# ---------------------------------------------------------------------------
# coefficient matrix and rank
# ---------------------------------------------------------------------------


def test_ordered_subsets_block_structure():
    """Every subset appears once, blocks of equal size are contiguous in
    increasing size, and complementation acts positionally: identically
    across mirror blocks, and as reversal inside the middle block."""
    from rvbpoly.multilinear_poly import ordered_subsets

    for sites_mask in (0b111, 0b1111, 0b10110, 0b111111):
        order = ordered_subsets(sites_mask)
        m = popcount(sites_mask)
        assert sorted(order) == sorted(
            sub for sub in range(sites_mask + 1) if sub & ~sites_mask == 0
        )
        sizes = [popcount(x) for x in order]
        assert sizes == sorted(sizes)
        pos = {x: i for i, x in enumerate(order)}
        offsets = {}
        start = 0
        for j in range(m + 1):
            block = [x for x in order if popcount(x) == j]
            offsets[j] = start
            start += len(block)
        for x in order:
            j = popcount(x)
            comp = sites_mask ^ x
            if 2 * j != m:
                assert pos[comp] - offsets[m - j] == pos[x] - offsets[j]
            else:
                width = math.comb(m, j)
                assert pos[comp] - offsets[j] == width - 1 - (pos[x] - offsets[j])


def test_outer_product_matrix_has_rank_one():
    p = mp.build(4, [([1], Fr(2)), ([2], Fr(3)), (0, Fr(1))])
    q = mp.build(4, [([3], Fr(-1)), ([3, 4], Fr(5))])
    f = mp.multiply(p, q)
    cut = mp.Cut(4, 0b0011)
    m = mp.coefficient_matrix(f, cut)
    assert mp.matrix_rank(m) == 1


def test_zero_matrix_rank_zero():
    m = mp.coefficient_matrix(mp.zero(3), mp.Cut(3, 0b001))
    assert mp.matrix_rank(m) == 0


def test_example_312_exact_rank_at_least_two():
    f = rvb.rvb_vector(example_312_set())
    m = mp.coefficient_matrix(f, example_312_cut())
    assert mp.matrix_rank(m) >= 2


def test_covering_respecting_cut_concentrates_in_central_block():
    from rvbpoly.coverings import Covering

    # identity covering maps {1,3} onto {2,4}: respects E = {1,2,3,4}
    f = rvb.covering_polynomial(Covering(4, (1, 2, 3, 4)))
    cut = mp.Cut(8, mask_from_sites([1, 2, 3, 4]))
    m = mp.coefficient_matrix(f, cut)
    for j in range(5):
        for k in range(5):
            block = m.block(j, k)
            nonzero = any(any(e != 0 for e in row) for row in block)
            assert nonzero == ((j, k) == (2, 2))
    central = m.block(2, 2)
    assert mp.exact_rank(central) == 1


def test_odd_cut_spreads_over_two_blocks():
    from rvbpoly.coverings import covering_set, enumerate_nn

    f = rvb.rvb_vector(covering_set(enumerate_nn(3)))
    cut = mp.Cut(6, mask_from_sites([1, 2, 3]))
    m = mp.coefficient_matrix(f, cut)
    nonzero_blocks = {
        (j, k)
        for j in range(4)
        for k in range(4)
        if any(any(e != 0 for e in row) for row in m.block(j, k))
    }
    assert len(nonzero_blocks) >= 2
    assert all((3 - j, 3 - k) in nonzero_blocks for j, k in nonzero_blocks)


def test_block_symmetry_is_positional_for_covering_states():
    """Complement pairing makes the degree-split mirror blocks equal up to
    the parity sign, entry by entry."""
    from rvbpoly.coverings import covering_set, enumerate_nn

    for nu, maskE in [(2, 0b0011), (3, 0b001111), (3, 0b011110)]:
        psi = covering_set(enumerate_nn(nu))
        f = rvb.rvb_vector(psi)
        cut = mp.Cut(2 * nu, maskE)
        m = mp.coefficient_matrix(f, cut)
        sign = -1 if nu % 2 else 1
        n1, n2 = cut.size_E, cut.size_E_prime
        for j in range(n1 + 1):
            for k in range(n2 + 1):
                a = m.block(j, k)
                b = m.block(n1 - j, n2 - k)
                if (j, k) == (n1 - j, n2 - k):
                    rows, cols = len(a), len(a[0])
                    for r in range(rows):
                        for c in range(cols):
                            assert a[r][c] == sign * a[rows - 1 - r][cols - 1 - c]
                else:
                    assert a == [[sign * e for e in row] for row in b]


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


def test_factor_recovers_example_42a():
    f = mp.scalar_mul(
        Fr(1, 4),
        mp.multiply(
            mp.build(4, [([1], Fr(1)), ([3], Fr(-1))]),
            mp.build(4, [([2], Fr(1)), ([4], Fr(-1))]),
        ),
    )
    got = mp.try_factor_in_cut(f, mp.Cut(4, 0b0101))
    assert got is not None
    p, q = got
    assert p.support() | q.support() == 0b1111
    assert mp.equals_vector(mp.multiply(p, q), f)
    # normalisation: first coefficient of the E-side factor is one
    assert p.terms[min(p.terms)] == Fr(1)


def test_nn2_state_factors_in_no_cut():
    from rvbpoly.coverings import covering_set, enumerate_nn

    f = rvb.rvb_vector(covering_set(enumerate_nn(2)))
    for cut in mp.all_cuts(4):
        assert mp.try_factor_in_cut(f, cut) is None


def test_single_variable_factor_case():
    f = mp.build(2, [([1], Fr(3)), ([1, 2], Fr(5))])
    got = mp.try_factor_in_cut(f, mp.Cut(2, 0b01))
    assert got is not None
    p, q = got
    assert mp.equals_vector(mp.multiply(p, q), f)


def test_irreducible_factorization_of_covering_gives_dimers():
    from rvbpoly.coverings import Covering

    c = Covering(3, (2, 3, 1))
    f = rvb.covering_polynomial(c)
    factors = mp.irreducible_factorization(f)
    assert len(factors) == 3
    supports = sorted(sorted(mp.sites_from_mask(g.support())) for g in factors)
    assert supports == sorted(sorted(pair) for pair in c.pairs())
    for g in factors:
        assert g.degree() == 1 and g.term_count() == 2


def test_degree_one_is_irreducible():
    f = mp.build(3, [([1], Fr(1)), ([2], Fr(2)), ([3], Fr(-1))])
    assert mp.irreducible_factorization(f) == [f]


def test_nn3_state_is_irreducible():
    from rvbpoly.coverings import covering_set, enumerate_nn

    f = rvb.rvb_vector(covering_set(enumerate_nn(3)))
    assert len(mp.irreducible_factorization(f)) == 1


def test_factorization_rejects_constant_and_zero():
    with pytest.raises(ConstantPolynomial):
        mp.irreducible_factorization(mp.build(2, [(0, Fr(1))]))
    with pytest.raises(ZeroPolynomial):
        mp.irreducible_factorization(mp.zero(2))


# ---------------------------------------------------------------------------
# genuine entanglement (polynomial-level)
# ---------------------------------------------------------------------------


def test_missing_variable_witness():
    f = mp.build(3, [([2], Fr(1)), ([2, 3], Fr(1))])
    verdict = mp.is_genuinely_entangled_poly(f)
    assert not verdict.genuinely_entangled
    assert verdict.missing_sites == 0b001
    assert verdict.witness_cut.mask_E == 0b001


def test_two_disjoint_terms_covering_everything_is_genuine():
    f = mp.build(4, [([1, 2], Fr(2)), ([3, 4], Fr(-3))])
    assert mp.is_genuinely_entangled_poly(f).genuinely_entangled


def test_ghz_is_genuinely_entangled_and_oracle_agrees():
    f = mp.build(3, [(0, Fr(1)), ([1, 2, 3], Fr(1))], mp.Scale(1))
    assert mp.is_genuinely_entangled_poly(f).genuinely_entangled
    dense = orc.to_dense(f)
    for cut in mp.all_cuts(3):
        assert orc.schmidt_rank(dense, cut) == 2


# ---------------------------------------------------------------------------
# term-count bounds
# ---------------------------------------------------------------------------


def test_tau_bounds_n6_d3():
    taus, tau = mp.tau_bounds(6, 3)
    assert taus[:3] == [10, 12, 9]
    assert tau == 12


def test_tau_bounds_two_sites():
    taus, tau = mp.tau_bounds(2, 1)
    assert taus == [1] and tau == 1


def test_tau_bounds_n8_d4_against_direct_evaluation():
    taus, tau = mp.tau_bounds(8, 4)
    for alpha in range(1, 8):
        best = 0
        for d1 in range(0, 5):
            d2 = 4 - d1
            if d1 <= alpha and 0 <= d2 <= 8 - alpha:
                best = max(best, math.comb(alpha, d1) * math.comb(8 - alpha, d2))
        assert taus[alpha - 1] == best
    assert tau == max(taus)


def test_invalid_degree_raises():
    with pytest.raises(InvalidDegree):
        mp.tau_bounds(4, 5)
    with pytest.raises(InvalidDegree):
        mp.tau_bounds(4, 0)


# ---------------------------------------------------------------------------
# norms and serialization
# ---------------------------------------------------------------------------


def test_singlet_norm_is_one_and_zero_norm_is_zero():
    assert singlet(2, 1, 2).l2_norm() == pytest.approx(1.0)
    assert mp.zero(2).l2_norm() == 0.0


def test_norm_squared_exact_for_nn2():
    from rvbpoly.coverings import covering_set, enumerate_nn

    f = rvb.rvb_vector(covering_set(enumerate_nn(2)))
    assert f.norm_squared() == Fr(3, 4)


def test_json_round_trip_exact_and_float():
    f = singlet(2, 1, 2)
    assert mp.loads(mp.dumps(f)) == f
    g = mp.build(2, [([1], 0.5 + 0.25j), ([2], -1.0 + 0j)], mp.Scale(3))
    h = mp.loads(mp.dumps(g))
    assert h.scale == g.scale and h.terms == g.terms


def test_json_is_canonical_and_sorted():
    f = mp.build(3, [([3], Fr(1)), ([1], Fr(1)), ([2], Fr(1))])
    text = mp.dumps(f)
    assert text == mp.dumps(mp.loads(text))
    masks = [entry[0] for entry in mp.to_json_dict(f)["terms"]]
    assert masks == sorted(masks)


def test_json_sqrt_denom_round_trip():
    from rvbpoly.coverings import covering_set, enumerate_nn

    d = rvb.doped_rvb(covering_set(enumerate_nn(3)), 1)
    assert d.scale.sqrt_denom == 3
    assert mp.loads(mp.dumps(d)) == d


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------


@st.composite
def arbitrary_poly(draw):
    n = draw(st.integers(1, 6))
    count = draw(st.integers(1, 6))
    terms = []
    for _ in range(count):
        mask = draw(st.integers(0, (1 << n) - 1))
        num = draw(st.integers(-9, 9).filter(lambda x: x != 0))
        terms.append((mask, Fr(num, draw(st.integers(1, 9)))))
    k = draw(st.integers(0, 6))
    return mp.build(n, terms, mp.Scale(k))


@settings(max_examples=60, deadline=None)
@given(arbitrary_poly())
def test_serialization_round_trip_property(p):
    assert mp.loads(mp.dumps(p)) == p
    assert mp.dumps(mp.loads(mp.dumps(p))) == mp.dumps(p)


@st.composite
def disjoint_support_pair(draw):
    n = draw(st.integers(2, 8))
    e_size = draw(st.integers(1, n - 1))
    sites = list(range(1, n + 1))
    e_sites = sites[:e_size]
    ep_sites = sites[e_size:]

    def poly_over(side):
        count = draw(st.integers(1, 4))
        terms = []
        for _ in range(count):
            mask = draw(st.integers(0, (1 << len(side)) - 1))
            full_mask = mask_from_sites(s for i, s in enumerate(side) if mask >> i & 1)
            num = draw(st.integers(-9, 9).filter(lambda x: x != 0))
            terms.append((full_mask, Fr(num, draw(st.integers(1, 9)))))
        return mp.build(n, terms)

    p = poly_over(e_sites)
    q = poly_over(ep_sites)
    return n, mask_from_sites(e_sites), p, q


@settings(max_examples=60, deadline=None)
@given(disjoint_support_pair())
def test_factor_round_trip(data):
    n, mask_e, p, q = data
    if p.is_zero or q.is_zero:
        return
    f = mp.multiply(p, q)
    got = mp.try_factor_in_cut(f, mp.Cut(n, mask_e))
    assert got is not None
    assert mp.equals_vector(mp.multiply(*got), f)


@settings(max_examples=40, deadline=None)
@given(disjoint_support_pair(), st.integers(-7, 7).filter(lambda c: c != 0))
def test_scale_invariance_of_verdicts_and_rank(data, c):
    n, mask_e, p, q = data
    if p.is_zero or q.is_zero:
        return
    f = mp.multiply(p, q)
    g = mp.scalar_mul(Fr(c), f)
    cut = mp.Cut(n, mask_e)
    assert mp.matrix_rank(mp.coefficient_matrix(f, cut)) == mp.matrix_rank(
        mp.coefficient_matrix(g, cut)
    )
    if f.support() == (1 << n) - 1:
        assert (
            mp.is_genuinely_entangled_poly(f).genuinely_entangled
            == mp.is_genuinely_entangled_poly(g).genuinely_entangled
        )


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.data())
def test_tau_symmetry(n, data):
    d = data.draw(st.integers(1, n))
    taus, _ = mp.tau_bounds(n, d)
    for alpha in range(1, n):
        assert taus[alpha - 1] == taus[n - alpha - 1]


@settings(max_examples=40, deadline=None)
@given(disjoint_support_pair())
def test_homogeneous_factors_are_homogeneous(data):
    n, mask_e, p, q = data
    if p.is_zero or q.is_zero:
        return
    f = mp.multiply(p, q)
    if not f.is_homogeneous():
        return
    got = mp.try_factor_in_cut(f, mp.Cut(n, mask_e))
    assert got is not None
    a, b = got
    assert a.is_homogeneous() and b.is_homogeneous()
    assert a.degree() + b.degree() == f.degree()


def test_full_product_vector_term_count_is_power_of_two():
    """A fully factored state has one linear factor per site, so its term
    count is 2 to the number of factors with both coefficients nonzero."""
    rng = random.Random(131)
    for _ in range(20):
        n = rng.randint(2, 6)
        f = mp.build(n, [(0, Fr(1))])
        both = 0
        for j in range(1, n + 1):
            a = Fr(rng.randint(-3, 3))
            b = Fr(rng.choice([x for x in range(-3, 4) if x]))
            if a != 0:
                both += 1
            f = mp.multiply(f, mp.build(n, [(0, a), ([j], b)]))
        assert f.term_count() == 1 << both


def test_two_site_four_term_determinant_criterion():
    """On two sites with all four coefficients present, the state splits
    exactly when the coefficient determinant vanishes."""
    rng = random.Random(137)
    cut = mp.Cut(2, 0b01)
    for _ in range(40):
        a0, a1, a2 = (Fr(rng.choice([x for x in range(-4, 5) if x])) for _ in range(3))
        a3 = Fr(rng.choice([x for x in range(-4, 5) if x]))
        f = mp.build(2, [(0, a0), ([1], a1), ([2], a2), ([1, 2], a3)])
        splits = mp.try_factor_in_cut(f, cut) is not None
        assert splits == (a0 * a3 == a1 * a2)


def _random_poly(rng, n, terms):
    out = []
    for _ in range(terms):
        out.append((rng.randrange(1 << n), Fr(rng.randint(-9, 9), rng.randint(1, 9))))
    return mp.build(n, out)


def test_factor_agrees_with_schmidt_rank_on_random_states():
    rng = random.Random(20240811)
    cases = [(4, 5, 8), (6, 8, 6), (8, 10, 3), (12, 14, 2)]
    for n, terms, repeats in cases:
        for _ in range(repeats):
            f = _random_poly(rng, n, terms)
            if f.is_zero:
                continue
            dense = orc.to_dense(f)
            for cut in mp.all_cuts(n):
                symbolic = mp.try_factor_in_cut(f, cut) is not None
                assert symbolic == (orc.schmidt_rank(dense, cut) == 1), (n, f, cut)

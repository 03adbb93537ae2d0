"""Shared fixture builders: pinned example covering sets and random generators."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from rvbpoly import coverings as cov
from rvbpoly.multilinear_poly import Cut
from rvbpoly.bitsets import mask_from_sites


def covering_from_pairs(nu: int, *pair_maps: Dict[int, int]) -> cov.Covering:
    """Build a covering from site-level maps {odd site -> even site}."""
    perm = [0] * nu
    merged: Dict[int, int] = {}
    for m in pair_maps:
        merged.update(m)
    for a, b in merged.items():
        perm[(a - 1) // 2] = b // 2
    return cov.Covering(nu, tuple(perm))


def product_set(
    nu: int, rows: Sequence[Dict[int, int]], cols: Sequence[Dict[int, int]],
    dots: Optional[Sequence[Tuple[int, int]]] = None,
    weights=None,
) -> cov.CoveringSet:
    """Covering set assembled from E-side and E'-side partial pairings."""
    if dots is None:
        dots = [(j, k) for j in range(len(rows)) for k in range(len(cols))]
    coverings = [covering_from_pairs(nu, rows[j], cols[k]) for j, k in dots]
    return cov.covering_set(coverings, weights)


# ---------------------------------------------------------------------------
# pinned fixtures
# ---------------------------------------------------------------------------


def example_312_set() -> cov.CoveringSet:
    """Two coverings of 8 sites: the displayed two-product-sum state.

    The first pairs 1-8, 3-6, 5-4, 7-2 (anti-diagonal), the second pairs
    every site with its right neighbour (identity)."""
    return cov.covering_set([cov.Covering(4, (4, 3, 2, 1)), cov.Covering(4, (1, 2, 3, 4))])


def example_312_cut() -> Cut:
    return Cut(8, mask_from_sites([3, 4, 5, 6]))


def example_33_set() -> cov.CoveringSet:
    """Four coverings of 10 sites with a 3x2 grid of restrictions via
    E = {1..6}: rows send site 1 to 2, 4, 6 respectively."""
    rows = [{1: 2, 3: 4, 5: 6}, {1: 4, 3: 2, 5: 6}, {1: 6, 3: 4, 5: 2}]
    cols = [{7: 8, 9: 10}, {7: 10, 9: 8}]
    return product_set(5, rows, cols, dots=[(0, 0), (1, 0), (2, 0), (1, 1)])


def example_33_cut() -> Cut:
    return Cut(10, mask_from_sites([1, 2, 3, 4, 5, 6]))


def example_34_set() -> cov.CoveringSet:
    """Six coverings of 12 sites on a 3x3 grid: dots at row 2, column 1,
    and (3,2) (1-based).  Exactly one sub-pairing criss-cross identity is
    satisfied and another violated, so the state is genuinely entangled."""
    rows = [{1: 6, 3: 4, 5: 2}, {1: 4, 3: 2, 5: 6}, {1: 2, 3: 6, 5: 4}]
    cols = [{7: 8, 9: 10, 11: 12}, {7: 10, 9: 8, 11: 12}, {7: 12, 9: 10, 11: 8}]
    dots = [(0, 0), (1, 0), (2, 0), (1, 1), (1, 2), (2, 1)]
    return product_set(6, rows, cols, dots=dots)


def example_34_cut() -> Cut:
    return Cut(12, mask_from_sites([1, 2, 3, 4, 5, 6]))


def full_grid_set(nu: int, j_count: int, k_count: int) -> Tuple[cov.CoveringSet, Cut]:
    """A factorable set with a full j x k grid via the first-rungs cut."""
    nu1 = 3 if j_count > 2 else 2
    nu2 = nu - nu1
    if k_count > 2 and nu2 < 3:
        raise ValueError("k_count > 2 needs at least 3 rungs on the far side")
    e_a = [2 * t - 1 for t in range(1, nu1 + 1)]
    e_b = [2 * t for t in range(1, nu1 + 1)]
    ep_a = [2 * t - 1 for t in range(nu1 + 1, nu + 1)]
    ep_b = [2 * t for t in range(nu1 + 1, nu + 1)]
    rows = [dict(zip(e_a, p)) for p in permutations(e_b)][:j_count]
    cols = [dict(zip(ep_a, p)) for p in permutations(ep_b)][:k_count]
    cut = Cut(2 * nu, mask_from_sites(e_a + e_b))
    return product_set(nu, rows, cols), cut


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------


def random_covering_set(rng: random.Random, nu: int, size: int, weighted: bool = False) -> cov.CoveringSet:
    pool = list(permutations(range(1, nu + 1)))
    size = min(size, len(pool))
    perms = rng.sample(pool, size)
    cs = cov.covering_set([cov.Covering(nu, p) for p in perms])
    if weighted:
        ws = []
        for _ in range(size):
            num = rng.choice([x for x in range(-5, 6) if x])
            ws.append(Fraction(num, rng.randint(1, 5)))
        cs = cs.with_weights(ws)
    return cs


def random_decomposable_instance(
    rng: random.Random, nu: int
) -> Tuple[cov.CoveringSet, Cut]:
    """A random covering set decomposable via a known cut, with at least
    two distinct restrictions on each side (neither flat nor pole)."""
    assert nu >= 4
    nu1 = rng.randint(2, nu - 2)
    a_ts = sorted(rng.sample(range(1, nu + 1), nu1))
    b_us = sorted(rng.sample(range(1, nu + 1), nu1))
    rest_ts = [t for t in range(1, nu + 1) if t not in a_ts]
    rest_us = [u for u in range(1, nu + 1) if u not in b_us]
    e_a = [2 * t - 1 for t in a_ts]
    e_b = [2 * u for u in b_us]
    row_pool = [dict(zip(e_a, (2 * u for u in p))) for p in permutations(b_us)]
    col_pool = [
        dict(zip((2 * t - 1 for t in rest_ts), (2 * u for u in p)))
        for p in permutations(rest_us)
    ]
    j_count = rng.randint(2, min(3, len(row_pool)))
    k_count = rng.randint(2, min(3, len(col_pool)))
    rows = rng.sample(row_pool, j_count)
    cols = rng.sample(col_pool, k_count)
    # incidence covering every row and column
    dots = {(j, rng.randrange(k_count)) for j in range(j_count)}
    dots |= {(rng.randrange(j_count), k) for k in range(k_count)}
    extra = rng.randint(0, j_count * k_count - len(dots))
    all_cells = [(j, k) for j in range(j_count) for k in range(k_count)]
    rng.shuffle(all_cells)
    for cell in all_cells:
        if extra == 0:
            break
        if cell not in dots:
            dots.add(cell)
            extra -= 1
    cut = Cut(2 * nu, mask_from_sites(e_a + e_b))
    return product_set(nu, rows, cols, dots=sorted(dots)), cut


def random_complex_weights(rng: random.Random, size: int) -> List[complex]:
    out = []
    while True:
        out = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(size)]
        if all(abs(w) > 1e-3 for w in out) and abs(sum(out)) > 1e-3:
            return out

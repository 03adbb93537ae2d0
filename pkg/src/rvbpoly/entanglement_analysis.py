"""Entanglement decision procedures for covering-built states.

Everything here decides one question, "is the state a product across a
cut", by several independent routes: coefficient-matrix rank, counting
identities on the covering set (criss-cross equations in plain and
refined form), polynomial master equations, and arithmetic shortcuts
(prime set size, grid-size bounds).  The routes are proven equivalent, so
the test suite runs them against each other and against the dense SVD
oracle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bitsets import mask_from_sites, popcount, sites_from_mask
from .coverings import (
    CoveringSet,
    GridShape,
    a_sites_mask,
    b_sites_mask,
    classify,
    decomposable_cuts,
    distinct_images,
    grid,
    is_decomposable_via,
    is_flat_or_pole,
    tmask_of_sites,
    umask_of_sites,
)
from .exceptions import (
    DegenerateShape,
    NotDecomposable,
    NotPrime,
    RvbPolyError,
    TooSmall,
    ZeroPolynomial,
)
from .multilinear_poly import (
    DEFAULT_TOL,
    Cut,
    GenuineVerdict,
    MultilinearPoly,
    Scalar,
    Scale,
    add,
    all_cuts,
    build,
    even_cuts,
    multiply,
    scalar_mul,
    term_groups,
    try_factor_in_cut,
    zero,
)

__all__ = [
    "ProductVerdict",
    "product_in_cut_rvb",
    "genuine_entanglement_rvb",
    "CrissCrossWitness",
    "CrissCrossResult",
    "criss_cross_check",
    "criss_cross_witness",
    "AlternativeReport",
    "alternative_criss_cross",
    "prime_dichotomy",
    "independence_check",
    "MasterEquationResult",
    "master_equation_check",
    "s_E_bound",
    "CrissCrossDecomposition",
    "criss_cross_decompositions",
    "divisibility_representations",
    "GgmReport",
    "ggm",
    "DichotomyScanReport",
    "dichotomy_scan",
]


# ---------------------------------------------------------------------------
# product test specialised to homogeneous full-support states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductVerdict:
    is_product: bool
    cut: Cut
    reason: str
    factors: Optional[Tuple[MultilinearPoly, MultilinearPoly]] = None

    def __bool__(self) -> bool:
        return self.is_product


def product_in_cut_rvb(f: MultilinearPoly, cut: Cut, tol: float = DEFAULT_TOL) -> ProductVerdict:
    """Product test with the cheap rejections available to covering states.

    Callers promise ``f`` was built from coverings (any weights, any
    doping).  For such states of degree n/2 the coefficients pair up under
    site complementation, which rules out odd cut sides; that rejection is
    NOT valid for arbitrary homogeneous polynomials, so outside inputs
    should use ``try_factor_in_cut`` directly.  The block-concentration
    rejection (all terms sharing one E-size) holds for any homogeneous
    polynomial.  Survivors fall through to the rank-one factor extraction,
    so on covering states this always agrees with ``try_factor_in_cut``.
    """
    if f.is_zero:
        raise ZeroPolynomial("no product verdict for the zero polynomial")
    homogeneous = f.is_homogeneous()
    if homogeneous:
        d = f.degree()
        if 2 * d == f.n and cut.size_E % 2 == 1:
            return ProductVerdict(False, cut, "odd cut side")
        j_values = {popcount(mask & cut.mask_E) for mask in f.terms}
        if len(j_values) > 1:
            return ProductVerdict(False, cut, f"terms spread over blocks {sorted(j_values)}")
    got = try_factor_in_cut(f, cut, tol)
    if got is None:
        return ProductVerdict(False, cut, "coefficient matrix rank >= 2")
    return ProductVerdict(True, cut, "rank-one coefficient matrix", got)


def genuine_entanglement_rvb(
    f: MultilinearPoly,
    psi_set: Optional[CoveringSet] = None,
    gamma: int = 0,
    tol: float = DEFAULT_TOL,
) -> GenuineVerdict:
    """Genuine-entanglement scan with the smallest sound cut family.

    Uniform undoped covering states only need their decomposable cuts (a
    product cut forces every covering to respect the cut).  Weighted
    undoped states are homogeneous of degree n/2, so odd cuts are excluded
    but cancellations void the decomposability argument: all even cuts are
    scanned.  Doped states admit no parity shortcut and scan everything;
    degree-1 full-support states are genuinely entangled outright.
    """
    if f.is_zero:
        raise ZeroPolynomial("the zero polynomial represents no state")
    full = (1 << f.n) - 1
    if f.support() != full:
        missing = full ^ f.support()
        witness = missing if missing != full else 1
        return GenuineVerdict(False, missing_sites=missing, witness_cut=Cut(f.n, witness))
    if f.degree() == 1:
        return GenuineVerdict(True)
    if psi_set is not None and psi_set.uniform and gamma == 0 and psi_set.size >= 2:
        cuts: Iterable[Cut] = decomposable_cuts(psi_set)
    elif f.is_homogeneous() and 2 * f.degree() == f.n:
        cuts = even_cuts(f.n)
    else:
        cuts = all_cuts(f.n)
    for cut in cuts:
        verdict = product_in_cut_rvb(f, cut, tol)
        if verdict.is_product:
            return GenuineVerdict(False, witness_cut=cut, factors=verdict.factors)
    return GenuineVerdict(True)


# ---------------------------------------------------------------------------
# criss-cross counting identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrissCrossWitness:
    """One counting identity: A1/B1 live on the E side, A2/B2 on the E'
    side (site masks); u, v, w, z count coverings matching the first pair,
    the second, both, neither."""

    a1: int
    b1: int
    a2: int
    b2: int
    u: int
    v: int
    w: int
    z: int

    @property
    def satisfied(self) -> bool:
        return (self.u - self.w) * (self.v - self.w) == self.z * self.w

    def sites(self) -> str:
        return (
            f"A1={sites_from_mask(self.a1)} B1={sites_from_mask(self.b1)} "
            f"A2={sites_from_mask(self.a2)} B2={sites_from_mask(self.b2)}"
        )


@dataclass(frozen=True)
class CrissCrossResult:
    satisfied: bool
    witnesses: Tuple[CrissCrossWitness, ...]
    checked: int


def _cut_side_tmasks(psi_set: CoveringSet, cut: Cut) -> Tuple[int, int]:
    """(t-mask of E's A sites, t-mask of E''s A sites)."""
    te = tmask_of_sites(cut.mask_E)
    return te, ((1 << psi_set.nu) - 1) ^ te


def _require_proper_shape(psi_set: CoveringSet, cut: Cut) -> None:
    if not is_decomposable_via(psi_set, cut):
        raise NotDecomposable(f"set is not decomposable via {cut}")
    shapes = classify(psi_set, cut)
    if shapes & {GridShape.FLAT, GridShape.POLE}:
        raise DegenerateShape("flat or pole via this cut; counting identities are void")


def _varying_submasks(psi_set: CoveringSet, side_tmask: int, halve: bool) -> List[int]:
    """Proper nonempty sub-t-masks of one side whose image varies.

    With ``halve``, only subsets covering at most half the side are kept,
    and at the exact half the lowest site is pinned inside the subset;
    complements carry the same counts, so nothing is lost.
    """
    side_bits = [t for t in range(psi_set.nu) if side_tmask >> t & 1]
    size_side = len(side_bits)
    out = []
    max_size = size_side // 2 if halve else size_side - 1
    for size in range(1, max_size + 1):
        for combo in combinations(side_bits, size):
            if halve and 2 * size == size_side and side_bits[0] not in combo:
                continue
            tmask = sum(1 << t for t in combo)
            if len(distinct_images(psi_set, tmask)) >= 2:
                out.append(tmask)
    return out


def _pair_counts(
    psi_set: CoveringSet, t1: int, u1: int, t2: int, u2: int
) -> Tuple[int, int, int, int]:
    u = v = w = 0
    for c in psi_set.coverings:
        m1 = c.image_tmask(t1) == u1
        m2 = c.image_tmask(t2) == u2
        u += m1
        v += m2
        w += m1 and m2
    z = psi_set.size - u - v + w
    return u, v, w, z


def criss_cross_witness(
    psi_set: CoveringSet, a1_sites: Sequence[int], b1_sites: Sequence[int],
    a2_sites: Sequence[int], b2_sites: Sequence[int],
) -> CrissCrossWitness:
    """Counts for one explicitly chosen (A1, B1, A2, B2) quadruple."""
    t1, u1 = tmask_of_sites(mask_from_sites(a1_sites)), umask_of_sites(mask_from_sites(b1_sites))
    t2, u2 = tmask_of_sites(mask_from_sites(a2_sites)), umask_of_sites(mask_from_sites(b2_sites))
    u, v, w, z = _pair_counts(psi_set, t1, u1, t2, u2)
    return CrissCrossWitness(
        a_sites_mask(t1), b_sites_mask(u1), a_sites_mask(t2), b_sites_mask(u2), u, v, w, z
    )


def criss_cross_check(
    psi_set: CoveringSet, cut: Cut, refined: bool = False, stop_on_violation: bool = True
) -> CrissCrossResult:
    """Check every counting identity the product property would impose.

    Plain mode runs one identity per choice of varying subset pairs and
    their images; refined mode organises the same counts as a full
    image-by-image grid per subset pair and additionally demands every
    grid cell be populated.  Both are equivalent to the product property.
    """
    _require_proper_shape(psi_set, cut)
    te, tep = _cut_side_tmasks(psi_set, cut)
    a1_list = _varying_submasks(psi_set, te, halve=True)
    a2_list = _varying_submasks(psi_set, tep, halve=False)
    s = psi_set.size
    witnesses: List[CrissCrossWitness] = []
    checked = 0
    satisfied = True
    for t1 in a1_list:
        images1 = distinct_images(psi_set, t1)
        for t2 in a2_list:
            images2 = distinct_images(psi_set, t2)
            if refined:
                wgrid = [[0] * len(images2) for _ in images1]
                for c in psi_set.coverings:
                    wgrid[images1.index(c.image_tmask(t1))][images2.index(c.image_tmask(t2))] += 1
                u_p = [sum(row) for row in wgrid]
                v_q = [sum(col) for col in zip(*wgrid)]
                for p, u1 in enumerate(images1):
                    for q, u2 in enumerate(images2):
                        wp = wgrid[p][q]
                        zp = s - u_p[p] - v_q[q] + wp
                        checked += 1
                        wit = CrissCrossWitness(
                            a_sites_mask(t1), b_sites_mask(u1),
                            a_sites_mask(t2), b_sites_mask(u2),
                            u_p[p], v_q[q], wp, zp,
                        )
                        if wp == 0 or not wit.satisfied:
                            satisfied = False
                            witnesses.append(wit)
                            if stop_on_violation:
                                return CrissCrossResult(False, tuple(witnesses), checked)
            else:
                for u1 in images1:
                    for u2 in images2:
                        u, v, w, z = _pair_counts(psi_set, t1, u1, t2, u2)
                        checked += 1
                        wit = CrissCrossWitness(
                            a_sites_mask(t1), b_sites_mask(u1),
                            a_sites_mask(t2), b_sites_mask(u2), u, v, w, z,
                        )
                        if not wit.satisfied:
                            satisfied = False
                            witnesses.append(wit)
                            if stop_on_violation:
                                return CrissCrossResult(False, tuple(witnesses), checked)
    return CrissCrossResult(satisfied, tuple(witnesses), checked)


# ---------------------------------------------------------------------------
# the grid-count alternative form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class YRecord:
    witness: CrissCrossWitness
    j1: int
    j2: int
    k1: int
    k2: int
    y: Tuple[int, int, int, int]

    @property
    def grid_equation_holds(self) -> bool:
        j1, j2, k1, k2 = self.j1, self.j2, self.k1, self.k2
        y1, y2, y3, y4 = self.y
        return j2 * k2 * y1 + j1 * k1 * y4 - y1 * y4 == j2 * k1 * y2 + j1 * k2 * y3 - y2 * y3


@dataclass(frozen=True)
class AlternativeReport:
    cut: Cut
    sigma: int
    records: Tuple[YRecord, ...]
    all_hold: bool


def alternative_criss_cross(psi_set: CoveringSet, cut: Cut) -> AlternativeReport:
    """Recast each counting identity in grid coordinates.

    sigma is the number of empty grid cells; the y variables measure how
    far each witness's four covering classes fall short of their grid
    capacity.  The recast equation holds exactly when the plain identity
    does, which is asserted on every record.
    """
    _require_proper_shape(psi_set, cut)
    g = grid(psi_set, cut)
    sigma = g.j_count * g.k_count - g.size
    te, tep = _cut_side_tmasks(psi_set, cut)
    a1_list = _varying_submasks(psi_set, te, halve=True)
    a2_list = _varying_submasks(psi_set, tep, halve=False)
    records: List[YRecord] = []
    all_hold = True
    for t1 in a1_list:
        images1 = distinct_images(psi_set, t1)
        row_imgs = [_restriction_image(key, t1) for key in g.row_labels]
        for t2 in a2_list:
            images2 = distinct_images(psi_set, t2)
            col_imgs = [_restriction_image(key, t2) for key in g.col_labels]
            for u1 in images1:
                j1 = sum(1 for img in row_imgs if img == u1)
                j2 = g.j_count - j1
                for u2 in images2:
                    k1 = sum(1 for img in col_imgs if img == u2)
                    k2 = g.k_count - k1
                    if 0 in (j1, j2, k1, k2):
                        continue
                    u, v, w, z = _pair_counts(psi_set, t1, u1, t2, u2)
                    wit = CrissCrossWitness(
                        a_sites_mask(t1), b_sites_mask(u1),
                        a_sites_mask(t2), b_sites_mask(u2), u, v, w, z,
                    )
                    y = (j1 * k1 - w, j1 * k2 - (u - w), j2 * k1 - (v - w), j2 * k2 - z)
                    rec = YRecord(wit, j1, j2, k1, k2, y)
                    if any(yi < 0 for yi in y) or sum(y) != sigma:
                        raise AssertionError("grid coordinates inconsistent with counts")
                    if rec.grid_equation_holds != wit.satisfied:
                        raise AssertionError("grid form disagrees with plain identity")
                    if not wit.satisfied:
                        all_hold = False
                    records.append(rec)
    return AlternativeReport(cut, sigma, tuple(records), all_hold)


def _restriction_image(key: Tuple[Tuple[int, int], ...], tmask: int) -> int:
    """Image u-mask of the A-subset ``tmask`` under a restriction key."""
    out = 0
    for a, b in key:
        if tmask >> ((a - 1) // 2) & 1:
            out |= 1 << (b // 2 - 1)
    return out


# ---------------------------------------------------------------------------
# dichotomy for prime set sizes
# ---------------------------------------------------------------------------


FLAT_OR_POLE = "flat_or_pole"
GENUINELY_ENTANGLED = "genuinely_entangled"


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    for d in range(2, int(math.isqrt(x)) + 1):
        if x % d == 0:
            return False
    return True


def prime_dichotomy(psi_set: CoveringSet) -> str:
    """A prime-size covering set is flat/pole (hence a product somewhere)
    or its uniform state is genuinely entangled; never neither."""
    if psi_set.size < 2 or not _is_prime(psi_set.size):
        raise NotPrime(f"set size {psi_set.size} is not a prime >= 2")
    return FLAT_OR_POLE if is_flat_or_pole(psi_set) else GENUINELY_ENTANGLED


# ---------------------------------------------------------------------------
# independence of restrictions
# ---------------------------------------------------------------------------


def independence_check(psi_set: CoveringSet) -> bool:
    """Whether every distinct restriction is pinned by a private sub-pairing.

    Via each decomposable cut, every row restriction must map some proper
    A-subset to an image no other row gives it, and likewise for columns.
    Non-decomposable sets are independent vacuously; flat and pole sets
    are never independent.
    """
    if psi_set.size < 2:
        raise TooSmall("independence concerns sets of at least 2 coverings")
    if is_flat_or_pole(psi_set):
        return False
    for cut in decomposable_cuts(psi_set):
        g = grid(psi_set, cut)
        if not _side_independent(g.row_labels) or not _side_independent(g.col_labels):
            return False
    return True


def _side_independent(labels: Sequence[Tuple[Tuple[int, int], ...]]) -> bool:
    domains = [dict(key) for key in labels]
    a_sites = sorted(domains[0])
    for j, dj in enumerate(domains):
        found = False
        for size in range(1, len(a_sites)):
            for combo in combinations(a_sites, size):
                image = frozenset(dj[a] for a in combo)
                if all(frozenset(dt[a] for a in combo) != image for t, dt in enumerate(domains) if t != j):
                    found = True
                    break
            if found:
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# master equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MasterEquationResult:
    case: str  # "ME" | "MEa" | "MEb" | "MEc"
    holds: bool
    residual: Optional[MultilinearPoly]
    factors: Optional[Tuple[MultilinearPoly, MultilinearPoly]] = None


def _reduced_part(key: Tuple[Tuple[int, int], ...], n: int) -> MultilinearPoly:
    """The restriction's dimer product stripped of its extreme monomials:
    sum over proper nonempty A-subsets of the signed mixed monomials."""
    pairs = list(key)
    m = len(pairs)
    terms = []
    b_all = mask_from_sites(b for _, b in pairs)
    for size in range(1, m):
        for combo in combinations(pairs, size):
            a_mask = mask_from_sites(a for a, _ in combo)
            b_hit = mask_from_sites(b for _, b in combo)
            sign = -1 if size % 2 else 1
            terms.append((a_mask | (b_all ^ b_hit), Fraction(sign)))
    return build(n, terms, Scale(0))


def _weighted_combo(
    polys: Sequence[MultilinearPoly], weights: Sequence[Scalar], n: int
) -> MultilinearPoly:
    acc = zero(n)
    for poly, wgt in zip(polys, weights):
        if wgt != 0:
            acc = add(acc, scalar_mul(wgt, poly))
    return acc


def master_equation_check(
    psi_set: CoveringSet, cut: Cut, tol: float = DEFAULT_TOL
) -> MasterEquationResult:
    """Decide the product property from the reduced restriction polynomials.

    With nonzero total weight the single identity
    ``(sum_a p0) * (sum_a q0) = alpha_hat * sum_a p0*q0`` settles it.  With
    zero total weight exactly one of three patterns can produce a product:
    both weighted sums vanish (the remainder itself must factor), or one
    vanishes and the other divides the remainder exactly.
    """
    if not is_decomposable_via(psi_set, cut):
        raise NotDecomposable(f"set is not decomposable via {cut}")
    g = grid(psi_set, cut)
    n = psi_set.n
    p0 = [_reduced_part(key, n) for key in g.row_labels]
    q0 = [_reduced_part(key, n) for key in g.col_labels]
    weights = [psi_set.weight(i) for i in range(psi_set.size)]
    row_w: List[Scalar] = [Fraction(0)] * g.j_count
    col_w: List[Scalar] = [Fraction(0)] * g.k_count
    for i, (j, k) in enumerate(g.assignment):
        row_w[j] = row_w[j] + weights[i]
        col_w[k] = col_w[k] + weights[i]
    p0_alpha = _weighted_combo(p0, row_w, n)
    q0_alpha = _weighted_combo(q0, col_w, n)
    f0_alpha = zero(n)
    for i, (j, k) in enumerate(g.assignment):
        if not p0[j].is_zero and not q0[k].is_zero:
            f0_alpha = add(f0_alpha, scalar_mul(weights[i], multiply(p0[j], q0[k])))
    a_hat = psi_set.alpha_hat

    if a_hat != 0:
        lhs = multiply(p0_alpha, q0_alpha) if not (p0_alpha.is_zero or q0_alpha.is_zero) else zero(n)
        rhs = scalar_mul(a_hat, f0_alpha)
        residual = add(lhs, scalar_mul(Fraction(-1) if rhs.exact else -1.0, rhs))
        holds = _is_negligible(residual, tol)
        factors = _me_factors(psi_set, cut, a_hat, p0_alpha, q0_alpha) if holds else None
        return MasterEquationResult("ME", holds, None if holds else residual, factors)

    p_zero = p0_alpha.is_zero
    q_zero = q0_alpha.is_zero
    if p_zero and q_zero:
        if f0_alpha.is_zero:
            return MasterEquationResult("MEa", False, None)
        got = try_factor_in_cut(f0_alpha, cut, tol)
        return MasterEquationResult("MEa", got is not None, None if got else f0_alpha, got)
    if q_zero:
        ok, q_div, resid = _exact_divide(f0_alpha, p0_alpha, cut, left=True, tol=tol)
        factors = (p0_alpha, _with_extremes(q_div, cut, prime_side=True, n=n)) if ok else None
        return MasterEquationResult("MEb", ok, resid, factors)
    if p_zero:
        ok, p_div, resid = _exact_divide(f0_alpha, q0_alpha, cut, left=False, tol=tol)
        factors = (_with_extremes(p_div, cut, prime_side=False, n=n), q0_alpha) if ok else None
        return MasterEquationResult("MEc", ok, resid, factors)
    return MasterEquationResult("MEb", False, None)


def _is_negligible(p: MultilinearPoly, tol: float) -> bool:
    if p.is_zero:
        return True
    if p.exact:
        return False
    return max(abs(c) for c in p.terms.values()) <= tol


def _me_factors(
    psi_set: CoveringSet, cut: Cut, a_hat: Scalar,
    p0_alpha: MultilinearPoly, q0_alpha: MultilinearPoly,
) -> Tuple[MultilinearPoly, MultilinearPoly]:
    """Explicit factors when the nonzero-total-weight identity holds."""
    n = psi_set.n
    ea = cut.mask_E & a_sites_mask((1 << psi_set.nu) - 1)
    eb = cut.mask_E & b_sites_mask((1 << psi_set.nu) - 1)
    epa = cut.mask_E_prime & a_sites_mask((1 << psi_set.nu) - 1)
    epb = cut.mask_E_prime & b_sites_mask((1 << psi_set.nu) - 1)
    v1, v2 = popcount(ea), popcount(epa)
    sign1 = Fraction(-1) if v1 % 2 else Fraction(1)
    sign2 = Fraction(-1) if v2 % 2 else Fraction(1)
    p_ext = build(n, [(eb, a_hat), (ea, sign1 * a_hat)], Scale(0))
    q_ext = build(n, [(epb, Fraction(1)), (epa, sign2)], Scale(0))
    p = add(p_ext, p0_alpha)
    inv = (Fraction(1) / a_hat) if isinstance(a_hat, Fraction) else 1.0 / a_hat
    q = add(q_ext, scalar_mul(inv, q0_alpha))
    return p, q


def _with_extremes(q_div: MultilinearPoly, cut: Cut, prime_side: bool, n: int) -> MultilinearPoly:
    nu = n // 2
    mask = cut.mask_E_prime if prime_side else cut.mask_E
    a_part = mask & a_sites_mask((1 << nu) - 1)
    b_part = mask & b_sites_mask((1 << nu) - 1)
    sign = Fraction(-1) if popcount(a_part) % 2 else Fraction(1)
    ext = build(n, [(b_part, Fraction(1)), (a_part, sign)], Scale(0))
    return add(ext, q_div)


def _exact_divide(
    f: MultilinearPoly, p: MultilinearPoly, cut: Cut, left: bool, tol: float
) -> Tuple[bool, MultilinearPoly, Optional[MultilinearPoly]]:
    """Divide ``f`` by a factor supported on one side of the cut.

    Uses the rank-one structure: pick a nonzero coefficient of the divisor,
    read the corresponding slice of ``f`` as the quotient candidate, then
    verify the product reproduces ``f``.
    """
    n = f.n
    if f.is_zero:
        return True, zero(n), None
    side = cut.mask_E if left else cut.mask_E_prime
    groups = term_groups(f, side)
    pivot_mask = next(iter(sorted(p.terms)))
    pivot = p.terms[pivot_mask]
    slice_terms = groups.get(pivot_mask, {})
    if not slice_terms:
        return False, zero(n), f
    inv = (Fraction(1) / pivot) if isinstance(pivot, Fraction) else 1.0 / pivot
    q = build(n, [(m, c * inv) for m, c in slice_terms.items()], f.scale)
    recon = multiply(p, q) if left else multiply(q, p)
    residual = add(f, scalar_mul(Fraction(-1) if recon.exact else -1.0, recon))
    if _is_negligible(residual, tol):
        return True, q, None
    return False, q, residual


# ---------------------------------------------------------------------------
# grid-size lower bound
# ---------------------------------------------------------------------------


def s_E_bound(psi_set: CoveringSet, cut: Cut) -> int:
    """Largest product of image counts over varying subsets of each side.

    A product state forces the covering count to reach this bound, so a
    smaller set is immediately not a product across the cut.  Returns 1
    when either side has no varying subset (no information).
    """
    if not is_decomposable_via(psi_set, cut):
        raise NotDecomposable(f"set is not decomposable via {cut}")
    te, tep = _cut_side_tmasks(psi_set, cut)
    best_e = _max_image_count(psi_set, te)
    best_ep = _max_image_count(psi_set, tep)
    if best_e == 0 or best_ep == 0:
        return 1
    return best_e * best_ep


def _max_image_count(psi_set: CoveringSet, side_tmask: int) -> int:
    side_bits = [t for t in range(psi_set.nu) if side_tmask >> t & 1]
    best = 0
    for size in range(1, len(side_bits)):
        for combo in combinations(side_bits, size):
            k = len(distinct_images(psi_set, sum(1 << t for t in combo)))
            if k >= 2:
                best = max(best, k)
    return best


# ---------------------------------------------------------------------------
# criss-cross decomposable integers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CrissCrossDecomposition:
    """Four positive parts summing to x with equal diagonal products,
    stored in nondecreasing order."""

    parts: Tuple[int, int, int, int]

    @property
    def x(self) -> int:
        return sum(self.parts)

    def __post_init__(self):
        x1, x2, x3, x4 = self.parts
        if x1 * x4 != x2 * x3:
            raise RvbPolyError(f"parts {self.parts} violate the diagonal product identity")


def criss_cross_decompositions(x: int) -> List[CrissCrossDecomposition]:
    """All splittings x = x1+x2+x3+x4 with x2*x3 = x4*x1, as multisets.

    Every splitting comes from a factor pair x = p*q with interior grid
    lines p1, q1; none exists exactly when x is prime.
    """
    if x < 4:
        raise TooSmall("criss-cross splittings need x >= 4")
    found = set()
    for p in range(2, int(math.isqrt(x)) + 1):
        if x % p:
            continue
        q = x // p
        for p1 in range(1, p):
            for q1 in range(1, q):
                parts = tuple(sorted((p1 * q1, p1 * (q - q1), (p - p1) * q1, (p - p1) * (q - q1))))
                found.add(parts)
    return [CrissCrossDecomposition(parts) for parts in sorted(found)]


def divisibility_representations(s: int, u: int, v: int, w: int) -> List[Tuple[int, int, int, int]]:
    """Ways to write s = t1*t2 (t1, t2 >= 2) with t1 | u, t2 | v and
    (u/t1)*(v/t2) = w; nonempty whenever u*v = s*w with 0 < u, v < s."""
    reps = []
    for t1 in range(2, s + 1):
        if s % t1 or u % t1:
            continue
        t2 = s // t1
        if t2 < 2 or v % t2:
            continue
        u1, v2 = u // t1, v // t2
        if u1 * v2 == w:
            reps.append((t1, t2, u1, v2))
    return reps


# ---------------------------------------------------------------------------
# entanglement quantification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GgmReport:
    value: float
    argmax_cut: Cut
    per_cut_norms: Dict[int, float] = field(repr=False)


def _cut_top_singular_value(coeffs: Dict[int, complex], cut: Cut, homogeneous: bool) -> float:
    groups: Dict[int, Dict[Tuple[int, int], complex]] = {}
    if homogeneous:
        for mask, c in coeffs.items():
            k, l = mask & cut.mask_E, mask & cut.mask_E_prime
            groups.setdefault(popcount(k), {})[(k, l)] = c
    else:
        groups[0] = {
            (mask & cut.mask_E, mask & cut.mask_E_prime): c for mask, c in coeffs.items()
        }
    best = 0.0
    for entries in groups.values():
        rows = sorted({k for k, _ in entries})
        cols = sorted({l for _, l in entries})
        a = np.zeros((len(rows), len(cols)), dtype=np.complex128)
        rpos = {k: i for i, k in enumerate(rows)}
        cpos = {l: i for i, l in enumerate(cols)}
        for (k, l), c in entries.items():
            a[rpos[k], cpos[l]] = c
        if a.shape[0] > a.shape[1]:
            a = a.T
        sv = np.linalg.svd(a, compute_uv=False)
        best = max(best, float(sv[0]))
    return best


def ggm(
    f: MultilinearPoly,
    tol: float = 1e-10,
    threads: int = 1,
    cuts: Optional[Iterable[Cut]] = None,
) -> GgmReport:
    """Geometric entanglement over all cuts from the coefficient matrices.

    The state is unit-normalised; each cut contributes its largest
    singular value.  Homogeneous states decompose block-by-block (terms of
    equal E-size occupy disjoint rows and columns), which keeps every SVD
    at the size of the term count rather than 2**n.
    """
    if f.is_zero:
        raise ZeroPolynomial("zero polynomial has no entanglement measure")
    nrm = f.l2_norm()
    scale = f.scale.value / nrm
    coeffs = {mask: complex(c) * scale for mask, c in f.terms.items()}
    homogeneous = f.is_homogeneous()
    cut_list = list(cuts) if cuts is not None else list(all_cuts(f.n))

    def one(cut: Cut) -> Tuple[int, float]:
        return cut.mask_E, _cut_top_singular_value(coeffs, cut, homogeneous)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            norms = dict(pool.map(one, cut_list))
    else:
        norms = dict(one(c) for c in cut_list)
    best_mask = max(norms, key=lambda m: norms[m])
    best = norms[best_mask]
    value = 1.0 - best * best
    value = 0.0 if abs(value) < tol else max(0.0, value)
    return GgmReport(value, Cut(f.n, best_mask), norms)


# ---------------------------------------------------------------------------
# singleton-witness survey
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DichotomyScanReport:
    per_cut: Dict[int, Tuple[bool, Tuple[CrissCrossWitness, ...]]]

    @property
    def any_cut_survives(self) -> bool:
        return any(ok for ok, _ in self.per_cut.values())


def dichotomy_scan(psi_set: CoveringSet) -> DichotomyScanReport:
    """For every decomposable cut, run the single-site counting identities
    (the cheapest necessary conditions for a product)."""
    if psi_set.size < 2:
        raise TooSmall("scan concerns sets of at least 2 coverings")
    s = psi_set.size
    report: Dict[int, Tuple[bool, Tuple[CrissCrossWitness, ...]]] = {}
    for cut in decomposable_cuts(psi_set):
        te, tep = _cut_side_tmasks(psi_set, cut)
        witnesses: List[CrissCrossWitness] = []
        survives = True
        for t_bit in (t for t in range(psi_set.nu) if te >> t & 1):
            t1 = 1 << t_bit
            for t2_bit in (t for t in range(psi_set.nu) if tep >> t & 1):
                t2 = 1 << t2_bit
                for u1 in distinct_images(psi_set, t1):
                    for u2 in distinct_images(psi_set, t2):
                        u, v, w, z = _pair_counts(psi_set, t1, u1, t2, u2)
                        wit = CrissCrossWitness(
                            a_sites_mask(t1), b_sites_mask(u1),
                            a_sites_mask(t2), b_sites_mask(u2), u, v, w, z,
                        )
                        witnesses.append(wit)
                        if u * v != s * w:
                            survives = False
        report[cut.mask_E] = (survives, tuple(witnesses))
    return DichotomyScanReport(report)

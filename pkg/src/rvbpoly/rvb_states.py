"""Polynomial forms of covering-superposition states.

A single covering contributes the product of its dimer polynomials; a
covering set contributes the weighted sum.  Doped variants move a chosen
number of pairs from the dimer state to the polynomial constant 1 and
average over all placements.  All constructors stay in exact rational
arithmetic for rational weights: the irrational prefactors (powers of
sqrt(2) and the square root of the number of hole placements) live in the
polynomial's symbolic scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Optional, Tuple, Union

from .bitsets import popcount
from .coverings import (
    Covering,
    CoveringSet,
    a_sites_mask,
    alpha_pair_sum,
    b_sites_mask,
    distinct_images,
    omega_sum,
    set_algebras,
)
from .exceptions import InvalidGamma, RvbPolyError
from .multilinear_poly import MultilinearPoly, Scalar, Scale, build


# ---------------------------------------------------------------------------
# build descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RvbBuild:
    """A covering set plus a hole count; gamma = 0 means undoped."""

    psi_set: CoveringSet
    gamma: int = 0

    def __post_init__(self):
        if not 0 <= self.gamma < self.psi_set.nu:
            raise InvalidGamma(f"need 0 <= gamma < nu, got gamma={self.gamma}, nu={self.psi_set.nu}")

    @property
    def mu(self) -> int:
        return self.psi_set.nu - self.gamma


@dataclass(frozen=True)
class AlphaStats:
    """Weight aggregates of a covering set: the total weight, and pair sums
    on demand through the owning set."""

    psi_set: CoveringSet

    @property
    def alpha_hat(self) -> Scalar:
        return self.psi_set.alpha_hat

    def pair_sum(self, tmask: int, umask: int) -> Scalar:
        return alpha_pair_sum(self.psi_set, tmask, umask)

    def omega(self, tmask: int, umask: int) -> Scalar:
        return omega_sum(self.psi_set, tmask, umask)


# ---------------------------------------------------------------------------
# single coverings
# ---------------------------------------------------------------------------


def covering_polynomial(c: Covering) -> MultilinearPoly:
    """Product of dimer polynomials, expanded: one monomial per A-subset,
    the subset's sites paired with the complement of its image on B."""
    nu = c.nu
    full_u = (1 << nu) - 1
    terms = []
    for tmask in range(1 << nu):
        umask = full_u ^ c.image_tmask(tmask)
        sign = -1 if popcount(tmask) % 2 else 1
        terms.append((a_sites_mask(tmask) | b_sites_mask(umask), Fraction(sign)))
    return build(2 * nu, terms, Scale(nu))


# ---------------------------------------------------------------------------
# undoped superpositions
# ---------------------------------------------------------------------------


def _weighted_sum(psi_set: CoveringSet) -> MultilinearPoly:
    nu = psi_set.nu
    full_u = (1 << nu) - 1
    acc: Dict[int, Scalar] = {}
    exact = psi_set.exact
    for i, c in enumerate(psi_set.coverings):
        w = psi_set.weight(i)
        for tmask in range(1 << nu):
            umask = full_u ^ c.image_tmask(tmask)
            mask = a_sites_mask(tmask) | b_sites_mask(umask)
            inc = -w if popcount(tmask) % 2 else w
            acc[mask] = acc.get(mask, Fraction(0) if exact else 0j) + inc
    return build(2 * nu, list(acc.items()), Scale(nu))


def rvb_vector(psi_set: CoveringSet) -> MultilinearPoly:
    """Arithmetic mean of the covering polynomials.

    The result is homogeneous of degree nu, supported on every site, and
    contains the all-A and all-B monomials with unit magnitude.
    """
    if not psi_set.uniform:
        raise RvbPolyError("rvb_vector is the uniform constructor; use weighted_rvb")
    f = _weighted_sum(psi_set)
    _assert_uniform_shape(f, psi_set.nu)
    return f


def weighted_rvb(psi_set: CoveringSet) -> Tuple[MultilinearPoly, AlphaStats]:
    """Weighted covering superposition; may legitimately be zero."""
    if psi_set.weights is None:
        raise RvbPolyError("weighted_rvb needs explicit weights")
    return _weighted_sum(psi_set), AlphaStats(psi_set)


def _assert_uniform_shape(f: MultilinearPoly, expected_degree: int) -> None:
    full = (1 << f.n) - 1
    if f.is_zero or f.support() != full or not f.is_homogeneous() or f.degree() != expected_degree:
        raise AssertionError("uniform covering state lost full support or homogeneity")


# ---------------------------------------------------------------------------
# doped superpositions
# ---------------------------------------------------------------------------


def doped_rvb(psi_set: CoveringSet, gamma: int) -> MultilinearPoly:
    """Uniform superposition over all placements of ``gamma`` hole pairs.

    Each placement keeps mu = nu - gamma dimers and replaces the rest by
    the constant polynomial 1.  The result is homogeneous of degree mu
    with full support and no single-variable factor.
    """
    if not psi_set.uniform:
        raise RvbPolyError("doped_rvb is the uniform constructor; use weighted_doped_rvb")
    if gamma == 0:
        return rvb_vector(psi_set)
    f = _doped_sum(psi_set, gamma)
    _assert_uniform_shape(f, psi_set.nu - gamma)
    if _single_variable_factor(f) is not None:
        raise AssertionError("doped state acquired a single-variable factor")
    return f


def weighted_doped_rvb(psi_set: CoveringSet, gamma: int) -> Tuple[MultilinearPoly, AlphaStats]:
    """Weighted doped superposition; zero exactly when the total weight is
    zero and every avoided-image aggregate vanishes."""
    if psi_set.weights is None:
        raise RvbPolyError("weighted_doped_rvb needs explicit weights")
    if gamma == 0:
        return _weighted_sum(psi_set), AlphaStats(psi_set)
    return _doped_sum(psi_set, gamma), AlphaStats(psi_set)


def _doped_sum(psi_set: CoveringSet, gamma: int) -> MultilinearPoly:
    nu = psi_set.nu
    if not 1 <= gamma < nu:
        raise InvalidGamma(f"need 1 <= gamma < nu, got gamma={gamma}, nu={nu}")
    mu = nu - gamma
    a_hat = psi_set.alpha_hat
    placements = math.comb(nu, mu)
    terms = []
    # pure-B and pure-A monomials, weighted by the total weight
    if a_hat != 0:
        for combo in combinations(range(1, nu + 1), mu):
            umask = sum(1 << (u - 1) for u in combo)
            terms.append((b_sites_mask(umask), a_hat))
            tmask = umask
            terms.append((a_sites_mask(tmask), a_hat if mu % 2 == 0 else -a_hat))
    # mixed monomials: an A-subset together with a B-subset its image avoids
    for mu1 in range(1, mu):
        mu2 = mu - mu1
        for a_combo in combinations(range(nu), mu1):
            tmask = sum(1 << t for t in a_combo)
            sign = -1 if mu1 % 2 else 1
            for b_combo in combinations(range(nu), mu2):
                umask = sum(1 << u for u in b_combo)
                w = omega_sum(psi_set, tmask, umask)
                if w == 0:
                    continue
                terms.append((a_sites_mask(tmask) | b_sites_mask(umask), sign * w))
    return build(2 * nu, terms, Scale(mu, placements))


def _single_variable_factor(f: MultilinearPoly) -> Optional[int]:
    """Site index whose variable divides every monomial, or None."""
    if f.is_zero:
        return None
    common = (1 << f.n) - 1
    for mask in f.terms:
        common &= mask
        if common == 0:
            return None
    return common & -common


# ---------------------------------------------------------------------------
# closed-form norms
# ---------------------------------------------------------------------------


def closed_form_norm_squared(b: RvbBuild) -> Union[Fraction, float]:
    """Squared norm from the weight aggregates alone (no polynomial built).

    Undoped: 2**(-nu) * (|total|^2 * #constant-image-subsets
                          + sum over varying subsets of sum |pair weight|^2).
    Doped:   2**(-mu) * (2|total|^2 + sum |avoided-image weight|^2 / #placements).
    """
    psi = b.psi_set
    nu = psi.nu
    exact = psi.exact
    a_hat = psi.alpha_hat

    def sq(x: Scalar):
        return x * x if exact else abs(x) ** 2

    if b.gamma == 0:
        alg = set_algebras(psi)
        total = sq(a_hat) * alg.a1_count
        for tmask in alg.a2:
            for umask in distinct_images(psi, tmask):
                total += sq(alpha_pair_sum(psi, tmask, umask))
        scale2 = Fraction(1, 1 << nu)
        return scale2 * total if exact else float(scale2) * total

    mu = b.mu
    placements = math.comb(nu, mu)
    total = 2 * sq(a_hat)
    if mu >= 2:
        omega_part: Union[Fraction, float] = Fraction(0) if exact else 0.0
        for mu1 in range(1, mu):
            for a_combo in combinations(range(nu), mu1):
                tmask = sum(1 << t for t in a_combo)
                for b_combo in combinations(range(nu), mu - mu1):
                    umask = sum(1 << u for u in b_combo)
                    w = omega_sum(psi, tmask, umask)
                    if w != 0:
                        omega_part += sq(w)
        total += omega_part / placements
    scale2 = Fraction(1, 1 << mu)
    return scale2 * total if exact else float(scale2) * total


def closed_form_norm(b: RvbBuild) -> float:
    return math.sqrt(closed_form_norm_squared(b))


def build_state(b: RvbBuild) -> MultilinearPoly:
    """Construct the polynomial for any build descriptor."""
    psi = b.psi_set
    if b.gamma == 0:
        return rvb_vector(psi) if psi.uniform else weighted_rvb(psi)[0]
    return doped_rvb(psi, b.gamma) if psi.uniform else weighted_doped_rvb(psi, b.gamma)[0]

"""Dimer coverings of a 2*nu-site ladder and their structural classification.

Sites 1..2*nu split into sublattice A (odd labels) and sublattice B (even
labels).  A covering pairs every A site with a distinct B site; it is
encoded by a permutation ``perm`` of 1..nu, the A site 2t-1 being paired
with the B site 2*perm[t-1].

Subsets of A are handled as "t-masks" (bit t-1 set when site 2t-1 is in
the subset) and subsets of B as "u-masks" (bit u-1 for site 2u).  Helpers
convert these to full site masks shared with :mod:`multilinear_poly`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .exceptions import RvbPolyError, TooLarge, TooSmall, NotDecomposable
from .multilinear_poly import Cut, Scalar

MAX_ENUM_NU = 9
MAX_ALGEBRA_NU = 20


# ---------------------------------------------------------------------------
# mask conversions
# ---------------------------------------------------------------------------


def a_sites_mask(tmask: int) -> int:
    """Full site mask of the A-subset encoded by ``tmask``."""
    out = 0
    t = 0
    while tmask:
        if tmask & 1:
            out |= 1 << (2 * t)
        tmask >>= 1
        t += 1
    return out


def b_sites_mask(umask: int) -> int:
    """Full site mask of the B-subset encoded by ``umask``."""
    out = 0
    u = 0
    while umask:
        if umask & 1:
            out |= 1 << (2 * u + 1)
        umask >>= 1
        u += 1
    return out


def tmask_of_sites(site_mask: int) -> int:
    """t-mask of the A sites present in a full site mask."""
    out = 0
    t = 0
    while site_mask:
        if site_mask & 1:
            out |= 1 << t
        site_mask >>= 2
        t += 1
    return out


def umask_of_sites(site_mask: int) -> int:
    """u-mask of the B sites present in a full site mask."""
    return tmask_of_sites(site_mask >> 1)


# ---------------------------------------------------------------------------
# coverings
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Covering:
    """A perfect A-to-B pairing given by a permutation of 1..nu."""

    nu: int
    perm: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, self.nu + 1)):
            raise RvbPolyError(f"perm {self.perm} is not a permutation of 1..{self.nu}")

    def image_of_site(self, a: int) -> int:
        """The B site paired with A site ``a`` (a odd)."""
        return 2 * self.perm[(a - 1) // 2]

    def pairs(self) -> List[Tuple[int, int]]:
        return [(2 * t - 1, 2 * self.perm[t - 1]) for t in range(1, self.nu + 1)]

    def image_tmask(self, tmask: int) -> int:
        """u-mask of the image of an A-subset given as a t-mask."""
        out = 0
        t = 0
        while tmask:
            if tmask & 1:
                out |= 1 << (self.perm[t] - 1)
            tmask >>= 1
            t += 1
        return out

    def restriction(self, a_sites: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
        """The pairing restricted to the given A sites, as sorted pairs."""
        return tuple(sorted((a, self.image_of_site(a)) for a in a_sites))


def enumerate_all(nu: int) -> List[Covering]:
    """Every covering, in lexicographic order of the permutation."""
    if nu < 1:
        raise TooSmall("need nu >= 1")
    if nu > MAX_ENUM_NU:
        raise TooLarge(f"full enumeration capped at nu <= {MAX_ENUM_NU} ({MAX_ENUM_NU}! coverings)")
    return [Covering(nu, p) for p in permutations(range(1, nu + 1))]


def _path_matchings(nu: int) -> List[Tuple[int, ...]]:
    """Permutations that are products of disjoint adjacent transpositions."""
    results: List[Tuple[int, ...]] = []

    def extend(t: int, acc: List[int]):
        if t > nu:
            results.append(tuple(acc))
            return
        extend(t + 1, acc + [t])
        if t + 1 <= nu:
            extend(t + 2, acc + [t + 1, t])

    extend(1, [])
    return results


def enumerate_nn(nu: int) -> List[Covering]:
    """Coverings whose permutation matrix is banded with bandwidth <= 1.

    These are exactly the products of disjoint adjacent transpositions;
    their number is the Fibonacci number F_nu (F_0 = F_1 = 1).
    """
    if nu < 1:
        raise TooSmall("need nu >= 1")
    return [Covering(nu, p) for p in sorted(_path_matchings(nu))]


def enumerate_pnn(nu: int) -> List[Covering]:
    """Banded coverings read cyclically: the wrap pairings t=1 -> nu and
    t=nu -> 1 are also allowed.

    Concretely these are the products of disjoint cyclically-adjacent
    transpositions together with the two cyclic rotations.  This is the
    "cyclic bandwidth <= 1" reading of periodic nearest-neighbour; it is a
    superset of :func:`enumerate_nn` for every nu.
    """
    if nu < 2:
        raise TooSmall("need nu >= 2 for periodic coverings")
    perms = set(_path_matchings(nu))
    if nu >= 3:
        # matchings that use the wrap bond (nu, 1)
        for inner in _path_matchings(nu - 2):
            p = [nu] + [x + 1 for x in inner] + [1]
            perms.add(tuple(p))
    # the two rotations
    perms.add(tuple(list(range(2, nu + 1)) + [1]))
    perms.add(tuple([nu] + list(range(1, nu))))
    return [Covering(nu, p) for p in sorted(perms)]


# ---------------------------------------------------------------------------
# covering sets
# ---------------------------------------------------------------------------


WeightList = Union[Sequence[Fraction], Sequence[complex]]


@dataclass(frozen=True)
class CoveringSet:
    """An ordered set of distinct coverings with optional superposition weights.

    Weights, when present, are nonzero and normalised so the sum of their
    absolute values is 1 (exactly for rational weights, to 1e-12 for
    complex ones).
    """

    nu: int
    coverings: Tuple[Covering, ...]
    weights: Optional[Tuple[Scalar, ...]] = None

    def __post_init__(self):
        if not self.coverings:
            raise TooSmall("a covering set needs at least one covering")
        if any(c.nu != self.nu for c in self.coverings):
            raise RvbPolyError("coverings with mismatched nu")
        if len(set(self.coverings)) != len(self.coverings):
            raise RvbPolyError("duplicate coverings in set")
        if self.weights is not None:
            if len(self.weights) != len(self.coverings):
                raise RvbPolyError("weight count differs from covering count")
            if any(w == 0 for w in self.weights):
                raise RvbPolyError("weights must be nonzero")
            object.__setattr__(self, "weights", _normalize_weights(self.weights))

    @property
    def size(self) -> int:
        return len(self.coverings)

    @property
    def n(self) -> int:
        return 2 * self.nu

    @property
    def uniform(self) -> bool:
        return self.weights is None

    @property
    def exact(self) -> bool:
        return self.weights is None or all(isinstance(w, Fraction) for w in self.weights)

    def weight(self, i: int) -> Scalar:
        if self.weights is None:
            return Fraction(1, self.size)
        return self.weights[i]

    @property
    def alpha_hat(self) -> Scalar:
        """Sum of the weights (1 for a uniform set)."""
        if self.weights is None:
            return Fraction(1)
        return sum(self.weights)

    def with_weights(self, weights: WeightList) -> "CoveringSet":
        return CoveringSet(self.nu, self.coverings, tuple(weights))


def _normalize_weights(weights: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    if all(isinstance(w, (Fraction, int)) for w in weights):
        fr = [Fraction(w) for w in weights]
        total = sum(abs(w) for w in fr)
        return tuple(w / total for w in fr)
    cx = [complex(w) for w in weights]
    total = sum(abs(w) for w in cx)
    cx = [w / total for w in cx]
    if abs(sum(abs(w) for w in cx) - 1.0) > 1e-12:
        raise RvbPolyError("weight normalisation failed")
    return tuple(cx)


def covering_set(coverings: Iterable[Covering], weights: Optional[WeightList] = None) -> CoveringSet:
    cov = tuple(coverings)
    return CoveringSet(cov[0].nu, cov, tuple(weights) if weights is not None else None)


# ---------------------------------------------------------------------------
# weight aggregates over sub-pairings
# ---------------------------------------------------------------------------


def alpha_pair_sum(psi_set: CoveringSet, tmask: int, umask: int) -> Scalar:
    """Total weight of coverings that map the A-subset ``tmask`` exactly
    onto the B-subset ``umask``."""
    total: Scalar = Fraction(0) if psi_set.exact else 0j
    for i, c in enumerate(psi_set.coverings):
        if c.image_tmask(tmask) == umask:
            total = total + psi_set.weight(i)
    return total


def omega_sum(psi_set: CoveringSet, tmask: int, umask: int) -> Scalar:
    """Total weight of coverings whose image of the A-subset ``tmask``
    avoids the B-subset ``umask`` entirely."""
    total: Scalar = Fraction(0) if psi_set.exact else 0j
    for i, c in enumerate(psi_set.coverings):
        if c.image_tmask(tmask) & umask == 0:
            total = total + psi_set.weight(i)
    return total


# ---------------------------------------------------------------------------
# the constant-image algebra and decomposability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetAlgebras:
    """Partition of the A-subsets by whether their image is covering-independent.

    ``a1`` holds the subsets with a single image across the whole set (as
    (t-mask, u-mask) pairs); ``a2`` holds everything else.  ``a1`` always
    contains the empty set and all of A, is closed under complement, and
    has at least 3 members exactly when the set is decomposable.
    """

    nu: int
    a1: Tuple[Tuple[int, int], ...]
    a2: Tuple[int, ...]

    @property
    def a1_count(self) -> int:
        return len(self.a1)

    @property
    def a2_count(self) -> int:
        return len(self.a2)

    def a1_tmasks(self) -> FrozenSet[int]:
        return frozenset(t for t, _ in self.a1)


def distinct_images(psi_set: CoveringSet, tmask: int) -> List[int]:
    """Distinct image u-masks of an A-subset, in first-occurrence order."""
    seen: List[int] = []
    for c in psi_set.coverings:
        img = c.image_tmask(tmask)
        if img not in seen:
            seen.append(img)
    return seen


def set_algebras(psi_set: CoveringSet) -> SetAlgebras:
    if psi_set.nu > MAX_ALGEBRA_NU:
        raise TooLarge(f"image-algebra scan capped at nu <= {MAX_ALGEBRA_NU}")
    a1: List[Tuple[int, int]] = []
    a2: List[int] = []
    for tmask in range(1 << psi_set.nu):
        images = distinct_images(psi_set, tmask)
        if len(images) == 1:
            a1.append((tmask, images[0]))
        else:
            a2.append(tmask)
    if psi_set.size >= 2:
        _assert_pairwise_exclusion(psi_set, frozenset(t for t, _ in a1))
    return SetAlgebras(psi_set.nu, tuple(a1), tuple(a2))


def _assert_pairwise_exclusion(psi_set: CoveringSet, a1_tmasks: FrozenSet[int]) -> None:
    # For a witnessing site with covering-dependent image, a second site and
    # the pair containing both cannot both have constant images.
    witness = None
    for t in range(psi_set.nu):
        if (1 << t) not in a1_tmasks:
            witness = t
            break
    if witness is None:
        raise AssertionError("distinct coverings must disagree on some single site")
    for t2 in range(psi_set.nu):
        if t2 == witness:
            continue
        single = 1 << t2
        pair = (1 << witness) | single
        if single in a1_tmasks and pair in a1_tmasks:
            raise AssertionError("constant-image algebra violates pairwise exclusion")


def decomposable_cuts(psi_set: CoveringSet) -> List[Cut]:
    """All bipartitions E = A1 u psi(A1) built from proper constant-image
    A-subsets, deduplicated as unordered pairs and sorted canonically."""
    if psi_set.size < 2:
        raise TooSmall("decomposability concerns sets of at least 2 coverings")
    full_t = (1 << psi_set.nu) - 1
    alg = set_algebras(psi_set)
    seen: Dict[int, Cut] = {}
    for tmask, umask in alg.a1:
        if tmask in (0, full_t):
            continue
        e_mask = a_sites_mask(tmask) | b_sites_mask(umask)
        cut = Cut(psi_set.n, e_mask).canonical()
        seen.setdefault(cut.mask_E, cut)
    return [seen[m] for m in sorted(seen)]


def is_decomposable_via(psi_set: CoveringSet, cut: Cut) -> bool:
    """Every covering maps E's A sites onto E's B sites."""
    tmask = tmask_of_sites(cut.mask_E)
    umask = umask_of_sites(cut.mask_E)
    if bin(tmask).count("1") != bin(umask).count("1"):
        return False
    return all(c.image_tmask(tmask) == umask for c in psi_set.coverings)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


RestrictionKey = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class Grid:
    """Incidence of a covering set inside the product of its restrictions.

    Row ``j`` is the j-th distinct restriction to E, column ``k`` the k-th
    distinct restriction to E'; ``incidence[j][k]`` says whether that
    combination occurs in the set.  ``assignment[i]`` locates covering i.
    """

    cut: Cut
    row_labels: Tuple[RestrictionKey, ...]
    col_labels: Tuple[RestrictionKey, ...]
    incidence: Tuple[Tuple[bool, ...], ...]
    assignment: Tuple[Tuple[int, int], ...]

    @property
    def j_count(self) -> int:
        return len(self.row_labels)

    @property
    def k_count(self) -> int:
        return len(self.col_labels)

    @property
    def size(self) -> int:
        return len(self.assignment)

    def t_set(self, j: int) -> FrozenSet[int]:
        return frozenset(k for k in range(self.k_count) if self.incidence[j][k])

    def s_set(self, k: int) -> FrozenSet[int]:
        return frozenset(j for j in range(self.j_count) if self.incidence[j][k])

    @property
    def is_full(self) -> bool:
        return all(all(row) for row in self.incidence)


def grid(psi_set: CoveringSet, cut: Cut) -> Grid:
    if not is_decomposable_via(psi_set, cut):
        raise NotDecomposable(f"set is not decomposable via {cut}")
    a_in_e = [a for a in cut.sites_E() if a % 2 == 1]
    a_in_ep = [a for a in cut.sites_E_prime() if a % 2 == 1]
    rows: List[RestrictionKey] = []
    cols: List[RestrictionKey] = []
    assignment: List[Tuple[int, int]] = []
    for c in psi_set.coverings:
        rk, ck = c.restriction(a_in_e), c.restriction(a_in_ep)
        if rk not in rows:
            rows.append(rk)
        if ck not in cols:
            cols.append(ck)
        assignment.append((rows.index(rk), cols.index(ck)))
    inc = [[False] * len(cols) for _ in rows]
    for j, k in assignment:
        inc[j][k] = True
    return Grid(cut, tuple(rows), tuple(cols), tuple(tuple(r) for r in inc), tuple(assignment))


class GridShape:
    FACTORABLE = "factorable"
    FLAT = "flat"
    POLE = "pole"
    STEEP = "steep"
    HILLY = "hilly"


def classify(psi_set: CoveringSet, cut: Cut) -> FrozenSet[str]:
    """Shape labels of the grid via this cut (flat/pole imply factorable)."""
    g = grid(psi_set, cut)
    labels = set()
    if g.is_full:
        labels.add(GridShape.FACTORABLE)
    if g.k_count == 1:
        labels.add(GridShape.FLAT)
    if g.j_count == 1:
        labels.add(GridShape.POLE)
    if g.j_count == g.k_count == g.size:
        labels.add(GridShape.STEEP)
    if not labels & {GridShape.FACTORABLE, GridShape.STEEP}:
        labels.add(GridShape.HILLY)
    return frozenset(labels)


def is_flat_or_pole(psi_set: CoveringSet) -> bool:
    """Whether some bipartition sees the set as a single row or column."""
    try:
        cuts = decomposable_cuts(psi_set)
    except TooSmall:
        return False
    for cut in cuts:
        shapes = classify(psi_set, cut)
        if shapes & {GridShape.FLAT, GridShape.POLE}:
            return True
    return False


# ---------------------------------------------------------------------------
# quick decomposability report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuickTestReport:
    a1_count: int
    t_hat: int
    term_count: int
    threshold: int
    decomposable: bool
    singleton_pair_cut: Optional[Cut]


def decomposability_quick_tests(psi_set: CoveringSet) -> QuickTestReport:
    """Counting shortcuts that decide decomposability without a cut scan.

    ``t_hat`` counts the full-weight monomials of the uniform state (those
    whose pairing is realised by every covering); it equals the size of the
    constant-image algebra, and the set is decomposable exactly when it is
    at least 3 (equivalently at least 4).  A total term count below
    2**nu + 2*nu forces a decomposition through a single A-B pair, in
    which case the state is a product across that pair.
    """
    if psi_set.nu < 3:
        raise TooSmall("quick tests need nu >= 3")
    if psi_set.size < 2:
        raise TooSmall("quick tests need at least 2 coverings")
    alg = set_algebras(psi_set)
    t = 0
    t_hat = 0
    for tmask in range(1 << psi_set.nu):
        k = len(distinct_images(psi_set, tmask))
        t += k
        if k == 1:
            t_hat += 1
    threshold = (1 << psi_set.nu) + 2 * psi_set.nu
    decomposable = alg.a1_count >= 3
    pair_cut = None
    for tmask, umask in alg.a1:
        if bin(tmask).count("1") == 1:
            pair_cut = Cut(psi_set.n, a_sites_mask(tmask) | b_sites_mask(umask))
            break
    if t < threshold and pair_cut is None:
        raise AssertionError("term count below threshold must force a pair decomposition")
    return QuickTestReport(alg.a1_count, t_hat, t, threshold, decomposable, pair_cut)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_json_dict(psi_set: CoveringSet) -> dict:
    out: dict = {"nu": psi_set.nu, "coverings": [list(c.perm) for c in psi_set.coverings]}
    if psi_set.weights is not None:
        ws = []
        for w in psi_set.weights:
            if isinstance(w, Fraction):
                ws.append([w.numerator, w.denominator])
            else:
                ws.append([float(w.real), float(w.imag)])
        out["weights"] = ws
    return out


def from_json_dict(d: dict) -> CoveringSet:
    nu = int(d["nu"])
    cov = tuple(Covering(nu, tuple(int(x) for x in p)) for p in d["coverings"])
    weights = None
    if d.get("weights") is not None:
        ws: List[Scalar] = []
        for a, b in d["weights"]:
            if isinstance(a, int) and isinstance(b, int):
                ws.append(Fraction(a, b))
            else:
                ws.append(complex(float(a), float(b)))
        weights = tuple(ws)
    return CoveringSet(nu, cov, weights)

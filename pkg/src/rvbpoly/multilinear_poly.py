"""Multilinear polynomials with degree at most one in each variable.

A polynomial over variables X_1..X_n with per-variable degree <= 1 is the
coordinate form of an n-qubit pure state: the monomial X^K (K a subset of
sites, encoded as a bitmask) stands for the basis vector whose sites in K
are |1> and the rest |0>.  Monomials are orthonormal, so the Euclidean
geometry of the state space is available directly on coefficients.

Representation
--------------
``MultilinearPoly`` stores a map ``mask -> coefficient`` plus a global
scale ``2**(-k/2) / sqrt(m)``.  Keeping the scale symbolic lets every
state built from dimer coverings stay in exact rational arithmetic: the
irrational prefactors (powers of sqrt(2), square roots of covering
counts) never touch the coefficients.

Two coefficient modes exist: exact ``Fraction`` (the default for covering
constructions) and ``complex`` floats (for arbitrary superposition
weights).  Mixed inputs are coerced to complex.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .bitsets import iter_submasks_of_size, mask_from_sites, popcount, sites_from_mask
from .exceptions import (
    ConstantPolynomial,
    InvalidDegree,
    OverlappingSupport,
    RvbPolyError,
    SubsetOutOfRange,
    TooLarge,
    ZeroPolynomial,
)

Scalar = Union[Fraction, complex]

#: Default relative tolerance for numerical rank decisions.
DEFAULT_TOL = 1e-9

#: Hard cap for cut scans (2**(n-1) bipartitions).
MAX_SCAN_SITES = 24


# ---------------------------------------------------------------------------
# scale
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scale:
    """Global multiplicative factor ``2**(-half_log2/2) / sqrt(sqrt_denom)``.

    ``sqrt_denom`` is kept odd (powers of two are folded into
    ``half_log2``), which gives each scale a unique normal form.
    """

    half_log2: int = 0
    sqrt_denom: int = 1

    def __post_init__(self):
        if self.sqrt_denom < 1:
            raise RvbPolyError(f"sqrt_denom must be >= 1, got {self.sqrt_denom}")
        m, k = self.sqrt_denom, self.half_log2
        while m % 2 == 0:
            m //= 2
            k += 1
        object.__setattr__(self, "sqrt_denom", m)
        object.__setattr__(self, "half_log2", k)

    def __mul__(self, other: "Scale") -> "Scale":
        return Scale(self.half_log2 + other.half_log2, self.sqrt_denom * other.sqrt_denom)

    @property
    def squared(self) -> Fraction:
        """Exact value of the squared scale factor."""
        k = self.half_log2
        if k >= 0:
            return Fraction(1, (1 << k) * self.sqrt_denom)
        return Fraction(1 << (-k), self.sqrt_denom)

    @property
    def value(self) -> float:
        return math.sqrt(self.squared)

    def ratio_squared(self, other: "Scale") -> Fraction:
        """(self / other) ** 2 as an exact rational."""
        return self.squared / other.squared


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    pn, pd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


# ---------------------------------------------------------------------------
# cuts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cut:
    """A bipartition (E, E') of the sites 1..n, stored as the mask of E."""

    n: int
    mask_E: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        if not (0 < self.mask_E < full):
            raise RvbPolyError(f"cut mask {self.mask_E:#x} is not a proper bipartition of {self.n} sites")

    @property
    def mask_E_prime(self) -> int:
        return ((1 << self.n) - 1) ^ self.mask_E

    @property
    def size_E(self) -> int:
        return popcount(self.mask_E)

    @property
    def size_E_prime(self) -> int:
        return self.n - self.size_E

    def sites_E(self) -> List[int]:
        return sites_from_mask(self.mask_E)

    def sites_E_prime(self) -> List[int]:
        return sites_from_mask(self.mask_E_prime)

    def canonical(self) -> "Cut":
        """The representative of the unordered pair with site 1 in E."""
        if self.mask_E & 1:
            return self
        return Cut(self.n, self.mask_E_prime)

    def same_bipartition(self, other: "Cut") -> bool:
        return self.n == other.n and self.canonical().mask_E == other.canonical().mask_E

    def __str__(self) -> str:
        return f"({set(self.sites_E())}|{set(self.sites_E_prime())})"


def all_cuts(n: int) -> Iterator[Cut]:
    """All 2**(n-1) - 1 bipartitions, one per unordered pair (site 1 in E)."""
    if n > MAX_SCAN_SITES:
        raise TooLarge(f"cut scan capped at {MAX_SCAN_SITES} sites, got {n}")
    full = (1 << n) - 1
    for rest in range(1 << (n - 1)):
        mask = (rest << 1) | 1
        if mask != full:
            yield Cut(n, mask)


def even_cuts(n: int) -> Iterator[Cut]:
    for cut in all_cuts(n):
        if cut.size_E % 2 == 0:
            yield cut


# ---------------------------------------------------------------------------
# the polynomial
# ---------------------------------------------------------------------------


def _coerce_terms(terms: Dict[int, Scalar]) -> Tuple[Dict[int, Scalar], bool]:
    """Normalise coefficient types; returns (terms, exact)."""
    exact = True
    for c in terms.values():
        if isinstance(c, (complex, float)) and not isinstance(c, bool):
            exact = False
            break
        if not isinstance(c, (Fraction, int)):
            exact = False
            break
    if exact:
        out = {m: (c if isinstance(c, Fraction) else Fraction(c)) for m, c in terms.items()}
        return {m: c for m, c in out.items() if c != 0}, True
    out = {m: complex(c) for m, c in terms.items()}
    return {m: c for m, c in out.items() if c != 0}, False


@dataclass(frozen=True)
class MultilinearPoly:
    """Immutable multilinear polynomial; construct through :func:`build`."""

    n: int
    scale: Scale
    terms: Dict[int, Scalar]
    exact: bool

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> int:
        s = 0
        for mask in self.terms:
            s |= mask
        return s

    def degree(self) -> int:
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no degree")
        return max(popcount(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no degree")
        sizes = {popcount(m) for m in self.terms}
        return len(sizes) == 1

    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, mask: int) -> Scalar:
        return self.terms.get(mask, Fraction(0) if self.exact else 0j)

    # -- norms ---------------------------------------------------------------

    def norm_squared(self) -> Union[Fraction, float]:
        """Squared Euclidean norm; exact when the polynomial is exact."""
        if self.exact:
            return self.scale.squared * sum(c * c for c in self.terms.values())
        return float(self.scale.squared) * sum(abs(c) ** 2 for c in self.terms.values())

    def l2_norm(self) -> float:
        return math.sqrt(self.norm_squared())

    # -- conversions ----------------------------------------------------------

    def to_float(self) -> "MultilinearPoly":
        if not self.exact:
            return self
        return MultilinearPoly(self.n, self.scale, {m: complex(c) for m, c in self.terms.items()}, False)

    def sorted_terms(self) -> List[Tuple[int, Scalar]]:
        return sorted(self.terms.items())

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        bits = []
        for mask, c in self.sorted_terms():
            mono = "*".join(f"X{j}" for j in sites_from_mask(mask)) or "1"
            bits.append(f"({c})*{mono}")
        pre = ""
        if self.scale.half_log2 or self.scale.sqrt_denom != 1:
            pre = f"2^(-{self.scale.half_log2}/2)/sqrt({self.scale.sqrt_denom}) * "
        return pre + " + ".join(bits)


def build(
    n: int,
    terms: Iterable[Tuple[Union[int, Iterable[int]], Scalar]],
    scale: Scale = Scale(),
) -> MultilinearPoly:
    """Assemble a polynomial, merging duplicate monomials and dropping zeros.

    Subsets may be given as bitmasks or as iterables of 1-based sites.
    """
    acc: Dict[int, Scalar] = {}
    limit = 1 << n
    for subset, coeff in terms:
        mask = subset if isinstance(subset, int) else mask_from_sites(subset)
        if not 0 <= mask < limit:
            raise SubsetOutOfRange(f"subset mask {mask} out of range for n={n}")
        if mask in acc:
            acc[mask] = acc[mask] + coeff
        else:
            acc[mask] = coeff
    canon, exact = _coerce_terms(acc)
    return MultilinearPoly(n, scale, canon, exact)


def zero(n: int) -> MultilinearPoly:
    return MultilinearPoly(n, Scale(), {}, True)


def support(p: MultilinearPoly) -> int:
    return p.support()


def degree(p: MultilinearPoly) -> int:
    return p.degree()


def is_homogeneous(p: MultilinearPoly) -> bool:
    return p.is_homogeneous()


def term_count(p: MultilinearPoly) -> int:
    return p.term_count()


def l2_norm(p: MultilinearPoly) -> float:
    return p.l2_norm()


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------


def scalar_mul(c: Scalar, p: MultilinearPoly) -> MultilinearPoly:
    terms = {m: c * v for m, v in p.terms.items()}
    canon, exact = _coerce_terms(terms)
    return MultilinearPoly(p.n, p.scale, canon, exact)


def add(p: MultilinearPoly, q: MultilinearPoly) -> MultilinearPoly:
    """Sum of two polynomials on the same sites.

    The result carries ``p``'s scale; ``q``'s coefficients are rescaled by
    the exact ratio of the two scale factors.  If that ratio is irrational
    and both operands are exact, the operands are converted to floats.
    """
    if p.n != q.n:
        raise RvbPolyError("cannot add polynomials on different site counts")
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    ratio2 = q.scale.ratio_squared(p.scale)
    r = _rational_sqrt(ratio2)
    if r is None:
        pf, qf = p.to_float(), q.to_float()
        rf = math.sqrt(float(ratio2))
        terms: Dict[int, Scalar] = dict(pf.terms)
        for m, c in qf.terms.items():
            terms[m] = terms.get(m, 0j) + c * rf
        canon, exact = _coerce_terms(terms)
        return MultilinearPoly(p.n, p.scale, canon, exact)
    terms = dict(p.terms)
    exact_mix = p.exact and q.exact
    for m, c in q.terms.items():
        inc = c * r if exact_mix else complex(c) * float(r)
        terms[m] = terms.get(m, Fraction(0) if exact_mix else 0j) + inc
    canon, exact = _coerce_terms(terms)
    return MultilinearPoly(p.n, p.scale, canon, exact)


def multiply(p: MultilinearPoly, q: MultilinearPoly) -> MultilinearPoly:
    """Product of polynomials with disjoint supports; scales combine."""
    if p.n != q.n:
        raise RvbPolyError("cannot multiply polynomials on different site counts")
    if p.support() & q.support():
        raise OverlappingSupport(
            f"supports overlap on sites {sites_from_mask(p.support() & q.support())}"
        )
    terms: Dict[int, Scalar] = {}
    for mp, cp in p.terms.items():
        for mq, cq in q.terms.items():
            m = mp | mq
            c = cp * cq
            terms[m] = terms.get(m, 0) + c
    canon, exact = _coerce_terms(terms)
    return MultilinearPoly(p.n, p.scale * q.scale, canon, exact)


def equals_vector(p: MultilinearPoly, q: MultilinearPoly, tol: float = 1e-12) -> bool:
    """Whether two polynomials represent the same vector (scales reconciled)."""
    if p.n != q.n:
        return False
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    diff = add(p, scalar_mul(Fraction(-1) if q.exact else -1.0, q))
    if diff.is_zero:
        return True
    if diff.exact:
        return False
    scale = max(max(abs(c) for c in p.terms.values()), 1.0)
    return all(abs(c) <= tol * scale for c in diff.terms.values())


# ---------------------------------------------------------------------------
# coefficient matrix in a cut
# ---------------------------------------------------------------------------


def ordered_subsets(sites_mask: int) -> List[int]:
    """All subsets of a site set, grouped in blocks of equal size.

    Within a size block the order is ascending by bitmask, except that the
    upper half of blocks (size > m/2) mirror the lower half through
    complementation, and the middle block of an even-sized set is listed as
    "subsets containing the lowest site, ascending" followed by their
    complements in reverse.  With this order, complementing every subset is
    the positional reversal pairing block j with block m-j, which makes the
    coefficient-matrix symmetry of homogeneous covering states a positional
    statement (see :func:`coefficient_matrix`).
    """
    m = popcount(sites_mask)
    blocks: Dict[int, List[int]] = {}
    for j in range(m // 2 + 1):
        if 2 * j < m:
            blocks[j] = sorted(iter_submasks_of_size(sites_mask, j))
            blocks[m - j] = [sites_mask ^ k for k in blocks[j]]
        else:
            anchor = sites_mask & -sites_mask
            half = sorted(k for k in iter_submasks_of_size(sites_mask, j) if k & anchor)
            blocks[j] = half + [sites_mask ^ k for k in reversed(half)]
    out: List[int] = []
    for j in range(m + 1):
        out.extend(blocks[j])
    return out


@dataclass(frozen=True)
class CoefficientMatrix:
    """Coefficients of a polynomial arranged as a 2**#E x 2**#E' matrix.

    Entry (K, L) is the coefficient of X^(K u L).  Rows and columns follow
    :func:`ordered_subsets` of E and E', so equal-size blocks are
    contiguous and complementation acts positionally.
    """

    cut: Cut
    row_order: Tuple[int, ...]
    col_order: Tuple[int, ...]
    entries: Tuple[Tuple[Scalar, ...], ...]
    exact: bool

    def block_rows(self, j: int) -> range:
        start = sum(math.comb(self.cut.size_E, i) for i in range(j))
        return range(start, start + math.comb(self.cut.size_E, j))

    def block_cols(self, k: int) -> range:
        start = sum(math.comb(self.cut.size_E_prime, i) for i in range(k))
        return range(start, start + math.comb(self.cut.size_E_prime, k))

    def block(self, j: int, k: int) -> List[List[Scalar]]:
        rows, cols = self.block_rows(j), self.block_cols(k)
        return [[self.entries[r][c] for c in cols] for r in rows]

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(e) for e in row] for row in self.entries], dtype=np.complex128)


def coefficient_matrix(p: MultilinearPoly, cut: Cut) -> CoefficientMatrix:
    if p.n != cut.n:
        raise RvbPolyError("cut site count differs from polynomial site count")
    row_order = tuple(ordered_subsets(cut.mask_E))
    col_order = tuple(ordered_subsets(cut.mask_E_prime))
    row_pos = {m: i for i, m in enumerate(row_order)}
    col_pos = {m: i for i, m in enumerate(col_order)}
    zero_c: Scalar = Fraction(0) if p.exact else 0j
    grid: List[List[Scalar]] = [[zero_c] * len(col_order) for _ in row_order]
    for mask, c in p.terms.items():
        grid[row_pos[mask & cut.mask_E]][col_pos[mask & cut.mask_E_prime]] = c
    return CoefficientMatrix(cut, row_order, col_order, tuple(tuple(r) for r in grid), p.exact)


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


def _bareiss_rank(rows: List[List[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    col = 0
    while rank < nrows and col < ncols:
        piv = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][col]
        for i in range(rank + 1, nrows):
            fi = m[i][col]
            for j in range(col + 1, ncols):
                m[i][j] = (pivot * m[i][j] - fi * m[rank][j]) // prev
            m[i][col] = 0
        prev = pivot
        rank += 1
        col += 1
    return rank


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    denom_lcm = 1
    for r in rows:
        for e in r:
            denom_lcm = denom_lcm * e.denominator // math.gcd(denom_lcm, e.denominator)
    ints = [[int(e * denom_lcm) for e in r] for r in rows]
    return _bareiss_rank(ints)


def numeric_rank(a: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def matrix_rank(m: CoefficientMatrix, tol: float = DEFAULT_TOL) -> int:
    """Exact rank for rational entries, singular-value rank otherwise."""
    if m.exact:
        return exact_rank(m.entries)
    return numeric_rank(m.to_numpy(), tol)


# ---------------------------------------------------------------------------
# factorization across a cut
# ---------------------------------------------------------------------------


def term_groups(p: MultilinearPoly, mask_E: int) -> Dict[int, Dict[int, Scalar]]:
    """Group terms by their E-part: K -> {L -> coefficient}."""
    groups: Dict[int, Dict[int, Scalar]] = {}
    mask_rest = ((1 << p.n) - 1) ^ mask_E
    for mask, c in p.terms.items():
        groups.setdefault(mask & mask_E, {})[mask & mask_rest] = c
    return groups


def _factor_from_groups_exact(
    groups: Dict[int, Dict[int, Scalar]]
) -> Optional[Tuple[Dict[int, Scalar], Dict[int, Scalar]]]:
    """Rank-one test by row proportionality; exact coefficients only."""
    ks = sorted(groups)
    ref = groups[ks[0]]
    ref_keys = set(ref)
    ref_pivot = min(ref_keys)
    p_vec: Dict[int, Scalar] = {}
    for k in ks:
        row = groups[k]
        if set(row) != ref_keys:
            return None
        ratio = row[ref_pivot] / ref[ref_pivot]
        for l, c in row.items():
            if c != ratio * ref[l]:
                return None
        p_vec[k] = ratio
    return p_vec, dict(ref)


def _factor_from_groups_float(
    groups: Dict[int, Dict[int, Scalar]], tol: float
) -> Optional[Tuple[Dict[int, Scalar], Dict[int, Scalar]]]:
    """Rank-one test via SVD on the occupied rows/columns."""
    ks = sorted(groups)
    ls = sorted({l for row in groups.values() for l in row})
    a = np.zeros((len(ks), len(ls)), dtype=np.complex128)
    lpos = {l: i for i, l in enumerate(ls)}
    for i, k in enumerate(ks):
        for l, c in groups[k].items():
            a[i, lpos[l]] = complex(c)
    u, sv, vh = np.linalg.svd(a)
    if sv[0] == 0.0 or (sv.size > 1 and sv[1] > tol * sv[0]):
        return None
    p_vec = {k: complex(u[i, 0] * sv[0]) for i, k in enumerate(ks)}
    q_vec = {l: complex(vh[0, i]) for i, l in enumerate(ls)}
    # drop numerically-zero components
    pmax = max(abs(c) for c in p_vec.values())
    qmax = max(abs(c) for c in q_vec.values())
    p_vec = {k: c for k, c in p_vec.items() if abs(c) > tol * pmax}
    q_vec = {l: c for l, c in q_vec.items() if abs(c) > tol * qmax}
    if not p_vec or not q_vec:
        return None
    return p_vec, q_vec


def try_factor_in_cut(
    p: MultilinearPoly, cut: Cut, tol: float = DEFAULT_TOL
) -> Optional[Tuple[MultilinearPoly, MultilinearPoly]]:
    """Split ``p`` as a product across the cut, if possible.

    Returns ``(f, g)`` with support(f) in E, support(g) in E', and
    ``multiply(f, g)`` reproducing ``p``.  ``f`` is normalised so its
    lowest-mask nonzero coefficient is 1.  Returns ``None`` when the
    coefficient matrix of the cut has rank >= 2.
    """
    if p.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    groups = term_groups(p, cut.mask_E)
    if p.exact:
        split = _factor_from_groups_exact(groups)
    else:
        split = _factor_from_groups_float(groups, tol)
    if split is None:
        return None
    p_vec, q_vec = split
    pivot_mask = min(k for k, c in p_vec.items())
    pivot = p_vec[pivot_mask]
    f = MultilinearPoly(p.n, Scale(), *_canon_pair({k: c / pivot for k, c in p_vec.items()}))
    g_terms = {l: c * pivot for l, c in q_vec.items()}
    g = MultilinearPoly(p.n, p.scale, *_canon_pair(g_terms))
    return f, g


def _canon_pair(terms: Dict[int, Scalar]) -> Tuple[Dict[int, Scalar], bool]:
    return _coerce_terms(terms)


def irreducible_factorization(p: MultilinearPoly, tol: float = DEFAULT_TOL) -> List[MultilinearPoly]:
    """Factor into irreducibles with pairwise-disjoint supports.

    The factors multiply back to ``p`` up to one global scalar (the first
    factor absorbs the normalisation).  Splitting searches subsets of the
    support that keep its lowest variable on the E side, in increasing
    size, so small factors split off first.
    """
    if p.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    supp = p.support()
    if supp == 0:
        raise ConstantPolynomial("constant polynomials have no irreducible factorization")
    if p.n > MAX_SCAN_SITES:
        raise TooLarge(f"factorization search capped at {MAX_SCAN_SITES} sites")

    def split(f: MultilinearPoly) -> List[MultilinearPoly]:
        s = f.support()
        m = popcount(s)
        if m <= 1 or f.degree() == 1:
            return [f]
        first = s & -s
        rest = sites_from_mask(s ^ first)
        for size in range(0, m - 1):
            for combo in combinations(rest, size):
                e_mask = first | mask_from_sites(combo)
                got = try_factor_in_cut(f, Cut(f.n, e_mask), tol)
                if got is not None:
                    left, right = got
                    return split(left) + split(right)
        return [f]

    return split(p)


@dataclass(frozen=True)
class GenuineVerdict:
    """Outcome of a genuine-entanglement decision with its witness."""

    genuinely_entangled: bool
    missing_sites: int = 0
    witness_cut: Optional[Cut] = None
    factors: Optional[Tuple[MultilinearPoly, MultilinearPoly]] = None

    def __bool__(self) -> bool:
        return self.genuinely_entangled


def is_genuinely_entangled_poly(p: MultilinearPoly, tol: float = DEFAULT_TOL) -> GenuineVerdict:
    """Full-support check plus a factorization scan over all bipartitions."""
    if p.is_zero:
        raise ZeroPolynomial("the zero polynomial represents no state")
    if p.n < 2:
        raise RvbPolyError("genuine entanglement needs at least 2 sites")
    if p.n > MAX_SCAN_SITES:
        raise TooLarge(f"cut scan capped at {MAX_SCAN_SITES} sites")
    full = (1 << p.n) - 1
    supp = p.support()
    if supp != full:
        missing = full ^ supp
        witness = missing if missing != full else 1
        return GenuineVerdict(False, missing_sites=missing, witness_cut=Cut(p.n, witness))
    for cut in all_cuts(p.n):
        got = try_factor_in_cut(p, cut, tol)
        if got is not None:
            return GenuineVerdict(False, witness_cut=cut, factors=got)
    return GenuineVerdict(True)


# ---------------------------------------------------------------------------
# term-count bounds for homogeneous product vectors
# ---------------------------------------------------------------------------


def tau_bounds(n: int, d: int) -> Tuple[List[int], int]:
    """Maximal term counts a degree-d homogeneous polynomial can have while
    factoring across a cut of side size alpha, for alpha = 1..n-1, plus the
    overall maximum.  A homogeneous state with more terms than the overall
    bound is genuinely entangled.
    """
    if not 1 <= d <= n:
        raise InvalidDegree(f"need 1 <= d <= n, got d={d}, n={n}")
    taus = []
    for alpha in range(1, n):
        beta = n - alpha
        lo, hi = max(d - beta, 0), min(alpha, d)
        taus.append(max(math.comb(alpha, d1) * math.comb(beta, d - d1) for d1 in range(lo, hi + 1)))
    return taus, max(taus)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_json_dict(p: MultilinearPoly) -> dict:
    terms: List[list] = []
    for mask, c in p.sorted_terms():
        if p.exact:
            terms.append([mask, c.numerator, c.denominator])
        else:
            terms.append([mask, float(c.real), float(c.imag)])
    out = {"n": p.n, "scale_half_log2": p.scale.half_log2, "terms": terms}
    if p.scale.sqrt_denom != 1:
        out["sqrt_denom"] = p.scale.sqrt_denom
    return out


def from_json_dict(d: dict) -> MultilinearPoly:
    n = int(d["n"])
    scale = Scale(int(d["scale_half_log2"]), int(d.get("sqrt_denom", 1)))
    terms: List[Tuple[int, Scalar]] = []
    for entry in d["terms"]:
        mask, a, b = entry
        if isinstance(a, int) and isinstance(b, int):
            terms.append((int(mask), Fraction(a, b)))
        else:
            terms.append((int(mask), complex(float(a), float(b))))
    return build(n, terms, scale)


def dumps(p: MultilinearPoly) -> str:
    return json.dumps(to_json_dict(p), separators=(",", ":"))


def loads(text: str) -> MultilinearPoly:
    return from_json_dict(json.loads(text))

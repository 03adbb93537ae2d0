"""Bitmask helpers for site subsets.

Sites are labelled 1..n.  A subset of sites is an n-bit integer mask with
bit j-1 set when site j belongs to the subset.  All modules share this
convention, and it matches the basis-index convention of the dense oracle
(bit j-1 of a computational-basis index gives the state of site j).
"""

from __future__ import annotations

from typing import Iterable, Iterator, List


def mask_from_sites(sites: Iterable[int]) -> int:
    mask = 0
    for s in sites:
        mask |= 1 << (s - 1)
    return mask


def sites_from_mask(mask: int) -> List[int]:
    sites = []
    j = 1
    while mask:
        if mask & 1:
            sites.append(j)
        mask >>= 1
        j += 1
    return sites


def popcount(mask: int) -> int:
    return mask.bit_count()


def iter_submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def iter_submasks_of_size(mask: int, size: int) -> Iterator[int]:
    """Submasks of ``mask`` with exactly ``size`` bits set."""
    from itertools import combinations

    bits = [1 << (s - 1) for s in sites_from_mask(mask)]
    for combo in combinations(bits, size):
        out = 0
        for b in combo:
            out |= b
        yield out


def pack_bits(value: int, mask: int) -> int:
    """Extract the bits of ``value`` selected by ``mask`` into a compact
    integer (low-to-high order), i.e. a parallel-bit-extract."""
    out = 0
    pos = 0
    while mask:
        low = mask & -mask
        if value & low:
            out |= 1 << pos
        pos += 1
        mask ^= low
    return out

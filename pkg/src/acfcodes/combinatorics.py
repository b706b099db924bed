"""Colexicographic k-subset enumeration, ranking, and counting helpers."""

from __future__ import annotations

from math import comb
from typing import Iterator


def colex_rank(subset: tuple[int, ...] | list[int]) -> int:
    """Rank of a sorted subset in colex order: sum of C(c_i, i + 1)."""
    return sum(comb(c, i + 1) for i, c in enumerate(subset))


def colex_unrank(rank: int, k: int) -> list[int]:
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    out = [0] * k
    for i in range(k, 0, -1):
        # largest c with C(c, i) <= rank
        c = i - 1
        while comb(c + 1, i) <= rank:
            c += 1
        out[i - 1] = c
        rank -= comb(c, i)
    return out


def colex_subsets(n: int, k: int, start: int = 0, stop: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield k-subsets of range(n) in colex order, ranks in [start, stop).

    Uses an explicit odometer, so a block of ranks can be resumed from any
    starting rank without replaying the prefix.
    """
    total = comb(n, k)
    stop = total if stop is None else min(stop, total)
    if k < 0 or start >= stop:
        return
    if k == 0:
        yield ()
        return
    c = colex_unrank(start, k)
    for _ in range(stop - start):
        yield tuple(c)
        i = 0
        while i < k - 1 and c[i] + 1 == c[i + 1]:
            i += 1
        c[i] += 1
        for j in range(i):
            c[j] = j


def rank_blocks(total: int, n_blocks: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into at most ``n_blocks`` contiguous [start, stop) blocks."""
    n_blocks = max(1, min(n_blocks, total)) if total else 1
    size, extra = divmod(total, n_blocks)
    blocks = []
    lo = 0
    for b in range(n_blocks):
        hi = lo + size + (1 if b < extra else 0)
        blocks.append((lo, hi))
        lo = hi
    return blocks


def strict_superset_count(t: int, s: int, l: int) -> int:
    """Number of unordered families of ``s`` pairwise disjoint ``l``-subsets of ``[t]``."""
    if s < 1 or l < 1:
        raise ValueError("s and l must be positive")
    if s * l > t:
        return 0
    num = comb(t, s * l)
    for i in range(s, 1, -1):
        num *= comb(i * l, (i - 1) * l)
    fact = 1
    for i in range(2, s + 1):
        fact *= i
    q, r = divmod(num, fact)
    assert r == 0
    return q

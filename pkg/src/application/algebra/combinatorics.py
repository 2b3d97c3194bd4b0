"""
Lexicographic ranking of k-subsets of range(m).
"""

from math import comb
from typing import Iterator, Sequence, Tuple


def rank_combination(combo: Sequence[int], m: int) -> int:
    """Position of a sorted k-subset of range(m) in lexicographic order."""
    k = len(combo)
    rank = 0
    prev = -1
    for i, c in enumerate(combo):
        for x in range(prev + 1, c):
            rank += comb(m - x - 1, k - i - 1)
        prev = c
    return rank


def unrank_combination(rank: int, m: int, k: int) -> Tuple[int, ...]:
    if not 0 <= rank < comb(m, k):
        raise ValueError(f"rank {rank} out of range for C({m}, {k})")
    out = []
    x = 0
    for i in range(k):
        while comb(m - x - 1, k - i - 1) <= rank:
            rank -= comb(m - x - 1, k - i - 1)
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def combinations_from(m: int, k: int, start: int = 0) -> Iterator[Tuple[int, ...]]:
    """Yield k-subsets of range(m) in lexicographic order, starting at rank start."""
    total = comb(m, k)
    if start >= total:
        return
    combo = list(unrank_combination(start, m, k))
    while True:
        yield tuple(combo)
        i = k - 1
        while i >= 0 and combo[i] == m - k + i:
            i -= 1
        if i < 0:
            return
        combo[i] += 1
        for j in range(i + 1, k):
            combo[j] = combo[j - 1] + 1

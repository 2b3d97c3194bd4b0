"""
Fraction-free dense inversion of integer matrices.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple


def fraction_free_inverse(matrix: Sequence[Sequence[int]]) -> Optional[Tuple[int, List[List[int]]]]:
    """Invert an integer matrix by Bareiss-Montante elimination on [X | I].

    Returns (d, R) with R = d * X^-1 and every entry of R an integer, or None
    when X is singular. All intermediate divisions are exact.
    """
    n = len(matrix)
    work = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    prev = 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if work[i][k] != 0), None)
        if pivot_row is None:
            return None
        if pivot_row != k:
            work[k], work[pivot_row] = work[pivot_row], work[k]
        row_k = work[k]
        pk = row_k[k]
        for i in range(n):
            if i == k:
                continue
            row_i = work[i]
            f = row_i[k]
            work[i] = [(pk * a - f * b) // prev for a, b in zip(row_i, row_k)]
        prev = pk
    return prev, [row[n:] for row in work]


def exact_inverse(matrix: Sequence[Sequence[int]]) -> Optional[List[List[Fraction]]]:
    result = fraction_free_inverse(matrix)
    if result is None:
        return None
    d, adjugate = result
    return [[Fraction(x, d) for x in row] for row in adjugate]

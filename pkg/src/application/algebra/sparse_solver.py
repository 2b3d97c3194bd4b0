"""
Sparse Gauss-Jordan elimination over an exact field.
"""

import logging
from typing import Dict, List, Mapping, Sequence

from .fields import Field

logger = logging.getLogger(__name__)


class NoUniqueSolution(Exception):
    """Raised when a square system is inconsistent or underdetermined."""
    pass


def solve_sparse(rows: Sequence[Mapping[int, int]], rhs: Sequence[int], n: int, field: Field) -> List:
    """Solve the n-variable system whose i-th equation is rows[i] . x = rhs[i].

    Rows are dicts column -> integer coefficient. Each incoming row is reduced
    against the existing pivots in creation order, so a pivot row never holds
    the pivot column of an earlier pivot; back-substitution then runs in
    reverse creation order.
    """
    pivots: List[tuple] = []
    pivot_cols = set()

    for i, (row, b) in enumerate(zip(rows, rhs)):
        work: Dict[int, object] = {}
        for col, coeff in row.items():
            value = field.from_int(coeff)
            if not field.is_zero(value):
                work[col] = value
        value_b = field.from_int(b)

        for col, prow, pb in pivots:
            factor = work.get(col)
            if factor is None:
                continue
            for c, v in prow.items():
                updated = field.sub(work.get(c, field.from_int(0)), field.mul(factor, v))
                if field.is_zero(updated):
                    work.pop(c, None)
                else:
                    work[c] = updated
            value_b = field.sub(value_b, field.mul(factor, pb))

        if not work:
            if not field.is_zero(value_b):
                raise NoUniqueSolution(f"equation {i} is inconsistent over {field.name}")
            continue

        col = min(work)
        scale = field.inv(work[col])
        prow = {c: field.mul(v, scale) for c, v in work.items()}
        pivots.append((col, prow, field.mul(value_b, scale)))
        pivot_cols.add(col)

    if len(pivots) < n:
        raise NoUniqueSolution(f"rank {len(pivots)} < {n} over {field.name}")

    solution: Dict[int, object] = {}
    for col, prow, pb in reversed(pivots):
        acc = pb
        for c, v in prow.items():
            if c != col:
                acc = field.sub(acc, field.mul(v, solution[c]))
        solution[col] = acc

    return [solution[c] for c in range(n)]

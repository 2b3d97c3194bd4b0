"""
Exact arithmetic building blocks.
"""

from .fields import Field, PrimeField, RationalField, SOLVER_PRIMES, primes_above
from .sparse_solver import NoUniqueSolution, solve_sparse
from .dense_inverse import fraction_free_inverse, exact_inverse
from .combinatorics import rank_combination, unrank_combination, combinations_from

__all__ = [
    'Field',
    'PrimeField',
    'RationalField',
    'SOLVER_PRIMES',
    'primes_above',
    'NoUniqueSolution',
    'solve_sparse',
    'fraction_free_inverse',
    'exact_inverse',
    'rank_combination',
    'unrank_combination',
    'combinations_from',
]

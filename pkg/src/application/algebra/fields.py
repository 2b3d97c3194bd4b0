"""
Coefficient fields for exact elimination.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import List, Tuple

# Fixed, ordered list of primes for the modular fast path.
SOLVER_PRIMES: Tuple[int, ...] = (
    2305843009213693951,
    1000000007,
    1000000009,
    998244353,
    2147483647,
)


def primes_above(bound: int) -> List[int]:
    """Solver primes strictly larger than bound, in list order."""
    return [p for p in SOLVER_PRIMES if p > bound]


class Field(ABC):
    """Arithmetic on the elements of an exact field."""

    name: str = "field"

    @abstractmethod
    def from_int(self, value: int):
        pass

    @abstractmethod
    def inv(self, x):
        pass

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def is_zero(self, x) -> bool:
        return x == 0

    @abstractmethod
    def as_int(self, x):
        """Return x as a plain integer when it represents one, else None."""
        pass


class PrimeField(Field):
    """Integers modulo a prime p, represented by residues in [0, p)."""

    def __init__(self, p: int):
        self.p = p
        self.name = f"mod {p}"

    def from_int(self, value: int) -> int:
        return value % self.p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.p

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)

    def as_int(self, x: int) -> int:
        # symmetric lift
        return x - self.p if x > self.p // 2 else x


class RationalField(Field):
    """Exact rationals."""

    name = "rational"

    def from_int(self, value: int) -> Fraction:
        return Fraction(value)

    def inv(self, x: Fraction) -> Fraction:
        return 1 / x

    def as_int(self, x: Fraction):
        return x.numerator if x.denominator == 1 else None

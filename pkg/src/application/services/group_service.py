"""
Group service containing finite abelian group arithmetic and structure queries.
"""

import logging
import re
from functools import lru_cache, reduce
from itertools import product
from math import gcd
from typing import List, Sequence, Tuple

from sympy import divisors, factorint, isprime
from sympy.utilities.iterables import partitions

from src.domain.entities import GroupElement, GroupSpec, GroupSubset
from src.domain.exceptions import GroupParseError, InvalidElementError, ParameterError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^(?:\(z(\d+)\)|z(\d+))(?:\^(\d+))?$")
_TUPLE = re.compile(r"\(([^()]*)\)")
SUPPORTED_EXPONENTS = (2, 3, 4, 6)


@lru_cache(maxsize=None)
def group_from_factors(factors: Tuple[int, ...]) -> GroupSpec:
    """Shared GroupSpec per factor tuple, so lookup tables are built once per process."""
    return GroupSpec(factors)


class GroupService:
    """Service for group construction, arithmetic and quotient bookkeeping."""

    def parse_group(self, literal: str) -> GroupSpec:
        """Parse `Z7`, `Z3xZ3`, `Z5x(Z2)^2` (case-insensitive) into a GroupSpec."""
        text = literal.strip().lower().replace(" ", "").replace("×", "x")
        if not text:
            raise GroupParseError(literal, literal)
        factors: List[int] = []
        for token in text.split("x"):
            match = _TOKEN.match(token)
            if not match:
                raise GroupParseError(literal, token)
            order = int(match.group(1) or match.group(2))
            power = int(match.group(3) or 1)
            if order < 2 or power < 1:
                raise GroupParseError(literal, token)
            factors.extend([order] * power)
        return group_from_factors(tuple(factors))

    def parse_element(self, group: GroupSpec, text: str) -> GroupElement:
        parts = [p for p in text.replace("(", "").replace(")", "").split(",") if p.strip()]
        try:
            coords = tuple(int(p) for p in parts)
        except ValueError:
            raise InvalidElementError(f"cannot read element {text!r}")
        return group.validate(coords)

    def parse_subset(self, group: GroupSpec, text: str) -> GroupSubset:
        """Parse `0,3` (cyclic groups) or `(0,1),(1,0)` into a subset."""
        text = text.strip()
        if not text:
            return GroupSubset(group, 0)
        tuples = _TUPLE.findall(text)
        if tuples:
            elements = [self.parse_element(group, t) for t in tuples]
        elif len(group.factors) == 1:
            elements = [self.parse_element(group, t) for t in text.split(",") if t.strip()]
        else:
            raise InvalidElementError(
                f"elements of {group.literal} must be written as tuples, e.g. (0,1),(1,0)"
            )
        subset = GroupSubset.from_elements(group, elements)
        if subset.size != len(elements):
            logger.warning(f"Duplicate elements dropped from {text!r}")
        return subset

    def add(self, g: Sequence[int], h: Sequence[int], group: GroupSpec) -> GroupElement:
        return group.add(g, h)

    def neg(self, g: Sequence[int], group: GroupSpec) -> GroupElement:
        return group.neg(g)

    def involutions(self, group: GroupSpec) -> GroupSubset:
        """Elements x with x = -x, the identity included."""
        neg = group.negation_table
        return GroupSubset.from_indices(group, (i for i in range(group.order) if neg[i] == i))

    def symmetric_pairs(self, group: GroupSpec) -> List[Tuple[int, int]]:
        """Pairs {x, -x} of non-involutions, ordered by the smaller index."""
        neg = group.negation_table
        return [(i, neg[i]) for i in range(group.order) if i < neg[i]]

    def involution_count(self, group: GroupSpec) -> int:
        return reduce(lambda acc, n_i: acc * gcd(n_i, 2), group.factors, 1)

    def quotient_order_exponent_d(self, group: GroupSpec, d: int) -> int:
        """Order of G/dG, the largest quotient of exponent dividing d."""
        if d not in SUPPORTED_EXPONENTS:
            raise ParameterError(f"exponent d must be one of {SUPPORTED_EXPONENTS}, got {d}")
        return reduce(lambda acc, n_i: acc * gcd(n_i, d), group.factors, 1)

    def elementary_p_quotient_rank(self, group: GroupSpec, p: int) -> int:
        """Largest m with (Z_p)^m a quotient of G."""
        if not isprime(p):
            raise ParameterError(f"{p} is not prime")
        return sum(1 for n_i in group.factors if n_i % p == 0)

    def is_cyclic(self, group: GroupSpec) -> bool:
        return group.is_cyclic

    def abelian_groups_of_order(self, n: int, noncyclic_only: bool = False) -> List[GroupSpec]:
        """One group per choice of exponent partition for every prime of n."""
        if n < 2:
            raise ParameterError(f"order must be at least 2, got {n}")
        per_prime = []
        for p, e in sorted(factorint(n).items()):
            options = []
            for part in partitions(e):
                exponents = sorted(k for k, mult in part.items() for _ in range(mult))
                options.append(tuple(p ** k for k in exponents))
            per_prime.append(options)

        groups = []
        for choice in product(*per_prime):
            factors = tuple(sorted(q for block in choice for q in block))
            group = group_from_factors(factors)
            if noncyclic_only and group.is_cyclic:
                continue
            groups.append(group)
        logger.debug(f"{len(groups)} abelian groups of order {n} (noncyclic_only={noncyclic_only})")
        return groups

    def nontrivial_splits(self, n: int, lam: int = 1) -> List[Tuple[int, int]]:
        """(r, s) with 1 < r <= s and r*s = lam*(n-1)."""
        total = lam * (n - 1)
        return [(r, total // r) for r in divisors(total) if 1 < r <= total // r]

    def isomorphic(self, g1: GroupSpec, g2: GroupSpec) -> bool:
        return g1.primary == g2.primary

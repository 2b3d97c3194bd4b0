"""
SCEDF service: external differences and strong circular external difference families.
"""

import logging
from collections import Counter
from itertools import combinations
from typing import Dict, List

from sympy import isprime

from src.application.services.group_service import group_from_factors
from src.application.services.mate_service import MateService
from src.domain.entities import DifferenceFamily, GroupSpec, GroupSubset, ScedfCheck
from src.domain.exceptions import ParameterError, PreconditionError

logger = logging.getLogger(__name__)


class ScedfService:
    """Service for difference multisets and SCEDF checks."""

    def __init__(self, mate_service: MateService):
        self.mate_service = mate_service

    def _difference_counts(self, b: GroupSubset, a: GroupSubset) -> Counter:
        group = b.group
        table = group.addition_table
        neg = group.negation_table
        return Counter(table[y][neg[x]] for y in b.indices for x in a.indices)

    def difference_multiset(self, b: GroupSubset, a: GroupSubset) -> Counter:
        """D(B, A) = {y - x : y in B, x in A} as a multiset of elements."""
        elements = b.group.elements
        return Counter({elements[idx]: count for idx, count in self._difference_counts(b, a).items()})

    def check(self, family: DifferenceFamily) -> ScedfCheck:
        """Disjointness, sizes and the circular difference histograms of a family."""
        group = family.group
        sets = family.sets
        disjoint = all(x.isdisjoint(y) for x, y in combinations(sets, 2))
        uniform = len({s.size for s in sets}) <= 1
        histograms: List[Dict[int, int]] = []
        failing: List[int] = []
        for j, current in enumerate(sets):
            following = sets[(j + 1) % len(sets)]
            counts = self._difference_counts(following, current)
            histograms.append(dict(sorted(counts.items())))
            good = counts.get(0, 0) == 0 and len(counts) == group.order - 1 \
                and all(c == family.lam for c in counts.values())
            if not good:
                failing.append(j)
        if not disjoint:
            logger.debug(f"Family over {group.literal} has overlapping sets")
        return ScedfCheck(
            is_scedf=disjoint and uniform and len(sets) >= 2 and not failing,
            disjoint=disjoint,
            uniform_size=uniform,
            histograms=histograms,
            failing_pairs=failing,
        )

    def is_scedf(self, family: DifferenceFamily) -> bool:
        return self.check(family).is_scedf

    def circular_extension_is_blocked(self, group: GroupSpec, a1: GroupSubset, a2: GroupSubset, lam: int = 1) -> bool:
        """Given D(A2, A1) = lam(G - {0}), the only A3 with D(A3, A2) = lam(G - {0}) is A1."""
        minus_a2 = a2.negated()
        if not self.mate_service.verify(group, a1, minus_a2, lam):
            raise PreconditionError(
                f"D({a2.format()}, {a1.format()}) is not {lam} copies of the nonidentity elements"
            )
        result = self.mate_service.compute_mate_sparse(group, minus_a2, lam)
        forced = result.mate
        blocked = forced is not None and forced.bits == a1.bits
        logger.debug(f"Forced third set {forced.format() if forced else None}; blocked={blocked}")
        return blocked

    def quadratic_residue_family(self, q: int) -> DifferenceFamily:
        """Residues and nonresidues mod a prime q = 1 mod 4, with lambda = (q-1)/4."""
        if not isprime(q) or q % 4 != 1:
            raise ParameterError(f"q must be a prime congruent to 1 mod 4, got {q}")
        group = group_from_factors((q,))
        residues = {x * x % q for x in range(1, q)}
        nonresidues = set(range(1, q)) - residues
        return DifferenceFamily(
            group=group,
            sets=(GroupSubset.from_indices(group, residues), GroupSubset.from_indices(group, nonresidues)),
            lam=(q - 1) // 4,
        )

    def exhaustive_scedf_search(self, group: GroupSpec, m: int, ell: int, lam: int) -> List[DifferenceFamily]:
        """Every SCEDF with m sets of size ell whose first set contains the identity."""
        if ell * ell != lam * (group.order - 1):
            raise ParameterError(f"ell^2 = {ell * ell} differs from lambda*(n-1) = {lam * (group.order - 1)}")
        if m * ell > group.order:
            return []

        families = []

        def extend(chain: List[GroupSubset], used: int) -> None:
            if len(chain) == m:
                family = DifferenceFamily(group=group, sets=tuple(chain), lam=lam)
                if self.is_scedf(family):
                    families.append(family)
                return
            free = [i for i in range(group.order) if not (used >> i) & 1]
            for combo in combinations(free, ell):
                candidate = GroupSubset.from_indices(group, combo)
                if self.mate_service.verify(group, chain[-1], candidate.negated(), lam):
                    extend(chain + [candidate], used | candidate.bits)

        rest = range(1, group.order)
        for combo in combinations(rest, ell - 1):
            first = GroupSubset.from_indices(group, (0,) + combo)
            extend([first], first.bits)
        logger.info(f"SCEDF search in {group.literal} (m={m}, ell={ell}, lambda={lam}): {len(families)} found")
        return families

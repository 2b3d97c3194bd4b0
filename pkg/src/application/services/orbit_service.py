"""
Orbit service for automorphism actions used to prune symmetric-set searches.
"""

import logging
from functools import lru_cache
from itertools import combinations, product
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from src.domain.entities import GroupSpec, OrbitCatalog
from src.domain.exceptions import ParameterError

logger = logging.getLogger(__name__)

MAX_GL_RANK = 4
MIXED_KINDS = {"Z2xZ4": 4, "Z2xZ8": 8}

Permutation = Tuple[int, ...]


def _bits_to_vector(v: int, k: int) -> Tuple[int, ...]:
    return tuple((v >> (k - 1 - i)) & 1 for i in range(k))


def _gf2_rank(rows: Sequence[int]) -> int:
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def _apply_matrix(rows: Sequence[int], v: int) -> int:
    k = len(rows)
    out = 0
    for i, row in enumerate(rows):
        if bin(row & v).count("1") % 2:
            out |= 1 << (k - 1 - i)
    return out


@lru_cache(maxsize=None)
def general_linear_group(k: int) -> Tuple[Permutation, ...]:
    """All of GL(k,2), each matrix given as the permutation it induces on 2^k vectors."""
    size = 1 << k
    perms = []
    for rows in product(range(size), repeat=k):
        if _gf2_rank(rows) == k:
            perms.append(tuple(_apply_matrix(rows, v) for v in range(size)))
    return tuple(perms)


def _orbits_of_subsets(points: int, i1: int, perms: Sequence[Permutation]) -> List[List[Tuple[int, ...]]]:
    """Orbits of i1-subsets of range(points) under a permutation group, each sorted."""
    seen: Dict[Tuple[int, ...], int] = {}
    orbits: List[List[Tuple[int, ...]]] = []
    for subset in combinations(range(points), i1):
        if subset in seen:
            continue
        orbit = sorted({tuple(sorted(p[x] for x in subset)) for p in perms})
        for member in orbit:
            seen[member] = len(orbits)
        orbits.append(orbit)
    return orbits


class OrbitService:
    """Service computing orbit catalogs of involution subsets and unit orbits of pairs."""

    def gl_orbit_catalog(self, k: int, i1: int) -> OrbitCatalog:
        """Orbits of i1-subsets of (Z_2)^k under GL(k,2), with minimal representatives."""
        if not 1 <= k <= MAX_GL_RANK:
            raise ParameterError(f"GL(k,2) catalogs support 1 <= k <= {MAX_GL_RANK}, got k={k}")
        if not 0 <= i1 <= 1 << k:
            raise ParameterError(f"i1 must lie in [0, {1 << k}], got {i1}")
        perms = general_linear_group(k)
        orbits = _orbits_of_subsets(1 << k, i1, perms)
        catalog = OrbitCatalog(
            context=f"GL({k},2)",
            subset_size=i1,
            automorphism_count=len(perms),
            representatives=tuple(tuple(_bits_to_vector(v, k) for v in orbit[0]) for orbit in orbits),
            orbit_sizes=tuple(len(orbit) for orbit in orbits),
        )
        logger.debug(f"GL({k},2) on {i1}-subsets: {len(orbits)} orbits out of {comb(1 << k, i1)}")
        return catalog

    def mixed_automorphisms(self, kind: str) -> List[Dict[Tuple[int, int], Tuple[int, int]]]:
        """Automorphisms of Z_2 x Z_m, enumerated by the images of (1,0) and (0,1)."""
        if kind not in MIXED_KINDS:
            raise ParameterError(f"unknown mixed group {kind!r}, expected one of {sorted(MIXED_KINDS)}")
        m = MIXED_KINDS[kind]
        elements = [(a, b) for a in range(2) for b in range(m)]
        automorphisms = []
        for u in elements:
            if u == (0, 0) or (2 * u[1]) % m != 0:
                continue
            for v in elements:
                if m // gcd(v[1], m) != m:
                    continue
                image = {(a, b): ((a * u[0] + b * v[0]) % 2, (a * u[1] + b * v[1]) % m) for a, b in elements}
                if len(set(image.values())) == len(elements):
                    automorphisms.append(image)
        return automorphisms

    def mixed_aut_orbits(self, kind: str, i1: int = 1) -> OrbitCatalog:
        """Orbits of i1-subsets of the involutions of Z_2 x Z_4 or Z_2 x Z_8."""
        automorphisms = self.mixed_automorphisms(kind)
        m = MIXED_KINDS[kind]
        involutions = [(0, 0), (0, m // 2), (1, 0), (1, m // 2)]
        if not 0 <= i1 <= len(involutions):
            raise ParameterError(f"i1 must lie in [0, 4], got {i1}")
        position = {x: i for i, x in enumerate(involutions)}
        perms = [tuple(position[phi[x]] for x in involutions) for phi in automorphisms]
        orbits = _orbits_of_subsets(len(involutions), i1, perms)
        return OrbitCatalog(
            context=f"Aut({kind})",
            subset_size=i1,
            automorphism_count=len(automorphisms),
            representatives=tuple(tuple(involutions[i] for i in orbit[0]) for orbit in orbits),
            orbit_sizes=tuple(len(orbit) for orbit in orbits),
        )

    def unit_pair_orbits(self, t: int) -> List[List[int]]:
        """Orbits of pairs {x, t-x} of Z_t under multiplication by units, each pair named by min(x, t-x)."""
        if t < 3:
            return []
        units = [u for u in range(1, t) if gcd(u, t) == 1]
        names = [x for x in range(1, t) if x < t - x]
        seen = set()
        orbits = []
        for x in names:
            if x in seen:
                continue
            orbit = sorted({min(u * x % t, t - u * x % t) for u in units})
            seen.update(orbit)
            orbits.append(orbit)
        return orbits

    def unit_pair_representatives(self, t: int) -> List[int]:
        return [orbit[0] for orbit in self.unit_pair_orbits(t)]

    def _two_part(self, group: GroupSpec) -> Tuple[List[int], Tuple[int, ...]]:
        positions = [i for i, n_i in enumerate(group.factors) if n_i % 2 == 0]
        return positions, tuple(group.factors[i] for i in positions)

    def involution_catalog(self, group: GroupSpec, i1: int) -> Optional[OrbitCatalog]:
        """Catalog acting on the 2-part of G, or None when no catalog applies.

        Applies when every even factor is a power of two and the even factors
        are (2,)*k with k <= 4, (2, 4) or (2, 8).
        """
        positions, two_factors = self._two_part(group)
        if not two_factors or any(n_i & (n_i - 1) for n_i in two_factors):
            return None
        if all(n_i == 2 for n_i in two_factors) and len(two_factors) <= MAX_GL_RANK:
            return self.gl_orbit_catalog(len(two_factors), i1)
        if two_factors in ((2, 4), (2, 8)):
            return self.mixed_aut_orbits(f"Z2xZ{two_factors[1]}", i1)
        return None

    def catalog_indices(self, group: GroupSpec, catalog: OrbitCatalog) -> List[Tuple[int, ...]]:
        """Representatives of a 2-part catalog as sorted element-index tuples of G."""
        positions, _ = self._two_part(group)
        reps = []
        for rep in catalog.representatives:
            indices = []
            for vector in rep:
                coords = [0] * len(group.factors)
                for pos, c in zip(positions, vector):
                    coords[pos] = c
                indices.append(group.encode(coords))
            reps.append(tuple(sorted(indices)))
        return reps

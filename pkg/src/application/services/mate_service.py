"""
Mate service: walk matrices, the dense and sparse mate algorithms and exact verification.
"""

import logging
from collections import Counter
from fractions import Fraction
from typing import List, Optional

from src.application.algebra import (
    NoUniqueSolution,
    PrimeField,
    RationalField,
    exact_inverse,
    fraction_free_inverse,
    primes_above,
    solve_sparse,
)
from src.application.services.group_service import group_from_factors
from src.domain.entities import (
    GroupSpec,
    GroupSubset,
    MateResult,
    MateTag,
    NearFactorization,
    Solver,
    WalkMatrix,
)
from src.domain.exceptions import ConsistencyError, ParameterError

logger = logging.getLogger(__name__)

MODULAR_ATTEMPTS = 4


class MateService:
    """Service computing the unique mate of a set, by either algorithm."""

    def build_walk_matrix(self, group: GroupSpec, subset: GroupSubset) -> WalkMatrix:
        """M(H): row i has a one in column j iff g_j - g_i lies in H."""
        table = group.addition_table
        members = subset.indices
        rows = tuple(tuple(sorted(table[i][h] for h in members)) for i in range(group.order))
        return WalkMatrix(group=group, source=subset, rows=rows)

    def exact_inverse(self, group: GroupSpec, subset: GroupSubset) -> Optional[List[List[Fraction]]]:
        """X^-1 over the rationals for X = M(subset), or None when singular."""
        return exact_inverse(self.build_walk_matrix(group, subset).to_dense())

    def _mate_size(self, group: GroupSpec, subset: GroupSubset, lam: int) -> int:
        r = subset.size
        if r < 1 or lam < 1:
            raise ParameterError(f"need |A| >= 1 and lambda >= 1, got |A|={r}, lambda={lam}")
        total = lam * (group.order - 1)
        if total % r != 0:
            raise ParameterError(f"|A| = {r} does not divide lambda*(n-1) = {total}")
        return total // r

    def compute_mate_dense(self, group: GroupSpec, subset: GroupSubset, lam: int = 1) -> MateResult:
        """Invert X exactly and read the mate off Y = (lam/r)J - lam X^-1."""
        self._mate_size(group, subset, lam)
        r = subset.size
        inverse = fraction_free_inverse(self.build_walk_matrix(group, subset).to_dense())
        if inverse is None:
            return MateResult(tag=MateTag.SINGULAR, solver=Solver.DENSE, detail="M(A) is singular")

        # with X^-1 = R/d, Y_ij = lam*(d - r*R_ij) / (r*d)
        d, adjugate = inverse
        scale = r * d
        for i, row in enumerate(adjugate):
            for j, value in enumerate(row):
                y = lam * (d - r * value)
                if y != 0 and y != scale:
                    return MateResult(
                        tag=MateTag.NON_BINARY,
                        solver=Solver.DENSE,
                        detail=f"Y[{i}][{j}] = {Fraction(y, scale)}",
                    )

        mate = GroupSubset.from_indices(
            group, (j for j, value in enumerate(adjugate[0]) if lam * (d - r * value) == scale)
        )
        if not self.verify(group, subset, mate, lam):
            raise ConsistencyError(f"dense mate {mate.format()} of {subset.format()} failed verification")
        return MateResult(tag=MateTag.FOUND, solver=Solver.DENSE, mate=mate)

    def compute_mate_sparse(self, group: GroupSpec, subset: GroupSubset, lam: int = 1) -> MateResult:
        """Solve X z = lam(0,1,...,1)^T exactly; the mate is {-g : z_g = 1}."""
        s = self._mate_size(group, subset, lam)
        n = group.order
        walk = self.build_walk_matrix(group, subset)
        rows = [{j: 1 for j in cols} for cols in walk.rows]
        rhs = [0] + [lam] * (n - 1)

        solution = None
        field = None
        for p in primes_above(lam * n)[:MODULAR_ATTEMPTS]:
            field = PrimeField(p)
            try:
                solution = solve_sparse(rows, rhs, n, field)
                break
            except NoUniqueSolution as e:
                logger.debug(f"Sparse solve failed mod {p}: {e}")
        if solution is None:
            field = RationalField()
            try:
                solution = solve_sparse(rows, rhs, n, field)
            except NoUniqueSolution as e:
                return MateResult(tag=MateTag.SINGULAR, solver=Solver.SPARSE, detail=str(e))

        z = [field.as_int(v) for v in solution]
        for g, value in enumerate(z):
            if value not in (0, 1):
                shown = value if value is not None else solution[g]
                return MateResult(tag=MateTag.NON_BINARY, solver=Solver.SPARSE, detail=f"z[{g}] = {shown}")
        weight = sum(z)
        if weight != s:
            return MateResult(
                tag=MateTag.WRONG_WEIGHT, solver=Solver.SPARSE, detail=f"weight {weight}, expected {s}"
            )

        neg = group.negation_table
        mate = GroupSubset.from_indices(group, (neg[g] for g, value in enumerate(z) if value == 1))
        if not self.verify(group, subset, mate, lam):
            if isinstance(field, PrimeField):
                # the rational solution reduces to z mod p but is not itself 0-1
                return MateResult(
                    tag=MateTag.NON_BINARY,
                    solver=Solver.SPARSE,
                    detail=f"0-1 solution {field.name} is not a rational 0-1 solution",
                )
            raise ConsistencyError(f"sparse mate {mate.format()} of {subset.format()} failed verification")
        return MateResult(tag=MateTag.FOUND, solver=Solver.SPARSE, mate=mate)

    def compute_mate(self, group: GroupSpec, subset: GroupSubset, lam: int = 1,
                     solver: Solver = Solver.SPARSE) -> MateResult:
        if solver is Solver.DENSE:
            return self.compute_mate_dense(group, subset, lam)
        return self.compute_mate_sparse(group, subset, lam)

    def verify(self, group: GroupSpec, a: GroupSubset, b: GroupSubset, lam: int = 1) -> bool:
        """Every nonidentity element is a + b exactly lam times, the identity never."""
        if a.size * b.size != lam * (group.order - 1):
            return False
        table = group.addition_table
        b_indices = b.indices
        counts = Counter(table[x][y] for x in a.indices for y in b_indices)
        if counts.get(0, 0):
            return False
        return len(counts) == group.order - 1 and all(c == lam for c in counts.values())

    def matrix_product_check(self, group: GroupSpec, a: GroupSubset, b: GroupSubset, lam: int = 1) -> bool:
        """M(A) M(B) == lam (J - I) as integer matrices."""
        if a.size * b.size != lam * (group.order - 1):
            return False
        x = self.build_walk_matrix(group, a)
        y = self.build_walk_matrix(group, b)
        for i, cols in enumerate(x.rows):
            row = Counter()
            for k in cols:
                row.update(y.rows[k])
            if row.get(i, 0) != 0:
                return False
            if len(row) != group.order - 1 or any(v != lam for v in row.values()):
                return False
        return True

    def cyclic_interval_factorization(self, n: int, r: int) -> NearFactorization:
        """A = {0, ..., r-1}, B = {1, 1+r, ..., 1+(s-1)r} in Z_n with n = rs + 1."""
        if r < 1 or (n - 1) % r != 0:
            raise ParameterError(f"r = {r} must divide n - 1 = {n - 1}")
        s = (n - 1) // r
        group = group_from_factors((n,))
        a = GroupSubset.from_indices(group, range(r))
        b = GroupSubset.from_indices(group, (1 + k * r for k in range(s)))
        return NearFactorization(group=group, a=a, b=b, lam=1)

"""
Criteria service: nonexistence tests for near-factorizations of abelian groups.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence

from sympy import factorint, isprime

from src.application.services.group_service import SUPPORTED_EXPONENTS, GroupService
from src.domain.entities import CriterionId, CriterionVerdict, GroupSpec, Outcome
from src.domain.exceptions import ParameterError

logger = logging.getLogger(__name__)

SPECIAL_SHAPES = (
    frozenset({2}),
    frozenset({3}),
    frozenset({4}),
    frozenset({2, 3}),
    frozenset({2, 4}),
)


def _is_trivial(r: int, s: int) -> bool:
    return min(r, s) <= 1


def _verdict(criterion: CriterionId, ruled_out: bool, details: str, **witness) -> CriterionVerdict:
    return CriterionVerdict(
        criterion=criterion,
        outcome=Outcome.RULED_OUT if ruled_out else Outcome.INCONCLUSIVE,
        details=details,
        witness=tuple(sorted(witness.items())),
    )


class CriteriaService:
    """Service evaluating nonexistence criteria over (G, r, s)."""

    def __init__(self, group_service: GroupService):
        self.group_service = group_service

    def small_A_criterion(self, group: GroupSpec, r: int, s: int) -> CriterionVerdict:
        """A noncyclic abelian group has no near-factorization with 1 < |A| <= 4."""
        if group.is_cyclic:
            return _verdict(CriterionId.SMALL_A, False, "group is cyclic")
        if _is_trivial(r, s):
            return _verdict(CriterionId.SMALL_A, False, "trivial split")
        smaller = min(r, s)
        if smaller <= 4:
            return _verdict(CriterionId.SMALL_A, True, f"noncyclic and min(r,s) = {smaller} <= 4", min_side=smaller)
        return _verdict(CriterionId.SMALL_A, False, f"min(r,s) = {smaller} > 4")

    def three_p_plus_one_criterion(self, group: GroupSpec, r: int, s: int) -> CriterionVerdict:
        """Noncyclic abelian groups of order 3p+1, p prime, have only trivial near-factorizations."""
        n = group.order
        if group.is_cyclic or _is_trivial(r, s):
            return _verdict(CriterionId.THREE_P_PLUS_ONE, False, "cyclic group or trivial split")
        if (n - 1) % 3 == 0 and isprime((n - 1) // 3):
            p = (n - 1) // 3
            return _verdict(CriterionId.THREE_P_PLUS_ONE, True, f"n = 3*{p} + 1 with {p} prime", p=p)
        return _verdict(CriterionId.THREE_P_PLUS_ONE, False, f"n = {n} is not 3p+1 with p prime")

    def exponent_quotient_bound(self, group: GroupSpec, r: int, s: int) -> CriterionVerdict:
        """min(r,s) >= |H| - 1 for the largest quotient H of exponent d, d in {2,3,4,6}.

        The bound on |B| follows from the one on |A| by swapping the factors.
        """
        orders: Dict[int, int] = {
            d: self.group_service.quotient_order_exponent_d(group, d) for d in SUPPORTED_EXPONENTS
        }
        listing = ", ".join(f"|G/{d}G| = {h}" for d, h in orders.items())
        if _is_trivial(r, s):
            return _verdict(CriterionId.EXPONENT_QUOTIENT, False, f"trivial split; {listing}",
                            quotient_orders=tuple(orders.items()))
        smaller = min(r, s)
        firing = tuple(d for d, h in orders.items() if smaller < h - 1)
        if firing:
            details = "; ".join(f"d={d}: min(r,s) = {smaller} < |H| - 1 = {orders[d] - 1}" for d in firing)
            return _verdict(CriterionId.EXPONENT_QUOTIENT, True, f"{details} (bound applied to both sides)",
                            quotient_orders=tuple(orders.items()), firing=firing)
        return _verdict(CriterionId.EXPONENT_QUOTIENT, False, listing, quotient_orders=tuple(orders.items()))

    def special_form(self, group: GroupSpec, r: Optional[int] = None, s: Optional[int] = None) -> CriterionVerdict:
        """(Z2)^n, (Z3)^n, (Z4)^n, (Z3)^m x (Z2)^n and (Z2)^n x (Z4)^m have only trivial near-factorizations."""
        if r is not None and s is not None and _is_trivial(r, s):
            return _verdict(CriterionId.SPECIAL_FORM, False, "trivial split")
        components = frozenset(group.primary)
        for shape in SPECIAL_SHAPES:
            if components <= shape:
                form = "x".join(f"(Z{q})^k" for q in sorted(shape))
                return _verdict(CriterionId.SPECIAL_FORM, True, f"primary components match {form}",
                                shape=tuple(sorted(shape)))
        return _verdict(CriterionId.SPECIAL_FORM, False, f"primary components {group.primary} match no listed form")

    def quotient_congruence(self, group: GroupSpec, r: int, s: int) -> CriterionVerdict:
        """Congruences forced by an elementary abelian quotient (Z_p)^m."""
        if _is_trivial(r, s):
            return _verdict(CriterionId.QUOTIENT_CONGRUENCE, False, "trivial split")
        checked = []
        for p in sorted(factorint(group.order)):
            m = self.group_service.elementary_p_quotient_rank(group, p)
            if m < 1:
                continue
            modulus = p ** m
            checked.append(f"p={p}, m={m}")
            if p == 2:
                ok = (r - 1) % modulus == 0 and (s + 1) % modulus == 0 \
                    or (r + 1) % modulus == 0 and (s - 1) % modulus == 0
                if not ok:
                    return _verdict(CriterionId.QUOTIENT_CONGRUENCE, True,
                                    f"r = {r}, s = {s} violate r = -s = +-1 mod {modulus}", p=p, m=m)
            else:
                for side, value in (("r", r), ("s", s)):
                    residue = pow(value, p - 1, modulus)
                    if residue != 1:
                        return _verdict(CriterionId.QUOTIENT_CONGRUENCE, True,
                                        f"{side}^{p - 1} = {residue} mod {modulus}, expected 1", p=p, m=m)
        return _verdict(CriterionId.QUOTIENT_CONGRUENCE, False,
                        "all congruences hold" + (f" ({'; '.join(checked)})" if checked else ""))

    def pecher_criterion(self, group: GroupSpec, r: int, s: int) -> CriterionVerdict:
        """Z_{2m} x Z_{4n} x G' admits no near-factorization with |A| or |B| = +-3 mod 8."""
        if _is_trivial(r, s):
            return _verdict(CriterionId.PECHER, False, "trivial split")
        exponents = sorted(factorint(q)[2] for q in group.primary if q % 2 == 0)
        if len(exponents) < 2 or exponents[-1] < 2:
            return _verdict(CriterionId.PECHER, False, f"2-part exponents {exponents} lack a Z2m x Z4n factor")
        hits = [f"{side} = {value} = {value % 8} mod 8" for side, value in (("r", r), ("s", s)) if value % 8 in (3, 5)]
        if hits:
            return _verdict(CriterionId.PECHER, True, "; ".join(hits), two_exponents=tuple(exponents))
        return _verdict(CriterionId.PECHER, False, f"r mod 8 = {r % 8}, s mod 8 = {s % 8}")

    def criteria(self) -> Dict[CriterionId, Callable[[GroupSpec, int, int], CriterionVerdict]]:
        return {
            CriterionId.SMALL_A: self.small_A_criterion,
            CriterionId.THREE_P_PLUS_ONE: self.three_p_plus_one_criterion,
            CriterionId.EXPONENT_QUOTIENT: self.exponent_quotient_bound,
            CriterionId.SPECIAL_FORM: self.special_form,
            CriterionId.QUOTIENT_CONGRUENCE: self.quotient_congruence,
            CriterionId.PECHER: self.pecher_criterion,
        }

    def evaluate_all(self, group: GroupSpec, r: int, s: int, lam: int = 1,
                     order: Optional[Sequence[CriterionId]] = None) -> List[CriterionVerdict]:
        """Every criterion, evaluated in `order` and reported in CriterionId order.

        The evaluation order never changes a verdict.
        Inputs with lambda > 1 are not evaluated.
        """
        if lam != 1:
            return [_verdict(c, False, f"criteria apply to lambda = 1 only (lambda = {lam})") for c in CriterionId]
        criteria = self.criteria()
        by_id = {c: criteria[c](group, r, s) for c in (order or list(CriterionId))}
        missing = [c.value for c in CriterionId if c not in by_id]
        if missing:
            raise ParameterError(f"criterion order is missing {missing}")
        verdicts = [by_id[c] for c in CriterionId]
        fired = [v.criterion.value for v in verdicts if v.ruled_out]
        logger.debug(f"Filters for {group.literal} ({r},{s}): {fired or 'none fired'}")
        return verdicts

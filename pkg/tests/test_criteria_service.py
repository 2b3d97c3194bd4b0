from itertools import permutations

import pytest

from src.application.services.group_service import group_from_factors
from src.domain.entities import CriterionId, Outcome, SearchTask
from src.domain.exceptions import ParameterError
from src.domain.known_results import ORDER_144_EXPONENT_SIX, ORDER_144_PECHER


def fired(verdicts):
    return {v.criterion for v in verdicts if v.ruled_out}


@pytest.mark.parametrize("factors, quotient_order", ORDER_144_EXPONENT_SIX)
def test_exponent_six_quotients_of_order_144(group_service, criteria_service, factors, quotient_order):
    group = group_from_factors(factors)
    assert group_service.quotient_order_exponent_d(group, 6) == quotient_order
    verdict = criteria_service.exponent_quotient_bound(group, 11, 13)
    assert verdict.ruled_out
    assert 6 in verdict.witness_dict()["firing"]


@pytest.mark.parametrize("factors", ORDER_144_PECHER)
def test_pecher_rules_out_order_144(criteria_service, factors):
    group = group_from_factors(factors)
    assert criteria_service.pecher_criterion(group, 11, 13).ruled_out


def test_every_noncyclic_group_of_order_144_is_ruled_out(group_service, criteria_service):
    for group in group_service.abelian_groups_of_order(144, noncyclic_only=True):
        assert fired(criteria_service.evaluate_all(group, 11, 13)), group.literal


def test_exponent_four_quotient(criteria_service):
    verdict = criteria_service.exponent_quotient_bound(group_from_factors((9, 4, 4)), 11, 13)
    assert verdict.ruled_out
    assert 4 in verdict.witness_dict()["firing"]


@pytest.mark.parametrize("factors, r, s, criterion", [
    ((3, 3), 2, 4, CriterionId.SMALL_A),
    ((2, 8), 3, 5, CriterionId.THREE_P_PLUS_ONE),
    ((4, 4), 3, 5, CriterionId.THREE_P_PLUS_ONE),
    ((3, 3), 2, 4, CriterionId.SPECIAL_FORM),
    ((5, 5), 3, 8, CriterionId.QUOTIENT_CONGRUENCE),
    ((3, 3, 16), 11, 13, CriterionId.QUOTIENT_CONGRUENCE),
    ((4, 4), 3, 5, CriterionId.PECHER),
])
def test_criterion_fires(criteria_service, factors, r, s, criterion):
    assert criterion in fired(criteria_service.evaluate_all(group_from_factors(factors), r, s))


def test_trivial_splits_and_lambda_two_are_inconclusive(criteria_service):
    group = group_from_factors((3, 3))
    assert not fired(criteria_service.evaluate_all(group, 1, 8))
    verdicts = criteria_service.evaluate_all(group, 4, 4, lam=2)
    assert len(verdicts) == len(CriterionId)
    assert all(v.outcome is Outcome.INCONCLUSIVE for v in verdicts)


def test_special_form_without_split(criteria_service):
    assert criteria_service.special_form(group_from_factors((2, 4, 4))).ruled_out
    assert not criteria_service.special_form(group_from_factors((5, 5))).ruled_out


def test_criteria_never_fire_on_cyclic_intervals(mate_service, criteria_service):
    for n in range(4, 80):
        for r in range(2, n - 1):
            if (n - 1) % r:
                continue
            nf = mate_service.cyclic_interval_factorization(n, r)
            assert mate_service.verify(nf.group, nf.a, nf.b)
            assert not fired(criteria_service.evaluate_all(nf.group, nf.r, nf.s)), (n, r)


def test_order_50_leaves_only_z5xz10(group_service, criteria_service):
    open_cases = [
        (group.primary, r, s)
        for group in group_service.abelian_groups_of_order(50, noncyclic_only=True)
        for r, s in group_service.nontrivial_splits(50)
        if not fired(criteria_service.evaluate_all(group, r, s))
    ]
    assert open_cases == [((2, 5, 5), 7, 7)]


def test_order_64_leaves_only_z2xz32(group_service, criteria_service):
    open_cases = [
        (group.canonical_literal, r, s)
        for group in group_service.abelian_groups_of_order(64, noncyclic_only=True)
        for r, s in group_service.nontrivial_splits(64)
        if not fired(criteria_service.evaluate_all(group, r, s))
    ]
    assert open_cases == [("Z2xZ32", 7, 9)]


def test_three_p_plus_one_implies_small_a(group_service, criteria_service):
    fired_somewhere = 0
    for n in range(4, 401):
        for group in group_service.abelian_groups_of_order(n, noncyclic_only=True):
            for r, s in group_service.nontrivial_splits(n):
                if criteria_service.three_p_plus_one_criterion(group, r, s).ruled_out:
                    fired_somewhere += 1
                    assert criteria_service.small_A_criterion(group, r, s).ruled_out, (group.literal, r, s)
    assert fired_somewhere > 0


@pytest.mark.parametrize("factors, r, s", [
    ((3, 3), 2, 4),
    ((4, 4), 3, 5),
    ((9, 4, 4), 11, 13),
    ((5, 10), 7, 7),
    ((2, 32), 7, 9),
    ((13,), 3, 4),
])
def test_verdicts_do_not_depend_on_criterion_order(criteria_service, factors, r, s):
    group = group_from_factors(factors)
    expected = criteria_service.evaluate_all(group, r, s)
    assert [v.criterion for v in expected] == list(CriterionId)
    for order in permutations(CriterionId):
        assert criteria_service.evaluate_all(group, r, s, order=order) == expected


def test_partial_criterion_order_is_rejected(criteria_service):
    with pytest.raises(ParameterError):
        criteria_service.evaluate_all(group_from_factors((3, 3)), 2, 4, order=[CriterionId.SMALL_A])


@pytest.mark.parametrize("factors, r, s, lam", [
    ((7,), 2, 3, 1),
    ((10,), 3, 3, 1),
    ((13,), 2, 6, 1),
    ((13,), 3, 4, 1),
    ((16,), 3, 5, 1),
    ((3, 3), 4, 4, 2),
])
def test_criteria_never_fire_on_search_results(search_service, criteria_service, factors, r, s, lam):
    report = search_service.search(SearchTask(group=group_from_factors(factors), r=r, s=s, lam=lam))
    assert report.found
    for nf in report.found:
        assert not fired(criteria_service.evaluate_all(nf.group, nf.r, nf.s, nf.lam))

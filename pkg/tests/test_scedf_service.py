from collections import Counter

import pytest

from src.application.services.group_service import group_from_factors
from src.domain.entities import DifferenceFamily, GroupSubset, SearchTask
from src.domain.exceptions import ParameterError, PreconditionError


@pytest.mark.parametrize("q", [5, 13, 17, 29])
def test_quadratic_residue_families(scedf_service, q):
    family = scedf_service.quadratic_residue_family(q)
    assert family.m == 2
    assert family.ell == (q - 1) // 2
    check = scedf_service.check(family)
    assert check.is_scedf
    assert check.failing_pairs == []
    assert all(set(h.values()) == {family.lam} for h in check.histograms)


@pytest.mark.parametrize("q", [7, 9, 15])
def test_quadratic_residue_family_needs_prime_one_mod_four(scedf_service, q):
    with pytest.raises(ParameterError):
        scedf_service.quadratic_residue_family(q)


@pytest.mark.parametrize("q", [5, 13])
def test_third_set_is_blocked(scedf_service, q):
    family = scedf_service.quadratic_residue_family(q)
    a1, a2 = family.sets
    assert scedf_service.circular_extension_is_blocked(family.group, a1, a2, family.lam)


def test_blocked_needs_an_external_difference_pair(scedf_service):
    group = group_from_factors((5,))
    with pytest.raises(PreconditionError):
        scedf_service.circular_extension_is_blocked(
            group, GroupSubset.from_indices(group, [0, 1]), GroupSubset.from_indices(group, [2, 3])
        )


def test_difference_multiset(scedf_service):
    group = group_from_factors((5,))
    b = GroupSubset.from_indices(group, [2, 3])
    a = GroupSubset.from_indices(group, [1, 4])
    assert scedf_service.difference_multiset(b, a) == Counter({(1,): 1, (2,): 1, (3,): 1, (4,): 1})


def test_overlapping_family_is_not_scedf(scedf_service):
    group = group_from_factors((5,))
    family = DifferenceFamily(
        group=group,
        sets=(GroupSubset.from_indices(group, [1, 4]), GroupSubset.from_indices(group, [1, 2])),
    )
    check = scedf_service.check(family)
    assert not check.disjoint
    assert not check.is_scedf


def test_no_three_set_family_up_to_order_13(group_service, scedf_service):
    searched = []
    for n in range(2, 14):
        for group in group_service.abelian_groups_of_order(n):
            for lam in range(1, n):
                for ell in range(1, n // 3 + 1):
                    if ell * ell != lam * (n - 1):
                        continue
                    searched.append((group.order, ell, lam))
                    assert scedf_service.exhaustive_scedf_search(group, 3, ell, lam) == []
    assert searched == [(10, 3, 1)]


def test_exhaustive_search_rejects_bad_parameters(scedf_service):
    with pytest.raises(ParameterError):
        scedf_service.exhaustive_scedf_search(group_from_factors((10,)), 3, 2, 1)


@pytest.mark.parametrize("factors, r, lam", [((10,), 3, 1), ((17,), 4, 1), ((3, 3), 4, 2)])
def test_near_factorization_gives_a_two_set_family(search_service, scedf_service, factors, r, lam):
    group = group_from_factors(factors)
    report = search_service.search(SearchTask(group=group, r=r, s=r, lam=lam))
    assert report.found
    for nf in report.found:
        assert search_service.mate_service.verify(group, nf.a, nf.b, lam)
        family = DifferenceFamily(group=group, sets=(nf.a, nf.b.negated()), lam=lam)
        assert scedf_service.is_scedf(family)


@pytest.mark.parametrize("n, r", [(10, 3), (17, 4), (26, 5)])
def test_cyclic_interval_pair_gives_a_two_set_family(mate_service, scedf_service, n, r):
    nf = mate_service.cyclic_interval_factorization(n, r)
    assert scedf_service.is_scedf(DifferenceFamily(group=nf.group, sets=(nf.a, nf.b.negated())))

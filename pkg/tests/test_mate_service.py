import random
from fractions import Fraction
from itertools import combinations

import pytest

from src.application.services.group_service import group_from_factors
from src.domain.entities import GroupSubset, MateTag, Solver
from src.domain.exceptions import ParameterError
from src.domain.known_results import INDEX_TWO_ROWS, Z199_BENCH_SET


@pytest.mark.parametrize("solver", [Solver.DENSE, Solver.SPARSE])
def test_mate_of_z7_pair(mate_service, solver):
    group = group_from_factors((7,))
    result = mate_service.compute_mate(group, GroupSubset.from_indices(group, [0, 3]), 1, solver)
    assert result.tag is MateTag.FOUND
    assert result.solver is solver
    assert result.mate.indices == (1, 2, 3)


def test_inverse_entries_are_half_integers(mate_service):
    group = group_from_factors((7,))
    inverse = mate_service.exact_inverse(group, GroupSubset.from_indices(group, [0, 3]))
    entries = {x for row in inverse for x in row}
    assert entries == {Fraction(1, 2), Fraction(-1, 2)}


@pytest.mark.parametrize("solver", [Solver.DENSE, Solver.SPARSE])
def test_index_two_mate(mate_service, solver):
    row = INDEX_TWO_ROWS[0]
    group = group_from_factors(row.factors)
    a = GroupSubset.from_elements(group, row.a)
    result = mate_service.compute_mate(group, a, row.lam, solver)
    assert result.found
    assert result.mate == GroupSubset.from_elements(group, row.b)


@pytest.mark.parametrize("solver", [Solver.DENSE, Solver.SPARSE])
def test_whole_group_is_singular(mate_service, solver):
    group = group_from_factors((3,))
    whole = GroupSubset.from_indices(group, range(3))
    assert mate_service.compute_mate(group, whole, 3, solver).tag is MateTag.SINGULAR


@pytest.mark.parametrize("solver", [Solver.DENSE, Solver.SPARSE])
def test_perfect_difference_set_has_no_mate(mate_service, solver):
    group = group_from_factors((7,))
    result = mate_service.compute_mate(group, GroupSubset.from_indices(group, [0, 1, 3]), 1, solver)
    assert result.tag is MateTag.NON_BINARY
    assert result.mate is None


def test_mate_size_must_divide(mate_service):
    group = group_from_factors((7,))
    with pytest.raises(ParameterError):
        mate_service.compute_mate(group, GroupSubset.from_indices(group, [0, 1, 2, 3]))


def test_walk_matrix_is_regular(mate_service):
    group = group_from_factors((2, 4))
    subset = GroupSubset.from_indices(group, [0, 1, 5])
    walk = mate_service.build_walk_matrix(group, subset)
    assert walk.row_sums() == [3] * 8
    assert walk.column_sums() == [3] * 8
    dense = walk.to_dense()
    table = group.addition_table
    for i in range(8):
        for j in range(8):
            assert dense[i][j] == (1 if any(table[i][h] == j for h in subset.indices) else 0)


def test_verify_and_matrix_product_check(mate_service):
    group = group_from_factors((7,))
    a = GroupSubset.from_indices(group, [0, 3])
    b = GroupSubset.from_indices(group, [1, 2, 3])
    assert mate_service.verify(group, a, b)
    assert mate_service.matrix_product_check(group, a, b)
    wrong = GroupSubset.from_indices(group, [1, 2, 4])
    assert not mate_service.verify(group, a, wrong)
    assert not mate_service.matrix_product_check(group, a, wrong)
    assert not mate_service.verify(group, a, GroupSubset.from_indices(group, [1, 2]))


@pytest.mark.parametrize("n, r", [(7, 2), (7, 3), (13, 3), (13, 4), (25, 6), (31, 5), (64, 7)])
def test_cyclic_interval_factorization(mate_service, n, r):
    nf = mate_service.cyclic_interval_factorization(n, r)
    assert nf.r == r and nf.s == (n - 1) // r
    assert mate_service.verify(nf.group, nf.a, nf.b)
    assert mate_service.compute_mate_sparse(nf.group, nf.a).mate == nf.b


@pytest.mark.parametrize("factors", [(7,), (9,), (10,), (3, 3), (2, 8), (11,), (13,), (4, 4)])
def test_solvers_agree_with_brute_force(mate_service, factors):
    rng = random.Random(sum(factors))
    group = group_from_factors(factors)
    n = group.order
    for r in range(2, n - 1):
        if (n - 1) % r:
            continue
        s = (n - 1) // r
        for _ in range(6):
            a = GroupSubset.from_indices(group, rng.sample(range(n), r))
            dense = mate_service.compute_mate_dense(group, a)
            sparse = mate_service.compute_mate_sparse(group, a)
            assert dense.tag is sparse.tag
            mates = [
                b for b in (GroupSubset.from_indices(group, c) for c in combinations(range(n), s))
                if mate_service.verify(group, a, b)
            ]
            if dense.found:
                assert dense.mate == sparse.mate
                assert mates == [dense.mate]
            else:
                assert mates == []


@pytest.mark.slow
def test_z199_solvers_agree(mate_service):
    group = group_from_factors((199,))
    a = GroupSubset.from_indices(group, Z199_BENCH_SET)
    dense = mate_service.compute_mate_dense(group, a)
    sparse = mate_service.compute_mate_sparse(group, a)
    assert dense.found and sparse.found
    assert dense.mate == sparse.mate
    assert dense.mate.size == 22


def _all_mates(group, a, lam):
    """Every B with A + B = lam (G - {0}), by backtracking over B in index order."""
    n = group.order
    total = lam * (n - 1)
    if total % a.size:
        return []
    s = total // a.size
    table = group.addition_table
    counts = [0] * n
    mates = []

    def extend(start, chosen):
        if len(chosen) == s:
            mates.append(tuple(chosen))
            return
        for y in range(start, n - (s - len(chosen)) + 1):
            sums = [table[x][y] for x in a.indices]
            if any(z == 0 or counts[z] >= lam for z in sums):
                continue
            for z in sums:
                counts[z] += 1
            chosen.append(y)
            extend(y + 1, chosen)
            chosen.pop()
            for z in sums:
                counts[z] -= 1

    extend(0, [])
    return mates


def _groups_up_to(group_service, bound):
    return [group for n in range(2, bound + 1) for group in group_service.abelian_groups_of_order(n)]


@pytest.mark.parametrize("order", range(2, 17))
def test_mate_is_unique_and_found(group_service, mate_service, order):
    for group in group_service.abelian_groups_of_order(order):
        n = group.order
        for lam in (1, 2):
            for r in range(1, min(4, n) + 1):
                if (lam * (n - 1)) % r:
                    continue
                for rest in combinations(range(1, n), r - 1):
                    a = GroupSubset.from_indices(group, (0,) + rest)
                    mates = _all_mates(group, a, lam)
                    assert len(mates) <= 1, (group.literal, a.indices, lam)
                    result = mate_service.compute_mate_sparse(group, a, lam)
                    if mates:
                        assert result.found and result.mate.indices == mates[0]
                    else:
                        assert not result.found


def _random_inputs(group_service, count, max_order, seed):
    rng = random.Random(seed)
    groups = _groups_up_to(group_service, max_order)
    inputs = []
    while len(inputs) < count:
        group = rng.choice(groups)
        n = group.order
        lam = rng.choice((1, 2))
        sizes = [r for r in range(1, n + 1) if (lam * (n - 1)) % r == 0]
        r = rng.choice(sizes)
        inputs.append((group, GroupSubset.from_indices(group, rng.sample(range(n), r)), lam))
    return inputs


def _assert_solvers_agree(mate_service, group, a, lam):
    dense = mate_service.compute_mate_dense(group, a, lam)
    sparse = mate_service.compute_mate_sparse(group, a, lam)
    assert dense.tag is sparse.tag, (group.literal, a.indices, lam)
    assert dense.mate == sparse.mate


def test_solvers_agree_on_random_inputs(group_service, mate_service):
    for group, a, lam in _random_inputs(group_service, 150, 30, seed=7):
        _assert_solvers_agree(mate_service, group, a, lam)


@pytest.mark.slow
def test_solvers_agree_on_a_thousand_random_inputs(group_service, mate_service):
    for group, a, lam in _random_inputs(group_service, 1000, 60, seed=2024):
        _assert_solvers_agree(mate_service, group, a, lam)


@pytest.mark.parametrize("order", range(2, 11))
def test_verify_matches_matrix_product_check(group_service, mate_service, order):
    for group in group_service.abelian_groups_of_order(order):
        n = group.order
        for lam in (1, 2):
            for r in range(1, n + 1):
                if (lam * (n - 1)) % r or lam * (n - 1) // r > n:
                    continue
                s = lam * (n - 1) // r
                subsets_b = [GroupSubset.from_indices(group, c) for c in combinations(range(n), s)]
                for combo in combinations(range(n), r):
                    a = GroupSubset.from_indices(group, combo)
                    for b in subsets_b:
                        ok = mate_service.verify(group, a, b, lam)
                        assert ok == mate_service.matrix_product_check(group, a, b, lam)
                        assert ok == mate_service.verify(group, b, a, lam)

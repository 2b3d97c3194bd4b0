from dataclasses import replace
from pathlib import Path

import pytest

from src.application.services.group_service import group_from_factors
from src.domain.entities import CampaignConfig, CatalogRecord, GroupSubset, SearchStrategy
from src.domain.exceptions import CatalogError
from src.domain.known_results import INDEX_TWO_ROWS


def test_order_144_campaign_is_fully_ruled_out(campaign_service, tmp_path):
    config = CampaignConfig(orders=[144], r_values=[11], report_path=str(tmp_path / "report.csv"))
    rows, paths = campaign_service.run_campaign(config)
    assert len(rows) == 9
    assert all(row.outcome == "ruled-out" and row.method for row in rows)
    assert all((row.r, row.s) == (11, 13) for row in rows)
    assert all(Path(p).exists() for p in paths)
    assert campaign_service.catalog_repository.load() == []


def test_campaign_searches_and_catalogs(campaign_service, tmp_path):
    config = CampaignConfig(groups=["Z13"], report_path=str(tmp_path / "report.csv"))
    rows, _ = campaign_service.run_campaign(config)
    assert [(row.r, row.s, row.outcome) for row in rows] == [(2, 6, "found"), (3, 4, "found")]
    records = campaign_service.catalog_repository.load()
    assert len(records) == sum(row.found for row in rows)
    assert all(record.group == "Z13" and record.strategy == "plain" for record in records)


def test_campaign_resumes_from_stored_checkpoint(campaign_service, tmp_path):
    config = CampaignConfig(groups=["Z13"], r_values=[3], time_budget=1e-9,
                            report_path=str(tmp_path / "report.csv"))
    rows, _ = campaign_service.run_campaign(config)
    assert rows[0].outcome == "incomplete"

    config.time_budget = 600
    rows, _ = campaign_service.run_campaign(config)
    assert rows[0].outcome == "found"
    task = campaign_service.campaign_tasks(config)[0]
    assert campaign_service.checkpoint_repository.load(task.task_id) is None


def test_default_strategies(campaign_service):
    assert campaign_service.default_strategy(group_from_factors((23, 2, 2)), 1) is SearchStrategy.COSET_2X2
    assert campaign_service.default_strategy(group_from_factors((23, 2, 2)), 2) is SearchStrategy.PLAIN
    assert campaign_service.default_strategy(group_from_factors((3, 2, 4)), 2) is SearchStrategy.PLAIN
    assert campaign_service.default_strategy(group_from_factors((3, 2, 4)), 1) is SearchStrategy.ORBIT_REDUCED
    assert campaign_service.default_strategy(group_from_factors((13,)), 1) is SearchStrategy.PLAIN


def test_strategy_override(campaign_service):
    config = CampaignConfig(groups=["Z23xZ2xZ2"], strategy_overrides={"Z23xZ2xZ2": "plain"}, r_values=[7])
    tasks = campaign_service.campaign_tasks(config)
    assert [(t.r, t.s, t.strategy) for t in tasks] == [(7, 13, SearchStrategy.PLAIN)]


def test_index_two_table_verifies(campaign_service):
    verdicts = campaign_service.table3_reproduce()
    assert len(verdicts) == len(INDEX_TWO_ROWS)
    assert all(v.passed for v in verdicts)


def test_mutated_index_two_row_fails(campaign_service):
    row = INDEX_TWO_ROWS[1]
    mutated = replace(row, b=row.b[:-1] + ((0, 0),))
    verdicts = campaign_service.table3_reproduce([INDEX_TWO_ROWS[0], mutated])
    assert [v.passed for v in verdicts] == [True, False]


def test_bench_mate(campaign_service):
    group = group_from_factors((7,))
    record = campaign_service.bench_mate(group, GroupSubset.from_indices(group, [0, 3]), repetitions=2)
    assert record.identical
    assert record.dense_tag == record.sparse_tag == "Found"
    assert record.subset == [[0], [3]]


def test_coset_layout_reorders_sorted_factors(campaign_service):
    layout = campaign_service.coset_layout(group_from_factors((2, 2, 23)))
    assert layout.factors == (23, 2, 2)
    assert campaign_service.coset_layout(group_from_factors((2, 4, 3))) is None
    assert campaign_service.coset_layout(group_from_factors((3, 3, 2, 2))) is None
    assert campaign_service.default_strategy(group_from_factors((2, 2, 23)), 1) is SearchStrategy.COSET_2X2


def test_campaign_by_order_uses_coset_layout(campaign_service):
    config = CampaignConfig(orders=[92], r_values=[7])
    tasks = campaign_service.campaign_tasks(config)
    coset_tasks = [t for t in tasks if t.strategy is SearchStrategy.COSET_2X2]
    assert [(t.group.factors, t.r, t.s) for t in coset_tasks] == [((23, 2, 2), 7, 13)]


def test_verify_catalog(campaign_service, tmp_path):
    config = CampaignConfig(groups=["Z13"], r_values=[3], report_path=str(tmp_path / "report.csv"))
    campaign_service.run_campaign(config)
    records = campaign_service.verify_catalog()
    assert records and all(record.r == 3 for record in records)


def test_verify_catalog_rejects_broken_record(campaign_service):
    record = CatalogRecord(
        group="Z7", r=2, s=3, lam=1, a=[[0], [1]], b=[[0], [1], [2]],
        strategy="plain", algorithm="sparse", timestamp="2024-01-01T00:00:00+00:00", elapsed_ms=0.0,
    )
    campaign_service.catalog_repository.append(record)
    with pytest.raises(CatalogError):
        campaign_service.verify_catalog()


@pytest.mark.slow
def test_small_orders_have_no_near_factorizations(campaign_service, tmp_path):
    config = CampaignConfig(orders=list(range(4, 65)), workers=2, time_budget=3600.0,
                            report_path=str(tmp_path / "report.csv"))
    rows, _ = campaign_service.run_campaign(config)
    assert rows
    assert all(row.outcome in ("ruled-out", "none") for row in rows)
    assert campaign_service.catalog_repository.load() == []


def test_campaign_groups_drop_isomorphic_repeats(campaign_service):
    config = CampaignConfig(groups=["Z2xZ2xZ23", "Z46xZ2"], orders=[92])
    assert [g.literal for g in campaign_service.campaign_groups(config)] == ["Z2xZ2xZ23"]


def test_lambda_two_campaign_tasks_are_plain(campaign_service):
    config = CampaignConfig(groups=["Z3xZ2xZ4", "Z23xZ2xZ2"], lambdas=[2])
    tasks = campaign_service.campaign_tasks(config)
    assert tasks
    assert all(t.strategy is SearchStrategy.PLAIN and not t.assume_symmetric for t in tasks)


def test_repeated_campaigns_give_identical_rows(campaign_service, tmp_path):
    def run(name):
        config = CampaignConfig(groups=["Z13", "Z3xZ3"], lambdas=[1, 2], workers=1,
                                report_path=str(tmp_path / name / "report.csv"))
        rows, _ = campaign_service.run_campaign(config)
        return [replace(row, elapsed_ms=0.0) for row in rows]

    first = run("first")
    second = run("second")
    assert first == second
    assert any(row.outcome == "found" for row in first)

    records = [replace(r, timestamp="", elapsed_ms=0.0) for r in campaign_service.catalog_repository.load()]
    half = len(records) // 2
    assert records[:half] == records[half:]

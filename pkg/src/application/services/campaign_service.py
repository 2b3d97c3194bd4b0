"""
Campaign service: batches of searches, published-table reproduction and solver benchmarks.
"""

import logging
import time
from datetime import datetime
from math import prod
from typing import List, Optional, Sequence, Tuple

import pytz

from src.application.services.group_service import GroupService, group_from_factors
from src.application.services.mate_service import MateService
from src.application.services.orbit_service import OrbitService
from src.application.services.search_service import SearchService
from src.domain.entities import (
    BenchRecord,
    CampaignConfig,
    CampaignRow,
    CatalogRecord,
    GroupSpec,
    GroupSubset,
    NearFactorization,
    SearchReport,
    SearchStrategy,
    SearchTask,
    Table3Verdict,
)
from src.domain.exceptions import CatalogError, NearFactError
from src.domain.known_results import INDEX_TWO_ROWS, IndexTwoRow
from src.domain.repositories import CatalogRepository, CheckpointRepository, ReportRepository

logger = logging.getLogger(__name__)


def utc_timestamp() -> str:
    return datetime.now(pytz.UTC).isoformat()


class CampaignService:
    """Service orchestrating many searches and writing their results."""

    def __init__(
        self,
        group_service: GroupService,
        mate_service: MateService,
        orbit_service: OrbitService,
        search_service: SearchService,
        catalog_repository: CatalogRepository,
        checkpoint_repository: CheckpointRepository,
        report_repository: ReportRepository,
    ):
        self.group_service = group_service
        self.mate_service = mate_service
        self.orbit_service = orbit_service
        self.search_service = search_service
        self.catalog_repository = catalog_repository
        self.checkpoint_repository = checkpoint_repository
        self.report_repository = report_repository

    def coset_layout(self, group: GroupSpec) -> Optional[GroupSpec]:
        """The same group written as Z_t x Z2 x Z2 (t odd), or None when it is not of that shape."""
        evens = sorted(n_i for n_i in group.factors if n_i % 2 == 0)
        odds = tuple(n_i for n_i in group.factors if n_i % 2 == 1)
        if evens != [2, 2] or not odds or not group_from_factors(odds).is_cyclic:
            return None
        return group_from_factors((prod(odds), 2, 2))

    def default_strategy(self, group: GroupSpec, lam: int) -> SearchStrategy:
        """coset-2x2 for Z_t x Z2 x Z2, orbit-reduced where a 2-part catalog exists, plain otherwise.

        Tasks with lambda > 1 enumerate non-symmetric candidates, which orbit reduction does not cover.
        """
        if lam > 1:
            return SearchStrategy.PLAIN
        if self.coset_layout(group) is not None:
            return SearchStrategy.COSET_2X2
        if self.orbit_service.involution_catalog(group, 0) is not None:
            return SearchStrategy.ORBIT_REDUCED
        return SearchStrategy.PLAIN

    def campaign_groups(self, config: CampaignConfig) -> List[GroupSpec]:
        """Listed groups, then every group of each order; isomorphic repeats are dropped."""
        candidates = [self.group_service.parse_group(literal) for literal in config.groups]
        for order in config.orders:
            candidates.extend(self.group_service.abelian_groups_of_order(order, config.noncyclic_only))
        groups: List[GroupSpec] = []
        for group in candidates:
            if any(self.group_service.isomorphic(group, seen) for seen in groups):
                logger.debug(f"Skipping {group.literal}, isomorphic to a group already in the campaign")
                continue
            groups.append(group)
        return groups

    def campaign_tasks(self, config: CampaignConfig) -> List[SearchTask]:
        """Every (group, r, s, lambda) of the campaign, in a fixed order."""
        tasks = []
        for group in self.campaign_groups(config):
            for lam in config.lambdas:
                for r, s in self.group_service.nontrivial_splits(group.order, lam):
                    if config.r_values and r not in config.r_values:
                        continue
                    override = config.strategy_overrides.get(group.literal) \
                        or config.strategy_overrides.get(group.canonical_literal)
                    strategy = SearchStrategy(override) if override else self.default_strategy(group, lam)
                    target = group
                    if strategy is SearchStrategy.COSET_2X2 and lam != 1:
                        strategy = SearchStrategy.PLAIN
                    elif strategy is SearchStrategy.COSET_2X2:
                        target = self.coset_layout(group) or group
                        if target is not group:
                            logger.debug(f"Searching {group.literal} as {target.literal}")
                    tasks.append(SearchTask(
                        group=target, r=r, s=s, lam=lam, strategy=strategy,
                        workers=config.workers, time_budget=config.time_budget,
                    ))
        return tasks

    def _record(self, nf: NearFactorization, report: SearchReport) -> CatalogRecord:
        return CatalogRecord(
            group=nf.group.literal,
            r=nf.r,
            s=nf.s,
            lam=nf.lam,
            a=[list(g) for g in nf.a.elements()],
            b=[list(g) for g in nf.b.elements()],
            strategy=report.task.strategy.value,
            algorithm="sparse",
            timestamp=utc_timestamp(),
            elapsed_ms=round(report.wall_time * 1000, 3),
        )

    def record_found(self, report: SearchReport) -> int:
        for nf in report.found:
            self.catalog_repository.append(self._record(nf, report))
        return len(report.found)

    def verify_catalog(self) -> List[CatalogRecord]:
        """Load the catalog and re-verify every record; a failing record raises CatalogError."""
        records = self.catalog_repository.load()
        for line_number, record in enumerate(records, start=1):
            group = self.group_service.parse_group(record.group)
            a = GroupSubset.from_elements(group, record.a)
            b = GroupSubset.from_elements(group, record.b)
            if (a.size, b.size) != (record.r, record.s) or not self.mate_service.verify(group, a, b, record.lam):
                raise CatalogError(f"catalog record {line_number} ({record.group}, r={record.r}) does not verify")
        logger.info(f"{len(records)} catalog records re-verified")
        return records

    def row_for(self, report: SearchReport) -> CampaignRow:
        task = report.task
        if report.ruled_out:
            outcome = "ruled-out"
            method = "+".join(v.criterion.value for v in report.filter_verdicts if v.ruled_out)
        elif not report.exhaustive:
            outcome, method = "incomplete", task.strategy.value
        elif report.found:
            outcome, method = "found", task.strategy.value
        else:
            outcome, method = "none", task.strategy.value
        return CampaignRow(
            group=task.group.literal,
            r=task.r,
            s=task.s,
            lam=task.lam,
            outcome=outcome,
            method=method,
            found=len(report.found),
            candidates_tested=report.candidates_tested,
            elapsed_ms=round(report.wall_time * 1000, 3),
        )

    def run_tasks(self, tasks: Sequence[SearchTask]) -> List[CampaignRow]:
        rows = []
        for index, task in enumerate(tasks, start=1):
            logger.info(f"Campaign task {index}/{len(tasks)}: {task.task_id}")
            try:
                if task.checkpoint is None:
                    task.checkpoint = self.checkpoint_repository.load(task.task_id)
                    if task.checkpoint is not None:
                        logger.info(f"Resuming {task.task_id} from {task.checkpoint}")
                report = self.search_service.search(task)
                self.record_found(report)
                rows.append(self.row_for(report))
            except NearFactError as e:
                logger.error(f"Task {task.task_id} failed: {e}")
                rows.append(CampaignRow(
                    group=task.group.literal, r=task.r, s=task.s, lam=task.lam,
                    outcome="error", method=type(e).__name__,
                ))
        return rows

    def run_campaign(self, config: CampaignConfig) -> Tuple[List[CampaignRow], List[str]]:
        """Filter or search every task and write the report table."""
        tasks = self.campaign_tasks(config)
        logger.info(f"Campaign with {len(tasks)} tasks")
        rows = self.run_tasks(tasks)
        paths = self.report_repository.write_campaign(rows, config.report_path)
        searched = sum(1 for row in rows if row.outcome not in ("ruled-out", "error"))
        logger.info(f"Campaign finished: {len(rows)} tasks, {searched} searched, report at {paths}")
        return rows, paths

    def table3_reproduce(self, rows: Optional[Sequence[IndexTwoRow]] = None) -> List[Table3Verdict]:
        """Check every published index-2 row as a (4, s, 2)-near-factorization."""
        verdicts = []
        for row in rows if rows is not None else INDEX_TWO_ROWS:
            group = group_from_factors(row.factors)
            a = GroupSubset.from_elements(group, row.a)
            b = GroupSubset.from_elements(group, row.b)
            passed = a.size == row.r and b.size == row.s and self.mate_service.verify(group, a, b, row.lam)
            if not passed:
                logger.error(f"Row {row.label} (r={row.r}, s={row.s}) failed verification")
            verdicts.append(Table3Verdict(label=row.label, r=row.r, s=row.s, passed=passed))
        return verdicts

    def bench_mate(self, group: GroupSpec, subset: GroupSubset, repetitions: int = 3, lam: int = 1) -> BenchRecord:
        """Time the dense and sparse mate algorithms on the same input."""
        repetitions = max(1, repetitions)
        timings = {}
        results = {}
        for name, method in (("dense", self.mate_service.compute_mate_dense),
                             ("sparse", self.mate_service.compute_mate_sparse)):
            started = time.perf_counter()
            for _ in range(repetitions):
                results[name] = method(group, subset, lam)
            timings[name] = (time.perf_counter() - started) * 1000 / repetitions
        dense, sparse = results["dense"], results["sparse"]
        identical = dense.tag is sparse.tag and (
            (dense.mate is None and sparse.mate is None)
            or (dense.mate is not None and sparse.mate is not None and dense.mate.bits == sparse.mate.bits)
        )
        record = BenchRecord(
            group=group.literal,
            subset=[list(g) for g in subset.elements()],
            repetitions=repetitions,
            dense_ms=timings["dense"],
            sparse_ms=timings["sparse"],
            dense_tag=dense.tag.value,
            sparse_tag=sparse.tag.value,
            identical=identical,
        )
        logger.info(f"Bench {group.literal}: dense {record.dense_ms:.1f} ms, sparse {record.sparse_ms:.1f} ms")
        return record

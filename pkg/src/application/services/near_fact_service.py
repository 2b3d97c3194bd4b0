"""
Main near-factorization service the command line talks to.
"""

import logging
import time
from typing import List, Optional, Tuple

from src.domain.entities import (
    BenchRecord,
    CampaignConfig,
    CampaignRow,
    CatalogRecord,
    CriterionVerdict,
    DifferenceFamily,
    GroupSpec,
    GroupSubset,
    MateResult,
    ScedfCheck,
    SearchReport,
    SearchStrategy,
    SearchTask,
    Solver,
    Table3Verdict,
)
from src.domain.repositories import CatalogRepository, CheckpointRepository
from .campaign_service import CampaignService
from .criteria_service import CriteriaService
from .group_service import GroupService
from .mate_service import MateService
from .scedf_service import ScedfService
from .search_service import SearchService

logger = logging.getLogger(__name__)


class NearFactService:
    """Main service for the near-factorization toolkit."""

    def __init__(
        self,
        group_service: GroupService,
        mate_service: MateService,
        criteria_service: CriteriaService,
        search_service: SearchService,
        scedf_service: ScedfService,
        campaign_service: CampaignService,
        checkpoint_repository: CheckpointRepository,
    ):
        self.group_service = group_service
        self.mate_service = mate_service
        self.criteria_service = criteria_service
        self.search_service = search_service
        self.scedf_service = scedf_service
        self.campaign_service = campaign_service
        self.checkpoint_repository = checkpoint_repository

    def use_storage(self, catalog_repository: CatalogRepository, checkpoint_repository: CheckpointRepository) -> None:
        """Point catalog and checkpoint writes at other repositories."""
        self.campaign_service.catalog_repository = catalog_repository
        self.campaign_service.checkpoint_repository = checkpoint_repository
        self.search_service.checkpoint_repository = checkpoint_repository
        self.checkpoint_repository = checkpoint_repository

    def mate(self, group_literal: str, set_text: str, lam: int = 1,
             algorithm: str = "sparse") -> Tuple[GroupSpec, GroupSubset, MateResult, float]:
        """Compute the mate of a set and time it."""
        group = self.group_service.parse_group(group_literal)
        subset = self.group_service.parse_subset(group, set_text)
        started = time.perf_counter()
        result = self.mate_service.compute_mate(group, subset, lam, Solver(algorithm))
        elapsed_ms = (time.perf_counter() - started) * 1000
        logger.info(f"Mate of {subset.format()} in {group.literal}: {result.tag.value} ({elapsed_ms:.2f} ms)")
        return group, subset, result, elapsed_ms

    def verify(self, group_literal: str, a_text: str, b_text: str, lam: int = 1) -> Tuple[bool, bool]:
        """Multiset verification and the matrix-product check for the same pair."""
        group = self.group_service.parse_group(group_literal)
        a = self.group_service.parse_subset(group, a_text)
        b = self.group_service.parse_subset(group, b_text)
        return self.mate_service.verify(group, a, b, lam), self.mate_service.matrix_product_check(group, a, b, lam)

    def search(self, group_literal: str, r: int, s: int, lam: int = 1, strategy: str = "plain",
               assume_symmetric: Optional[bool] = None, resume: Optional[str] = None,
               workers: int = 1, time_budget: Optional[float] = None) -> SearchReport:
        """Run one search and append its finds to the catalog."""
        group = self.group_service.parse_group(group_literal)
        task = SearchTask(
            group=group, r=r, s=s, lam=lam, strategy=SearchStrategy(strategy),
            assume_symmetric=assume_symmetric, workers=workers, time_budget=time_budget,
        )
        if resume:
            task_id, cursor = self.checkpoint_repository.read_file(resume)
            if task_id and task_id != task.task_id:
                logger.warning(f"Checkpoint {resume} belongs to {task_id}, not {task.task_id}")
            task.checkpoint = cursor
        report = self.search_service.search(task)
        self.campaign_service.record_found(report)
        return report

    def filters(self, group_literal: str, r: int, s: int) -> List[CriterionVerdict]:
        group = self.group_service.parse_group(group_literal)
        return self.criteria_service.evaluate_all(group, r, s)

    def filters_for_order(self, order: int) -> List[Tuple[GroupSpec, int, int, List[CriterionVerdict]]]:
        """Every abelian group of an order against every nontrivial split of order - 1."""
        rows = []
        for group in self.group_service.abelian_groups_of_order(order):
            for r, s in self.group_service.nontrivial_splits(order):
                rows.append((group, r, s, self.criteria_service.evaluate_all(group, r, s)))
        return rows

    def scedf(self, group_literal: str, sets_text: str, lam: int) -> Tuple[DifferenceFamily, ScedfCheck]:
        """Check a family written as `A_0|A_1|...`."""
        group = self.group_service.parse_group(group_literal)
        sets = tuple(self.group_service.parse_subset(group, part) for part in sets_text.split("|"))
        family = DifferenceFamily(group=group, sets=sets, lam=lam)
        return family, self.scedf_service.check(family)

    def campaign(self, config: CampaignConfig) -> Tuple[List[CampaignRow], List[str]]:
        return self.campaign_service.run_campaign(config)

    def verify_catalog(self) -> List[CatalogRecord]:
        return self.campaign_service.verify_catalog()

    def table3(self) -> List[Table3Verdict]:
        return self.campaign_service.table3_reproduce()

    def bench(self, group_literal: str, set_text: str, repetitions: int = 3, lam: int = 1) -> BenchRecord:
        group = self.group_service.parse_group(group_literal)
        subset = self.group_service.parse_subset(group, set_text)
        return self.campaign_service.bench_mate(group, subset, repetitions, lam)

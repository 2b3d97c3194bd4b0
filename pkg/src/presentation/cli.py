"""
Command-line presentation layer for the near-factorization toolkit.
"""

import argparse
import json
import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from ..application.services import NearFactService
from ..domain.entities import CampaignConfig, SearchStrategy, Solver
from ..domain.exceptions import CatalogError, NearFactError, ParameterError
from ..domain.repositories import CatalogRepository, CheckpointRepository
from ..infrastructure.settings import Settings
from .models.report_formatter import ReportFormatter

logger = logging.getLogger(__name__)

StorageFactory = Callable[[str, str], Tuple[CatalogRepository, CheckpointRepository]]

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_ERROR = 2


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nearfact", description="Near-factorizations of finite abelian groups")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    mate = sub.add_parser("mate", help="compute the unique mate of a set")
    mate.add_argument("--group", required=True)
    mate.add_argument("--set", dest="subset", required=True)
    mate.add_argument("--lambda", dest="lam", type=int, default=1)
    mate.add_argument("--algorithm", choices=[s.value for s in Solver], default=Solver.SPARSE.value)
    mate.add_argument("--show-inverse", action="store_true", help="print the exact inverse of M(A)")

    verify = sub.add_parser("verify", help="check a pair (A, B) both ways")
    verify.add_argument("--group", required=True)
    verify.add_argument("--set", dest="subset", required=True)
    verify.add_argument("--mate", required=True)
    verify.add_argument("--lambda", dest="lam", type=int, default=1)

    search = sub.add_parser("search", help="exhaustive search for (r,s,lambda)-near-factorizations")
    search.add_argument("--group", required=True)
    search.add_argument("--r", type=int, required=True)
    search.add_argument("--s", type=int, required=True)
    search.add_argument("--lambda", dest="lam", type=int, default=1)
    search.add_argument("--strategy", choices=[s.value for s in SearchStrategy], default=SearchStrategy.PLAIN.value)
    symmetry = search.add_mutually_exclusive_group()
    symmetry.add_argument("--symmetric", dest="assume_symmetric", action="store_true", default=None)
    symmetry.add_argument("--non-symmetric", dest="assume_symmetric", action="store_false")
    search.add_argument("--resume", metavar="FILE")
    search.add_argument("--workers", type=int)
    search.add_argument("--time-budget", type=float)
    search.add_argument("--dedupe", action="store_true", help="also report inequivalent finds")

    filters = sub.add_parser("filters", help="evaluate the nonexistence criteria")
    filters.add_argument("--group")
    filters.add_argument("--r", type=int)
    filters.add_argument("--s", type=int)
    filters.add_argument("--order", type=int)
    filters.add_argument("--all-groups", action="store_true")

    scedf = sub.add_parser("scedf", help="check a strong circular external difference family")
    scedf.add_argument("--group", required=True)
    scedf.add_argument("--sets", required=True, help='sets separated by "|"')
    scedf.add_argument("--lambda", dest="lam", type=int, default=1)

    campaign = sub.add_parser("campaign", help="filter or search many groups and splits")
    campaign.add_argument("--config", metavar="FILE")
    campaign.add_argument("--order", type=_int_list, help="comma-separated group orders")
    campaign.add_argument("--groups", help="comma-separated group literals")
    campaign.add_argument("--lambda", dest="lambdas", type=_int_list)
    campaign.add_argument("--r", dest="r_values", type=_int_list)
    campaign.add_argument("--include-cyclic", action="store_true")
    campaign.add_argument("--workers", type=int)
    campaign.add_argument("--time-budget", type=float)
    campaign.add_argument("--report", metavar="PATH")

    catalog = sub.add_parser("catalog", help="re-verify every record of the catalog")
    catalog.add_argument("--path", metavar="FILE", help="catalog file (defaults to NEARFACT_CATALOG)")

    sub.add_parser("table3", help="verify the published index-2 near-factorizations")

    bench = sub.add_parser("bench", help="time the dense and sparse mate algorithms")
    bench.add_argument("--group", required=True)
    bench.add_argument("--set", dest="subset", required=True)
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--lambda", dest="lam", type=int, default=1)
    bench.add_argument("--out", metavar="FILE")
    return parser


class NearFactCli:
    """Argparse front end dispatching to NearFactService."""

    def __init__(self, service: NearFactService, settings: Settings,
                 storage_factory: Optional[StorageFactory] = None, echo: Callable[[str], None] = print):
        self.service = service
        self.settings = settings
        self.storage_factory = storage_factory
        self.echo = echo

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        handler = getattr(self, f"cmd_{args.command}")
        try:
            return handler(args)
        except NearFactError as e:
            logger.error(f"{args.command} failed: {e}")
            return EXIT_ERROR

    def cmd_mate(self, args) -> int:
        group, subset, result, elapsed_ms = self.service.mate(args.group, args.subset, args.lam, args.algorithm)
        if args.show_inverse:
            self.echo(ReportFormatter.inverse(self.service.mate_service.exact_inverse(group, subset)))
        self.echo(ReportFormatter.mate(group, subset, result, args.lam, elapsed_ms))
        return EXIT_OK

    def cmd_verify(self, args) -> int:
        multiset_ok, matrix_ok = self.service.verify(args.group, args.subset, args.mate, args.lam)
        self.echo(ReportFormatter.verify(multiset_ok, matrix_ok))
        if not (multiset_ok and matrix_ok):
            logger.error(f"Pair fails verification: verify={multiset_ok}, matrix_product_check={matrix_ok}")
            return EXIT_FAILED_CHECK
        return EXIT_OK

    def cmd_search(self, args) -> int:
        report = self.service.search(
            args.group, args.r, args.s, args.lam,
            strategy=args.strategy,
            assume_symmetric=args.assume_symmetric,
            resume=args.resume,
            workers=self.settings.resolve_workers(args.workers),
            time_budget=args.time_budget if args.time_budget is not None else self.settings.time_budget,
        )
        representatives = self.service.search_service.deduplicate_found(report.found) if args.dedupe else None
        self.echo(ReportFormatter.search(report, representatives))
        return EXIT_OK

    def cmd_filters(self, args) -> int:
        if args.order is not None:
            if not args.all_groups:
                raise ParameterError("--order needs --all-groups")
            self.echo(ReportFormatter.filters_csv(self.service.filters_for_order(args.order)).rstrip("\n"))
            return EXIT_OK
        if not args.group or args.r is None or args.s is None:
            raise ParameterError("filters needs --group, --r and --s (or --order N --all-groups)")
        self.echo(ReportFormatter.verdicts(self.service.filters(args.group, args.r, args.s)))
        return EXIT_OK

    def cmd_scedf(self, args) -> int:
        family, check = self.service.scedf(args.group, args.sets, args.lam)
        blocked = None
        if check.is_scedf and family.m == 2:
            a1, a2 = family.sets
            blocked = self.service.scedf_service.circular_extension_is_blocked(family.group, a1, a2, family.lam)
        self.echo(ReportFormatter.scedf(family, check, blocked))
        return EXIT_OK

    def campaign_config(self, args) -> CampaignConfig:
        """Settings, then the config file, then flags; NEARFACT_WORKERS last."""
        data = {
            "catalog_path": self.settings.catalog_path,
            "checkpoint_dir": self.settings.checkpoint_dir,
            "time_budget": self.settings.time_budget,
        }
        if args.config:
            try:
                data.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
            except (OSError, ValueError) as e:
                raise ParameterError(f"cannot read campaign config {args.config}: {e}")
        config = CampaignConfig.from_dict(data)
        if args.order:
            config.orders = args.order
        if args.groups:
            config.groups = [g for g in args.groups.split(",") if g.strip()]
        if args.lambdas:
            config.lambdas = args.lambdas
        if args.r_values:
            config.r_values = args.r_values
        if args.include_cyclic:
            config.noncyclic_only = False
        if args.time_budget is not None:
            config.time_budget = args.time_budget
        if args.report:
            config.report_path = args.report
        config.workers = self.settings.resolve_workers(args.workers or config.workers)
        return config

    def cmd_campaign(self, args) -> int:
        config = self.campaign_config(args)
        if not config.orders and not config.groups:
            raise ParameterError("campaign needs --order, --groups or a config file listing them")
        storage_changed = (config.catalog_path, config.checkpoint_dir) != \
            (self.settings.catalog_path, self.settings.checkpoint_dir)
        if storage_changed and self.storage_factory is not None:
            self.service.use_storage(*self.storage_factory(config.catalog_path, config.checkpoint_dir))
        rows, paths = self.service.campaign(config)
        for row in rows:
            self.echo(f"{row.group}\t({row.r},{row.s})\tlambda={row.lam}\t{row.outcome}\t{row.method}\tfound={row.found}")
        self.echo("report: " + ", ".join(paths))
        return EXIT_OK

    def cmd_catalog(self, args) -> int:
        if args.path and args.path != self.settings.catalog_path and self.storage_factory is not None:
            self.service.use_storage(*self.storage_factory(args.path, self.settings.checkpoint_dir))
        try:
            records = self.service.verify_catalog()
        except CatalogError as e:
            logger.error(f"Catalog check failed: {e}")
            return EXIT_FAILED_CHECK
        self.echo(f"{len(records)} records verified")
        return EXIT_OK

    def cmd_table3(self, args) -> int:
        verdicts = self.service.table3()
        self.echo(ReportFormatter.table3(verdicts))
        failed = [v.label for v in verdicts if not v.passed]
        if failed:
            logger.error(f"Rows failing verification: {', '.join(failed)}")
            return EXIT_FAILED_CHECK
        return EXIT_OK

    def cmd_bench(self, args) -> int:
        record = self.service.bench(args.group, args.subset, args.repetitions, args.lam)
        if args.out:
            self.service.campaign_service.report_repository.write_bench(record, args.out)
        self.echo(ReportFormatter.bench(record))
        return EXIT_OK

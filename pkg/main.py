"""
Main entry point for the near-factorization toolkit.
"""

import logging
import sys
from dotenv import load_dotenv

from src.infrastructure.file_store import (
    JsonLinesCatalogRepository,
    JsonCheckpointRepository,
    FileReportRepository
)
from src.infrastructure.settings import Settings
from src.application.services import (
    GroupService,
    MateService,
    OrbitService,
    CriteriaService,
    SearchService,
    ScedfService,
    CampaignService,
    NearFactService
)
from src.presentation.cli import NearFactCli


# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)


def file_storage(catalog_path: str, checkpoint_dir: str):
    """Repositories backed by a catalog file and a checkpoint directory."""
    return JsonLinesCatalogRepository(catalog_path), JsonCheckpointRepository(checkpoint_dir)


def setup_dependencies():
    """Setup dependency injection container."""
    # Load environment variables
    load_dotenv()

    settings = Settings.from_env()
    logging.getLogger().setLevel(settings.log_level)

    # Initialize repositories
    catalog_repository, checkpoint_repository = file_storage(settings.catalog_path, settings.checkpoint_dir)
    report_repository = FileReportRepository()

    # Initialize services
    group_service = GroupService()
    mate_service = MateService()
    orbit_service = OrbitService()
    criteria_service = CriteriaService(group_service)
    search_service = SearchService(
        group_service, mate_service, orbit_service, criteria_service,
        checkpoint_repository=checkpoint_repository
    )
    scedf_service = ScedfService(mate_service)
    campaign_service = CampaignService(
        group_service, mate_service, orbit_service, search_service,
        catalog_repository, checkpoint_repository, report_repository
    )

    service = NearFactService(
        group_service, mate_service, criteria_service, search_service,
        scedf_service, campaign_service, checkpoint_repository
    )
    return NearFactCli(service, settings, storage_factory=file_storage)


def main(argv=None) -> int:
    """Main application entry point."""
    try:
        cli = setup_dependencies()
        return cli.run(argv)
    except KeyboardInterrupt:
        logger.info("Received interrupt signal, shutting down...")
        return 130
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        return 2
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())

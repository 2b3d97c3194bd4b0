import pytest

from src.application.services import (
    CampaignService,
    CriteriaService,
    GroupService,
    MateService,
    NearFactService,
    OrbitService,
    ScedfService,
    SearchService,
)
from src.infrastructure.file_store import FileReportRepository, JsonCheckpointRepository, JsonLinesCatalogRepository
from src.infrastructure.settings import Settings


@pytest.fixture
def group_service():
    return GroupService()


@pytest.fixture
def mate_service():
    return MateService()


@pytest.fixture
def orbit_service():
    return OrbitService()


@pytest.fixture
def criteria_service(group_service):
    return CriteriaService(group_service)


@pytest.fixture
def checkpoint_repository(tmp_path):
    return JsonCheckpointRepository(str(tmp_path / "checkpoints"))


@pytest.fixture
def catalog_repository(tmp_path):
    return JsonLinesCatalogRepository(str(tmp_path / "catalog.jsonl"))


@pytest.fixture
def search_service(group_service, mate_service, orbit_service, criteria_service):
    return SearchService(group_service, mate_service, orbit_service, criteria_service)


@pytest.fixture
def scedf_service(mate_service):
    return ScedfService(mate_service)


@pytest.fixture
def campaign_service(group_service, mate_service, orbit_service, search_service,
                     catalog_repository, checkpoint_repository):
    search_service.checkpoint_repository = checkpoint_repository
    return CampaignService(
        group_service, mate_service, orbit_service, search_service,
        catalog_repository, checkpoint_repository, FileReportRepository(),
    )


@pytest.fixture
def near_fact_service(group_service, mate_service, criteria_service, search_service,
                      scedf_service, campaign_service, checkpoint_repository):
    return NearFactService(
        group_service, mate_service, criteria_service, search_service,
        scedf_service, campaign_service, checkpoint_repository,
    )


@pytest.fixture
def settings(tmp_path):
    return Settings(
        workers=None,
        catalog_path=str(tmp_path / "catalog.jsonl"),
        checkpoint_dir=str(tmp_path / "checkpoints"),
    )

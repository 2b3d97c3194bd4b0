"""
Application services package.
"""

from .group_service import GroupService
from .mate_service import MateService
from .orbit_service import OrbitService
from .criteria_service import CriteriaService
from .search_service import SearchService
from .scedf_service import ScedfService
from .campaign_service import CampaignService
from .near_fact_service import NearFactService

__all__ = [
    'GroupService',
    'MateService',
    'OrbitService',
    'CriteriaService',
    'SearchService',
    'ScedfService',
    'CampaignService',
    'NearFactService'
]

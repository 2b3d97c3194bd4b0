"""
Repository interfaces for the domain layer.
"""

from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

from .entities import BenchRecord, CampaignRow, CatalogRecord, SearchCursor, SearchTask


class CatalogRepository(ABC):
    """Interface for the catalog of found near-factorizations."""

    @abstractmethod
    def append(self, record: CatalogRecord) -> CatalogRecord:
        """Append a record to the catalog."""
        pass

    @abstractmethod
    def load(self) -> List[CatalogRecord]:
        """Load every record in the catalog."""
        pass


class CheckpointRepository(ABC):
    """Interface for resumable search checkpoints."""

    @abstractmethod
    def save(self, task: SearchTask, cursor: SearchCursor) -> str:
        """Persist a cursor for a task and return where it was written."""
        pass

    @abstractmethod
    def load(self, task_id: str) -> Optional[SearchCursor]:
        """Get the stored cursor of a task, if any."""
        pass

    @abstractmethod
    def read_file(self, path: str) -> Tuple[Optional[str], SearchCursor]:
        """Read a checkpoint given by path, returning its task id and cursor."""
        pass

    @abstractmethod
    def clear(self, task_id: str) -> bool:
        """Remove a finished task's checkpoint."""
        pass


class ReportRepository(ABC):
    """Interface for campaign and benchmark reports."""

    @abstractmethod
    def write_campaign(self, rows: List[CampaignRow], path: str) -> List[str]:
        """Write the campaign table and return the written paths."""
        pass

    @abstractmethod
    def write_bench(self, record: BenchRecord, path: str) -> str:
        """Write a benchmark record."""
        pass

"""
Local file storage for catalogs, checkpoints and reports.
"""

import csv
import json
import logging
import os
from pathlib import Path
from typing import List, Optional, Tuple

from ..domain.entities import BenchRecord, CampaignRow, CatalogRecord, SearchCursor, SearchTask
from ..domain.exceptions import CatalogError
from ..domain.repositories import CatalogRepository, CheckpointRepository, ReportRepository

logger = logging.getLogger(__name__)

CATALOG_VERSION = 1
REPORT_COLUMNS = ["group", "r", "s", "lambda", "outcome", "method", "found", "candidates_tested", "elapsed_ms"]


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    tmp_path.write_text(text, encoding="utf-8")
    os.replace(tmp_path, path)


class JsonLinesCatalogRepository(CatalogRepository):
    """JSON-lines catalog: one sorted-key record per line."""

    def __init__(self, path: str):
        self.path = Path(path)

    def encode(self, record: CatalogRecord) -> str:
        return json.dumps(record.to_dict(), sort_keys=True, ensure_ascii=False)

    def append(self, record: CatalogRecord) -> CatalogRecord:
        """Append a record to the catalog."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(self.encode(record) + "\n")
        return record

    def load(self) -> List[CatalogRecord]:
        """Load every record in the catalog."""
        if not self.path.exists():
            return []
        records = []
        with self.path.open("r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    data = json.loads(line)
                    record = CatalogRecord.from_dict(data)
                except (ValueError, KeyError, TypeError) as e:
                    logger.error(f"Unreadable catalog line {line_number} in {self.path}: {e}")
                    raise CatalogError(f"{self.path}:{line_number}: {e}")
                if record.v != CATALOG_VERSION:
                    raise CatalogError(f"{self.path}:{line_number}: unsupported schema version {record.v}")
                records.append(record)
        return records


class JsonCheckpointRepository(CheckpointRepository):
    """One JSON checkpoint per task id, written via a temporary sibling and os.replace."""

    def __init__(self, directory: str):
        self.directory = Path(directory)

    def path_for(self, task_id: str) -> Path:
        return self.directory / f"{task_id}.json"

    def save(self, task: SearchTask, cursor: SearchCursor) -> str:
        path = self.path_for(task.task_id)
        payload = {"task": task.to_dict(), "task_id": task.task_id, **cursor.to_dict()}
        _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True))
        logger.info(f"Checkpoint for {task.task_id} written to {path}")
        return str(path)

    def load(self, task_id: str) -> Optional[SearchCursor]:
        path = self.path_for(task_id)
        if not path.exists():
            return None
        return self.read_file(str(path))[1]

    def read_file(self, path: str) -> Tuple[Optional[str], SearchCursor]:
        """Read any checkpoint file, returning its task id and cursor."""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise CatalogError(f"cannot read checkpoint {path}: {e}")
        return data.get("task_id"), SearchCursor.from_dict(data)

    def clear(self, task_id: str) -> bool:
        path = self.path_for(task_id)
        if path.exists():
            path.unlink()
            return True
        return False


class FileReportRepository(ReportRepository):
    """CSV plus aligned text tables for campaign reports, JSON for benchmarks."""

    def write_campaign(self, rows: List[CampaignRow], path: str) -> List[str]:
        csv_path = Path(path)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        with csv_path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(REPORT_COLUMNS)
            for row in rows:
                writer.writerow([row.group, row.r, row.s, row.lam, row.outcome, row.method,
                                 row.found, row.candidates_tested, row.elapsed_ms])
        text_path = csv_path.with_suffix(".txt")
        text_path.write_text(render_table(rows), encoding="utf-8")
        return [str(csv_path), str(text_path)]

    def write_bench(self, record: BenchRecord, path: str) -> str:
        _atomic_write(Path(path), json.dumps(record.to_dict(), indent=2, sort_keys=True))
        return path


def render_table(rows: List[CampaignRow]) -> str:
    """Aligned text table with the campaign columns."""
    header = ["group", "(r,s)", "lambda", "outcome", "method", "found", "tested"]
    body = [[row.group, f"({row.r},{row.s})", str(row.lam), row.outcome, row.method,
             str(row.found), str(row.candidates_tested)] for row in rows]
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in [header] + body]
    return "\n".join(lines) + "\n"

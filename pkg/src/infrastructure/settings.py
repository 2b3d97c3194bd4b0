"""
Environment configuration for the near-factorization toolkit.
"""

import os
from dataclasses import dataclass
from typing import Optional


def _int_env(name: str) -> Optional[int]:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} environment variable must be an integer, got {value!r}")


@dataclass
class Settings:
    """Values read from the environment (after load_dotenv)."""
    workers: Optional[int] = None
    catalog_path: str = "results/catalog.jsonl"
    checkpoint_dir: str = "results/checkpoints"
    time_budget: float = 600.0
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        workers = _int_env("NEARFACT_WORKERS")
        if workers is not None and workers < 1:
            raise ValueError("NEARFACT_WORKERS environment variable must be at least 1")
        budget = os.getenv("NEARFACT_TIME_BUDGET")
        try:
            time_budget = float(budget) if budget else 600.0
        except ValueError:
            raise ValueError(f"NEARFACT_TIME_BUDGET environment variable must be a number, got {budget!r}")
        return cls(
            workers=workers,
            catalog_path=os.getenv("NEARFACT_CATALOG") or "results/catalog.jsonl",
            checkpoint_dir=os.getenv("NEARFACT_CHECKPOINT_DIR") or "results/checkpoints",
            time_budget=time_budget,
            log_level=(os.getenv("NEARFACT_LOG_LEVEL") or "INFO").upper(),
        )

    def resolve_workers(self, requested: Optional[int]) -> int:
        """NEARFACT_WORKERS wins over flags and config files."""
        if self.workers is not None:
            return self.workers
        return requested or 1

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cache import Cache
from .kv import KeyValueStore
from .kv.inmemory import InMemoryKV

OUTPUT_DIR_ENV = "STOPKIT_OUTPUT_DIR"


def _default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


@dataclass
class StopkitConfig:
    kv: KeyValueStore[str, Any] = field(default_factory=InMemoryKV)
    cache: Cache = field(default_factory=lambda: Cache(None))
    output_dir: Path = field(default_factory=_default_output_dir)
    workers: int = 1
    chunk_size: int = 16384
    max_iterations: int = 10_000

    def __post_init__(self):
        self.cache = Cache(self.kv) if self.cache.store is None else self.cache
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


_default: StopkitConfig | None = None


def default_config() -> StopkitConfig:
    """Returns the process-wide config, creating it on first use."""
    global _default
    if _default is None:
        _default = StopkitConfig()
    return _default

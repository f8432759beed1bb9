import threading
from collections import OrderedDict
from typing import Any

from . import KeyValueStore


def namespace_of(key: Any) -> str:
    """``"gm:12"`` belongs to ``"gm"``; keys without a prefix go to ``"default"``."""
    if isinstance(key, str) and ":" in key:
        return key.partition(":")[0]
    return "default"


class InMemoryKV(KeyValueStore[Any, Any]):
    """
    Thread-safe in-memory store. Entries live in one recency-ordered bucket
    per key namespace, and ``configure_lru`` caps a bucket's size.
    """

    def __init__(self) -> None:
        self._buckets: dict[str, OrderedDict[Any, Any]] = {}
        self._limits: dict[str, int | None] = {}
        self._lock = threading.RLock()

    def configure_lru(self, namespace: str, max_size: int | None = None) -> None:
        """Limits ``namespace`` to ``max_size`` entries; ``None`` lifts the limit."""
        if max_size is not None and max_size < 0:
            raise ValueError(f"max_size must be >= 0, got {max_size}")
        with self._lock:
            self._limits[namespace] = max_size
            self._trim(namespace)

    def _bucket(self, key: Any) -> OrderedDict[Any, Any] | None:
        return self._buckets.get(namespace_of(key))

    def _trim(self, namespace: str) -> None:
        limit = self._limits.get(namespace)
        bucket = self._buckets.get(namespace)
        if limit is None or bucket is None:
            return
        while len(bucket) > limit:
            bucket.popitem(last=False)

    def get(self, key: Any) -> Any | None:
        with self._lock:
            bucket = self._bucket(key)
            if bucket is None or key not in bucket:
                return None
            bucket.move_to_end(key)
            return bucket[key]

    def set(self, key: Any, value: Any) -> None:
        namespace = namespace_of(key)
        with self._lock:
            bucket = self._buckets.setdefault(namespace, OrderedDict())
            bucket[key] = value
            bucket.move_to_end(key)
            self._trim(namespace)

    def delete(self, key: Any) -> None:
        with self._lock:
            bucket = self._bucket(key)
            if bucket is not None:
                bucket.pop(key, None)

    def exists(self, key: Any) -> bool:
        with self._lock:
            bucket = self._bucket(key)
            return bucket is not None and key in bucket

    def clear(self) -> None:
        with self._lock:
            self._buckets.clear()

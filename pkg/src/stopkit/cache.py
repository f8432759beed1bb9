from typing import Any, Callable, Generic, Optional

from .kv import KT, VT, KeyValueStore


class Cache(Generic[KT, VT]):
    """
    A generic memo wrapper that uses a KeyValueStore as a backend.

    A cache built without a store is a no-op: lookups miss and writes are
    dropped, so every result is recomputed.
    """

    def __init__(self, store: Optional[KeyValueStore[KT, Any]]):
        self._store = store

    @property
    def store(self) -> Optional[KeyValueStore[KT, Any]]:
        return self._store

    def get(self, key: KT) -> VT | None:
        """Gets an item from the cache, returning None if it doesn't exist."""
        if self._store is not None:
            return self._store.get(key)
        return None

    def set(self, key: KT, value: VT) -> None:
        if self._store is not None:
            self._store.set(key, value)

    def delete(self, key: KT) -> None:
        """Deletes an item from the cache."""
        if self._store is not None:
            self._store.delete(key)

    def exists(self, key: KT) -> bool:
        if self._store is not None:
            return self._store.exists(key)
        return False

    def get_or_compute(self, key: KT, compute: Callable[[], VT]) -> VT:
        """
        Returns the cached value for ``key``, computing and storing it on a miss.
        """
        value = self.get(key)
        if value is not None:
            return value
        value = compute()
        self.set(key, value)
        return value

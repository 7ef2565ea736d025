"""LRU cache with TTL expiry, shared by the request handlers."""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from typing import Any, Callable


class TTLCache:
    """Thread-safe LRU cache whose entries expire after a fixed TTL.

    A TTL of 0 disables caching entirely. The lock is only held around the
    bookkeeping, never across I/O.
    """

    def __init__(self, capacity: int, ttl: float, clock: Callable[[], float] = time.monotonic):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        if ttl < 0:
            raise ValueError("ttl must be non-negative")
        self.capacity = capacity
        self.ttl = ttl
        self._clock = clock
        self._lock = threading.Lock()
        self._store: OrderedDict[str, tuple[float, Any]] = OrderedDict()

    def get(self, key: str) -> Any | None:
        if self.ttl == 0:
            return None
        with self._lock:
            entry = self._store.get(key)
            if entry is None:
                return None
            inserted_at, value = entry
            if self._clock() - inserted_at >= self.ttl:
                del self._store[key]
                return None
            self._store.move_to_end(key)
            return value

    def put(self, key: str, value: Any) -> None:
        if self.ttl == 0:
            return
        with self._lock:
            self._store[key] = (self._clock(), value)
            self._store.move_to_end(key)
            while len(self._store) > self.capacity:
                self._store.popitem(last=False)

    def __len__(self) -> int:
        with self._lock:
            return len(self._store)

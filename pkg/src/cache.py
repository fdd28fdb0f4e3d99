"""Per-evaluation memo of atomic channel images."""
from typing import Any, Callable, Dict, Hashable


class ChannelCache:
    """Caches the channel each atom maps to during one evaluation.

    Layers repeat the same atoms (``id1``, ``copy``, ``AND_2`` ...) many times;
    each distinct atom is built once. Not shared between evaluations.
    """

    def __init__(self):
        self.cache: Dict[Hashable, Any] = {}
        self.hits = 0
        self.misses = 0

    def get_or_build(self, key: Hashable, build: Callable[[], Any]) -> Any:
        if key in self.cache:
            self.hits += 1
            return self.cache[key]
        self.misses += 1
        channel = build()
        self.cache[key] = channel
        return channel

    def clear_all(self) -> None:
        self.cache.clear()
        self.hits = self.misses = 0

    def get_stats(self) -> dict:
        return {"size": len(self.cache), "hits": self.hits, "misses": self.misses}

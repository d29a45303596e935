import functools
import threading
from collections.abc import Callable

from cachetools import LRUCache, cached
from cachetools.keys import hashkey

_REGISTRY: dict[str, LRUCache] = {}


def memoize(maxsize: int = 100_000, key: Callable = hashkey, name: str | None = None):
    """
    A thread-safe LRU memoization decorator.

    Every table is registered so ``clear_caches`` and ``cache_info`` can see it.
    """

    def decorator(func):
        cache: LRUCache = LRUCache(maxsize=maxsize)
        _REGISTRY[name or f"{func.__module__}.{func.__qualname__}"] = cache
        wrapped = cached(cache, key=key, lock=threading.RLock())(func)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            return wrapped(*args, **kwargs)

        wrapper.cache = cache  # type: ignore[attr-defined]
        return wrapper

    return decorator


def cache_info() -> dict[str, int]:
    return {name: len(cache) for name, cache in sorted(_REGISTRY.items())}


def clear_caches() -> None:
    for cache in _REGISTRY.values():
        cache.clear()

"""Runtime knobs: the group-order guard and the numba switch."""

from __future__ import annotations

import contextlib
import contextvars
import os

DEFAULT_SIZE_LIMIT = 4096

_size_limit: contextvars.ContextVar[int] = contextvars.ContextVar(
    "weakmaps_size_limit", default=DEFAULT_SIZE_LIMIT
)


def get_size_limit() -> int:
    return _size_limit.get()


def set_size_limit(n: int) -> None:
    if n < 1:
        raise ValueError("size limit must be positive")
    _size_limit.set(int(n))


@contextlib.contextmanager
def size_limit(n: int):
    """Temporarily change the maximal order of any constructed group."""
    token = _size_limit.set(int(n))
    try:
        yield
    finally:
        _size_limit.reset(token)


def numba_requested() -> bool:
    flag = os.environ.get("WEAKMAPS_DISABLE_NUMBA", "").strip().lower()
    return flag not in {"1", "true", "yes", "on"}

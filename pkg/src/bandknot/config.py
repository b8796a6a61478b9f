"""Enumeration limits, scoped per context so concurrent callers stay independent."""

from __future__ import annotations

import contextlib
import contextvars

from .errors import CapExceeded

DEFAULT_CAP = 10**6
DEFAULT_ISOMETRY_CAP = 10**4
SQRT_MOD_HARD_LIMIT = 10**8

_cap: contextvars.ContextVar[int] = contextvars.ContextVar("enumeration_cap", default=DEFAULT_CAP)
_iso_cap: contextvars.ContextVar[int] = contextvars.ContextVar(
    "isometry_cap", default=DEFAULT_ISOMETRY_CAP)


def enumeration_cap() -> int:
    return _cap.get()


def isometry_cap() -> int:
    return _iso_cap.get()


@contextlib.contextmanager
def cap_limit(cap: int | None = None, isometry: int | None = None):
    """Temporarily override the enumeration (and optionally isometry) caps.

    >>> with cap_limit(1000):
    ...     enumeration_cap()
    1000
    """
    tokens = []
    if cap is not None:
        if cap < 1:
            raise ValueError("cap must be positive")
        tokens.append((_cap, _cap.set(cap)))
    if isometry is not None:
        tokens.append((_iso_cap, _iso_cap.set(isometry)))
    try:
        yield
    finally:
        for var, tok in reversed(tokens):
            var.reset(tok)


def check_cap(what: str, size: int, cap: int | None = None) -> None:
    limit = enumeration_cap() if cap is None else cap
    if size > limit:
        raise CapExceeded(what, size, limit)

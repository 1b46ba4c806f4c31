"""Runtime switches read from the environment.

``LISTPACK_NO_NUMBA=1`` forces the pure-Python kernels, ``LISTPACK_BUDGET``
caps enumeration sizes and ``LISTPACK_DEBUG=1`` turns on the expensive
post-hoc invariant checks in the constructive builders.
"""
import os

DEFAULT_BUDGET = 10**7


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


def budget() -> int:
    raw = os.environ.get("LISTPACK_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"LISTPACK_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("LISTPACK_BUDGET must be positive")
    return value


def numba_disabled() -> bool:
    return _flag("LISTPACK_NO_NUMBA")


def debug() -> bool:
    return _flag("LISTPACK_DEBUG")


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured budget."""

"""
Decorator registering verification checks.
"""

from functools import wraps
from typing import Callable, Sequence

from ..models import CheckKind, Suite
from .hooks import get_check_registry


def check(name: str, anchor: str, kind: CheckKind = CheckKind.EXACT,
          suites: Sequence[Suite] = (Suite.FAST, Suite.DEFAULT)):
    """Register the decorated function as a suite check.

    Args:
        name: The check name.
        anchor: The statement the check verifies.
        kind: The kind recorded when the check raises.
        suites: The suites running the check.

    Returns:
        A decorator function.
    """
    def decorator(func: Callable) -> Callable:
        func._check_info = {"name": name, "anchor": anchor, "kind": kind, "suites": tuple(suites)}

        @wraps(func)
        def wrapper(*args, **kwargs):
            return func(*args, **kwargs)

        get_check_registry().register(name, wrapper, anchor, kind, suites)
        return wrapper

    return decorator

"""
Registry of verification checks.
"""

import logging
import threading
from typing import Callable, Dict, List, Optional, Sequence

from ..models import CheckKind, Suite

logger = logging.getLogger("aperiodic_rs.verify.hooks")


class RegisteredCheck:
    """A check function together with its anchor and suite tags."""

    __slots__ = ("name", "func", "anchor", "kind", "suites")

    def __init__(self, name: str, func: Callable, anchor: str, kind: CheckKind, suites: Sequence[Suite]):
        self.name = name
        self.func = func
        self.anchor = anchor
        self.kind = kind
        self.suites = tuple(Suite(s) for s in suites)

    def __repr__(self) -> str:
        return f"RegisteredCheck({self.name}, suites={[s.value for s in self.suites]})"


class CheckRegistry:
    """Process-wide registry of named checks."""

    _instance = None
    _lock = threading.RLock()

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(CheckRegistry, cls).__new__(cls)
                cls._instance._checks = {}
        return cls._instance

    def register(self, name: str, func: Callable, anchor: str,
                 kind: CheckKind = CheckKind.EXACT, suites: Sequence[Suite] = (Suite.FAST, Suite.DEFAULT)) -> None:
        """Register a check.

        Args:
            name: Unique check name; report entries are ordered by it.
            func: Callable taking a SuiteProfile and returning one or more CheckEntry.
            anchor: The statement the check verifies.
            kind: Default kind for error entries.
            suites: Suites that run the check.
        """
        if not anchor:
            raise ValueError(f"check {name} needs an anchor")
        with self._lock:
            if name in self._checks:
                logger.warning(f"Check {name} already registered. Overwriting.")
            self._checks[name] = RegisteredCheck(name, func, anchor, kind, suites)

    def unregister(self, name: str) -> bool:
        with self._lock:
            return self._checks.pop(name, None) is not None

    def get(self, name: str) -> Optional[RegisteredCheck]:
        return self._checks.get(name)

    def checks_for(self, suite: Suite) -> List[RegisteredCheck]:
        """Checks tagged with suite, sorted by name."""
        with self._lock:
            selected = [c for c in self._checks.values() if Suite(suite) in c.suites]
        return sorted(selected, key=lambda c: c.name)

    def names(self) -> List[str]:
        with self._lock:
            return sorted(self._checks)

    def as_dict(self) -> Dict[str, RegisteredCheck]:
        with self._lock:
            return dict(self._checks)


def get_check_registry() -> CheckRegistry:
    return CheckRegistry()

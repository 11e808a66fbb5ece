from typing import Any, List, Optional


class ConfigurationError(ValueError):
    """An invalid configuration value; `key` names the offending setting."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class OracleTooLargeError(ValueError):
    """Exhaustive enumeration would exceed the assignment budget; use Monte Carlo instead."""


class EmptyDelaySampleError(ValueError):
    """A delay CDF was requested over zero completed packets."""


class SweepAbortedError(RuntimeError):
    """A run in a sweep failed; `partial_results` holds the runs that completed before it."""

    def __init__(self, message: str, partial_results: Optional[List[Any]] = None):
        super().__init__(message)
        self.partial_results = partial_results or []

from mbcsma.engine.randomness import RngState, SeededRandom
from mbcsma.engine.scheduler import (
    EventHandle,
    EventKind,
    EventScheduler,
    EventTrace,
    SimEvent,
    TraceRecord,
    ceil_ns,
    to_ns,
    to_seconds,
)

__all__ = [
    "EventHandle",
    "EventKind",
    "EventScheduler",
    "EventTrace",
    "RngState",
    "SeededRandom",
    "SimEvent",
    "TraceRecord",
    "ceil_ns",
    "to_ns",
    "to_seconds",
]

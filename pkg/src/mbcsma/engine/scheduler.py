import heapq
import math
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any, Callable, Iterator, List, Optional

from haystack import logging

logger = logging.getLogger(__name__)

NS_PER_SECOND = 1_000_000_000


def to_ns(seconds: float) -> int:
    """Convert a configured time value to the integer nanosecond clock."""
    return round(seconds * NS_PER_SECOND)


def ceil_ns(seconds: float) -> int:
    """Convert a computed duration to nanoseconds, rounding up to the next whole nanosecond."""
    # the inner round() drops float noise such as 3989.0000000000005
    return math.ceil(round(seconds * NS_PER_SECOND, 6))


def to_seconds(time_ns: int) -> float:
    return time_ns / NS_PER_SECOND


class EventKind(StrEnum):
    """Classes of occurrences the engine orders and dispatches.

    Attributes:
        TRANSMISSION_START: A frame leaves its source, or its first bit reaches the listeners
        TRANSMISSION_END: A frame's last bit leaves its source, or reaches the listeners
        TIMER_EXPIRY: DIFS/SIFS waits, CTS/ACK timeouts, NAV expiry, AP watchdog
        SLOT_BOUNDARY: The slot boundary at which a backoff counter reaches zero
    """

    TRANSMISSION_START = "TransmissionStart"
    TRANSMISSION_END = "TransmissionEnd"
    TIMER_EXPIRY = "TimerExpiry"
    SLOT_BOUNDARY = "SlotBoundary"


@dataclass(slots=True)
class SimEvent:
    """A timestamped, typed occurrence addressed to one node."""

    time: int  # ns
    kind: EventKind
    subject: str
    payload: Any = None
    detail: str = ""
    action: Optional[Callable[["SimEvent"], None]] = None


@dataclass(slots=True, eq=False)
class EventHandle:
    """Returned by `EventScheduler.schedule`; cancelling it keeps the event from being dispatched."""

    event: SimEvent
    sequence: int
    cancelled: bool = False
    dispatched: bool = False

    @property
    def active(self) -> bool:
        return not (self.cancelled or self.dispatched)


@dataclass(frozen=True, slots=True)
class TraceRecord:
    time_ns: int
    kind: str
    subject: str
    detail: str

    def to_line(self) -> str:
        return f"{self.time_ns},{self.kind},{self.subject},{self.detail}"


@dataclass
class EventTrace:
    """Dispatched events in dispatch order, serialized as `time_ns,kind,subject,detail` lines."""

    records: List[TraceRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    def extend(self, other: "EventTrace") -> None:
        self.records.extend(other.records)

    def dumps(self) -> str:
        return "".join(record.to_line() + "\n" for record in self.records)

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps())
        logger.info(
            "Wrote {count} trace records to {path}",
            count=len(self.records),
            path=str(path),
        )


class EventScheduler:
    """
    Pending-event queue ordered by (time, insertion sequence) plus the simulation clock.

    Events at identical times are dispatched in insertion order. Cancellation is lazy:
    a cancelled handle stays in the heap and is skipped when popped.

    ### Usage example
    ```python
    scheduler = EventScheduler(record_trace=True)
    handle = scheduler.schedule(SimEvent(time=5_000, kind=EventKind.TIMER_EXPIRY, subject="STA0"))
    scheduler.cancel(handle)
    trace = scheduler.run_until(1_000_000)
    assert len(trace) == 0
    ```
    """

    def __init__(self, record_trace: bool = False):
        """
        Create an empty scheduler at clock 0.

        :param record_trace: Keep a `TraceRecord` for every dispatched event
        """
        self.record_trace = record_trace
        self.clock = 0
        self._heap: List[tuple[int, int, EventHandle]] = []
        self._sequence = 0
        self._pending = 0
        self.dispatched_count = 0

    @property
    def pending(self) -> int:
        """Number of scheduled events that are neither cancelled nor dispatched."""
        return self._pending

    def schedule(self, event: SimEvent) -> EventHandle:
        """
        Insert an event in the pending queue.

        :param event: Event whose time must not be earlier than the clock
        :return: Handle that permits cancellation
        :raises ValueError: If the event lies in the past
        """
        if event.time < self.clock:
            raise ValueError(
                f"Cannot schedule {event.kind} for {event.subject} at {event.time} ns, "
                f"clock is already at {self.clock} ns"
            )
        handle = EventHandle(event=event, sequence=self._sequence)
        heapq.heappush(self._heap, (event.time, self._sequence, handle))
        self._sequence += 1
        self._pending += 1
        return handle

    def schedule_at(
        self,
        time: int,
        kind: EventKind,
        subject: str,
        action: Callable[[SimEvent], None],
        payload: Any = None,
        detail: str = "",
    ) -> EventHandle:
        return self.schedule(
            SimEvent(time=time, kind=kind, subject=subject, payload=payload, detail=detail, action=action)
        )

    def cancel(self, handle: Optional[EventHandle]) -> None:
        """Cancel a pending event; cancelling a dispatched or already cancelled handle is a no-op."""
        if handle is None or not handle.active:
            return
        handle.cancelled = True
        self._pending -= 1

    def run_until(self, t_end: int, stop: Optional[Callable[[], bool]] = None) -> EventTrace:
        """
        Dispatch every pending event with time <= t_end in (time, sequence) order.

        :param t_end: Horizon in nanoseconds, not earlier than the clock
        :param stop: Optional predicate checked after each dispatch; when it returns True the
            run ends early and the clock stays at the last dispatched event
        :return: Trace of the events dispatched by this call (empty unless `record_trace`)
        """
        if t_end < self.clock:
            raise ValueError(f"Horizon {t_end} ns lies before the clock ({self.clock} ns)")

        trace = EventTrace()
        heap = self._heap
        while heap and heap[0][0] <= t_end:
            _, _, handle = heapq.heappop(heap)
            if handle.cancelled:
                continue
            event = handle.event
            handle.dispatched = True
            self._pending -= 1
            self.clock = event.time
            self.dispatched_count += 1
            if self.record_trace:
                trace.records.append(TraceRecord(event.time, event.kind.value, event.subject, event.detail))
            if event.action is not None:
                event.action(event)
            if stop is not None and stop():
                return trace

        self.clock = t_end
        return trace

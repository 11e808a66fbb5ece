from collections import deque
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Deque, FrozenSet

from mbcsma.engine.randomness import SeededRandom
from mbcsma.errors import ConfigurationError
from mbcsma.phy.channel import BandPlan, ChannelState

DEFAULT_CW_MIN = 16
DEFAULT_CW_MAX = 1024


class StationPhase(StrEnum):
    IDLE_WAIT = "IdleWait"
    SENSING = "Sensing"
    BACKOFF = "Backoff"
    RTS_SENT = "RtsSent"
    AWAIT_CTS = "AwaitCts"
    TRANSMITTING = "Transmitting"
    AWAIT_ACK = "AwaitAck"
    DEFERRING = "Deferring"


class ContentionOutcome(StrEnum):
    """How a contention round ended for one station.

    Attributes:
        RTS_COLLIDED: The CTS named other decoded senders, so our RTS was lost
        GRANTED_AND_ACKED: We won the grant and our DATA was acknowledged
        DECODED_NOT_CHOSEN: Our RTS was decoded but another sender won
        CTS_TIMEOUT: No CTS arrived in time (total collision or virtual RTS collision)
        ACK_TIMEOUT: We sent DATA after a grant but no ACK came back
    """

    RTS_COLLIDED = "RtsCollided"
    GRANTED_AND_ACKED = "GrantedAndAcked"
    DECODED_NOT_CHOSEN = "DecodedNotChosen"
    CTS_TIMEOUT = "CtsTimeout"
    ACK_TIMEOUT = "AckTimeout"


@dataclass
class ContentionWindow:
    """Binary exponential contention window: cw stays in {cw_min * 2^k} and never exceeds cw_max."""

    cw_min: int = DEFAULT_CW_MIN
    cw_max: int = DEFAULT_CW_MAX
    cw: int = 0

    def __post_init__(self) -> None:
        if self.cw_min < 1:
            raise ConfigurationError(f"cw_min must be at least 1, got {self.cw_min}", key="cw_min")
        if self.cw_max < self.cw_min:
            raise ConfigurationError(
                f"cw_max ({self.cw_max}) must not be below cw_min ({self.cw_min})", key="cw_max"
            )
        ratio, remainder = divmod(self.cw_max, self.cw_min)
        if remainder or ratio & (ratio - 1):
            raise ConfigurationError(
                f"cw_max ({self.cw_max}) must be cw_min ({self.cw_min}) times a power of two", key="cw_max"
            )
        if self.cw == 0:
            self.cw = self.cw_min

    def double(self) -> None:
        self.cw = min(2 * self.cw, self.cw_max)

    def reset(self) -> None:
        self.cw = self.cw_min

    @property
    def stage(self) -> int:
        """Number of doublings applied since the last reset."""
        return (self.cw // self.cw_min).bit_length() - 1


@dataclass
class StationState:
    """
    MAC state of one station.

    `queue` holds, per packet, the time its station began contending for it (the head
    entry is the packet in service). `nav_until` is the virtual carrier sense deadline.
    Times are integer nanoseconds.
    """

    id: str
    destination: str
    cw: ContentionWindow = field(default_factory=ContentionWindow)
    rts_band_span: int = 1
    phase: StationPhase = StationPhase.IDLE_WAIT
    backoff_counter: int = 0
    nav_until: int = 0
    queue: Deque[int] = field(default_factory=deque)

    @property
    def has_packet(self) -> bool:
        return bool(self.queue)


def draw_backoff(station: StationState, rng: SeededRandom) -> StationState:
    """Draw a fresh backoff counter from [0, CW-1] and enter Backoff."""
    station.backoff_counter = rng.draw_uniform_int(0, station.cw.cw - 1)
    station.phase = StationPhase.BACKOFF
    return station


def backoff_tick(station: StationState, channel: ChannelState) -> StationState:
    """
    Apply one slot of backoff countdown.

    The caller only ticks slots that follow an idle DIFS. An idle slot decrements the
    counter by one; a busy slot leaves it frozen.
    """
    if station.phase is not StationPhase.BACKOFF:
        raise ValueError(f"Station {station.id} is not in Backoff (phase {station.phase})")
    if channel is ChannelState.IDLE and station.backoff_counter > 0:
        station.backoff_counter -= 1
    return station


def idle_slots_elapsed(countdown_start: int, t: int, slot: int) -> int:
    """Whole slots completed between `countdown_start` (end of the idle DIFS) and `t`."""
    if t <= countdown_start:
        return 0
    return (t - countdown_start) // slot


def freeze_backoff(station: StationState, countdown_start: int, t: int, slot: int) -> StationState:
    """Tick every idle slot completed since the countdown started, then freeze at `t`."""
    for _ in range(min(idle_slots_elapsed(countdown_start, t, slot), station.backoff_counter)):
        backoff_tick(station, ChannelState.IDLE)
    return station


def select_rts_bands(station: StationState, plan: BandPlan, rng: SeededRandom) -> FrozenSet[int]:
    """
    Bands for the next RTS: one uniformly chosen contiguous block of `rts_band_span` bands.

    :raises ConfigurationError: If the span does not fit the band plan
    """
    if station.backoff_counter != 0:
        raise ValueError(f"Station {station.id} still has {station.backoff_counter} backoff slots")
    blocks = plan.contiguous_blocks(station.rts_band_span)
    return rng.choice(blocks)


def on_contention_outcome(
    station: StationState, outcome: ContentionOutcome, rng: SeededRandom
) -> StationState:
    """
    Adapt the contention window after a contention round and prepare the next one.

    Collisions and timeouts double the window (clamped to cw_max) and keep the packet.
    A successful RTS, whether granted or only decoded, resets it to cw_min. Every outcome
    that keeps the packet draws a new backoff. A granted and acknowledged packet leaves the
    queue and the station returns to IdleWait without drawing: the next packet goes through
    a fresh contention start.
    """
    if outcome in (ContentionOutcome.RTS_COLLIDED, ContentionOutcome.CTS_TIMEOUT, ContentionOutcome.ACK_TIMEOUT):
        station.cw.double()
    else:
        station.cw.reset()

    if outcome is ContentionOutcome.GRANTED_AND_ACKED:
        station.queue.popleft()
        station.backoff_counter = 0
        station.phase = StationPhase.IDLE_WAIT
        return station
    return draw_backoff(station, rng)

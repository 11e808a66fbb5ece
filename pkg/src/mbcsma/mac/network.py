import itertools
import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from haystack import logging

from mbcsma.engine.randomness import SeededRandom
from mbcsma.engine.scheduler import EventHandle, EventKind, EventScheduler, EventTrace, SimEvent
from mbcsma.mac.access_point import ApDecision, ApOutcome, ap_resolve_rts
from mbcsma.mac.contention import (
    ContentionOutcome,
    ContentionWindow,
    StationPhase,
    StationState,
    draw_backoff,
    freeze_backoff,
    on_contention_outcome,
    select_rts_bands,
)
from mbcsma.metrics.collector import MetricsCollector, RunMetrics
from mbcsma.phy.channel import (
    BandPlan,
    ChannelState,
    Frame,
    Medium,
    Reception,
    Role,
    Topology,
    Transmission,
    band_occupancy,
)
from mbcsma.phy.params import FrameKind, FrameTimings

logger = logging.getLogger(__name__)

_FOREVER = 2**62


class TrafficMode(StrEnum):
    """
    How stations get packets.

    Attributes:
        SATURATION: Every station always has a packet waiting
        SINGLE_PACKET: Every station gets one packet when the run starts
    """

    SATURATION = "Saturation"
    SINGLE_PACKET = "SinglePacket"


class ReceiverPhase(StrEnum):
    LISTENING = "Listening"
    RESPONDING = "Responding"
    AWAIT_DATA = "AwaitData"
    RECEIVING_DATA = "ReceivingData"
    ACKING = "Acking"


@dataclass(eq=False)
class ActiveReception:
    reception: Reception
    corrupted: bool = False

    @property
    def frame(self) -> Frame:
        return self.reception.frame


@dataclass(eq=False)
class NodeView:
    """The frames one node is receiving and whether it transmits itself."""

    transmitting: bool = False
    receptions: List[ActiveReception] = field(default_factory=list)


@dataclass(eq=False)
class StationRuntime:
    state: StationState
    view: NodeView = field(default_factory=NodeView)
    timer: Optional[EventHandle] = None
    countdown_at: Optional[int] = None
    countdown_start: int = 0
    nav_check_at: Optional[int] = None
    idle_since: int = 0
    attempt_counted: bool = False

    @property
    def id(self) -> str:
        return self.state.id


@dataclass(eq=False)
class ReceiverRuntime:
    """Access point state. `nav_until` holds back grants while an overheard exchange of another pair runs."""

    id: str
    view: NodeView = field(default_factory=NodeView)
    phase: ReceiverPhase = ReceiverPhase.LISTENING
    window: List[ActiveReception] = field(default_factory=list)
    granted: Optional[str] = None
    watchdog: Optional[EventHandle] = None
    nav_until: int = 0


@dataclass(eq=False)
class _Bucket:
    handle: EventHandle
    members: Dict[str, StationRuntime] = field(default_factory=dict)


NodeRuntime = Union[StationRuntime, ReceiverRuntime]


@dataclass
class NetworkResult:
    metrics: RunMetrics
    trace: EventTrace
    decisions: List[Tuple[int, str, ApDecision]]
    end_time: int


class Network:
    """
    Event-driven simulation of RTS/CTS contention over a multiband medium.

    Stations count down their backoff in slots that follow an idle DIFS, freeze it while
    the medium is busy (physically or through NAV) and send their RTS on a random block of
    bands. Receivers collect every RTS that starts while a reception window is open and,
    when the window closes, grant one decoded sender with a CTS on all bands.

    After an acknowledged packet a backlogged station starts over as on a fresh arrival:
    it sends after an idle DIFS and draws a backoff only if the medium is busy. With
    `post_backoff` it draws a backoff right away instead.

    Stations whose countdowns or NAV deadlines fall on the same instant share one scheduled
    event, so the event count per exchange stays flat as the cell grows.

    ### Usage example
    ```python
    network = Network(topology, BandPlan(4), PhyParams().timings(), SeededRandom(1), destinations)
    result = network.run(target_exchanges=1_000)
    print(result.metrics.acked_packets)
    ```
    """

    def __init__(
        self,
        topology: Topology,
        plan: BandPlan,
        timings: FrameTimings,
        rng: SeededRandom,
        destinations: Mapping[str, str],
        spans: Optional[Mapping[str, int]] = None,
        cw_min: int = 16,
        cw_max: int = 1024,
        traffic: TrafficMode = TrafficMode.SATURATION,
        nav_enabled: bool = True,
        post_backoff: bool = False,
        collector: Optional[MetricsCollector] = None,
        payload_bits: int = 8184,
        record_trace: bool = False,
        record_decisions: bool = False,
    ):
        self.topology = topology
        self.plan = plan
        self.timings = timings
        self.rng = rng
        self.traffic = traffic
        self.nav_enabled = nav_enabled
        self.post_backoff = post_backoff
        self.collector = collector or MetricsCollector(payload_bits=payload_bits)
        self.scheduler = EventScheduler(record_trace=record_trace)
        self.medium = Medium(topology, timings)
        self.record_decisions = record_decisions
        self.decisions: List[Tuple[int, str, ApDecision]] = []

        spans = spans or {}
        self.stations: Dict[str, StationRuntime] = {}
        self.receivers: Dict[str, ReceiverRuntime] = {}
        for name, role in topology.nodes:
            if role is Role.STATION:
                self.stations[name] = StationRuntime(
                    state=StationState(
                        id=name,
                        destination=destinations[name],
                        cw=ContentionWindow(cw_min=cw_min, cw_max=cw_max),
                        rts_band_span=spans.get(name, 1),
                    )
                )
            else:
                self.receivers[name] = ReceiverRuntime(id=name)
        for name, runtime in self.stations.items():
            # validates the span against the band plan up front
            plan.contiguous_blocks(runtime.state.rts_band_span)
            if runtime.state.destination not in self.receivers:
                raise ValueError(f"Station {name} addresses {runtime.state.destination}, which is not an access point")

        self._countdowns: Dict[int, _Bucket] = {}
        self._nav_checks: Dict[int, _Bucket] = {}
        self._last_activity = 0
        self._frame_ids = itertools.count()

    def node(self, name: str) -> NodeRuntime:
        return self.stations.get(name) or self.receivers[name]

    # ------------------------------------------------------------------ run control

    def run(
        self,
        target_exchanges: Optional[int] = None,
        until: Optional[int] = None,
        arrivals: Optional[Mapping[str, int]] = None,
    ) -> NetworkResult:
        """
        Start traffic and dispatch events until enough exchanges are measured or the horizon passes.

        :param target_exchanges: Completed exchanges to measure after warm-up
        :param until: Horizon in nanoseconds
        :param arrivals: Time of the first packet per station; by default every station gets one at time zero
        """
        if target_exchanges is None and until is None:
            raise ValueError("Either target_exchanges or until must be given")
        if arrivals is None:
            arrivals = dict.fromkeys(self.stations, 0)
        for name, t in arrivals.items():
            self.schedule_arrival(name, t)

        collector = self.collector
        stop = None
        if target_exchanges is not None:
            stop = lambda: collector.measured_exchanges >= target_exchanges  # noqa: E731
        trace = self.scheduler.run_until(until if until is not None else _FOREVER, stop=stop)
        end = self.scheduler.clock
        if end == _FOREVER:
            # ran dry without a horizon
            end = self._last_activity
        metrics = collector.finish(end)
        logger.debug(
            "Run ended at {end} ns after {events} events with {acked} acknowledged packets",
            end=end,
            events=self.scheduler.dispatched_count,
            acked=metrics.acked_packets,
        )
        return NetworkResult(metrics=metrics, trace=trace, decisions=self.decisions, end_time=end)

    # ------------------------------------------------------------------ station side

    def schedule_arrival(self, station: str, t: int) -> EventHandle:
        """Hand `station` a new packet at `t`."""
        if station not in self.stations:
            raise ValueError(f"Unknown station {station}")
        return self.scheduler.schedule_at(t, EventKind.TIMER_EXPIRY, station, self._on_arrival, detail="arrival")

    def _on_arrival(self, event: SimEvent) -> None:
        self.start_contention(self.stations[event.subject], event.time)

    def start_contention(self, station: StationRuntime, t: int) -> None:
        """Enqueue a packet; send after an idle DIFS, or draw a backoff if the medium is busy."""
        state = station.state
        state.queue.append(t)
        if state.phase is not StationPhase.IDLE_WAIT:
            return
        if self._is_idle(station, t):
            state.phase = StationPhase.SENSING
            station.timer = self.scheduler.schedule_at(
                t + self.timings.difs, EventKind.TIMER_EXPIRY, state.id, self._on_difs, detail="difs"
            )
        else:
            draw_backoff(state, self.rng)

    def _on_difs(self, event: SimEvent) -> None:
        station = self.stations[event.subject]
        station.timer = None
        station.state.backoff_counter = 0
        self._send_rts(station, event.time)

    def _send_rts(self, station: StationRuntime, t: int) -> None:
        state = station.state
        frame = self._frame(
            kind=FrameKind.RTS,
            source=state.id,
            destination=state.destination,
            bands=select_rts_bands(state, self.plan, self.rng),
            duration=self.timings.rts,
            nav_duration=self.timings.rts_nav,
        )
        state.phase = StationPhase.RTS_SENT
        station.attempt_counted = self.collector.rts_sent()
        self._transmit(frame, t)

    def _frame(self, **fields: Any) -> Frame:
        return Frame(frame_id=next(self._frame_ids), **fields)

    def _is_idle(self, station: StationRuntime, t: int) -> bool:
        """Physical and virtual carrier sense both report idle."""
        return self.medium.carrier_sense(station.id, t) is ChannelState.IDLE and t >= station.state.nav_until

    def _station_busy(self, station: StationRuntime, t: int) -> None:
        state = station.state
        if state.phase is StationPhase.BACKOFF:
            self._cancel_countdown(station)
            freeze_backoff(state, station.countdown_start, t, self.timings.slot)
        elif state.phase is StationPhase.SENSING:
            self.scheduler.cancel(station.timer)
            station.timer = None
            draw_backoff(state, self.rng)

    def _station_idle(self, station: StationRuntime, t: int) -> None:
        station.idle_since = t
        if station.state.phase is StationPhase.DEFERRING:
            station.state.phase = StationPhase.BACKOFF
        if station.state.phase is StationPhase.BACKOFF:
            self._resume_countdown(station, t)

    def _resume_countdown(self, station: StationRuntime, t: int) -> None:
        """Schedule the end of the countdown on the slot grid that starts one DIFS after the medium went idle."""
        slot = self.timings.slot
        start = station.idle_since + self.timings.difs
        if t > start:
            start += math.ceil((t - start) / slot) * slot
        self._cancel_countdown(station)
        station.countdown_start = start
        at = start + station.state.backoff_counter * slot
        self._bucket(self._countdowns, at, EventKind.SLOT_BOUNDARY, self._on_countdown, "countdown").members[
            station.state.id
        ] = station
        station.countdown_at = at

    def _cancel_countdown(self, station: StationRuntime) -> None:
        if station.countdown_at is not None:
            bucket = self._countdowns[station.countdown_at]
            del bucket.members[station.state.id]
            if not bucket.members:
                self.scheduler.cancel(bucket.handle)
                del self._countdowns[station.countdown_at]
            station.countdown_at = None

    def _on_countdown(self, event: SimEvent) -> None:
        bucket = self._countdowns.pop(event.time)
        for station in bucket.members.values():
            station.countdown_at = None
            station.state.backoff_counter = 0
            self._send_rts(station, event.time)

    def apply_nav(self, station: StationRuntime, nav_duration: int, t: int) -> None:
        """Extend the virtual carrier sense deadline of a station that overheard an RTS or CTS."""
        if not self.nav_enabled:
            return
        state = station.state
        until = t + nav_duration
        if until <= state.nav_until:
            return
        was_idle = self._is_idle(station, t)
        state.nav_until = until
        if was_idle:
            self._station_busy(station, t)
        if state.phase is StationPhase.BACKOFF:
            state.phase = StationPhase.DEFERRING
        if self.medium.carrier_sense(station.id, t) is ChannelState.IDLE:
            self._arm_nav_check(station)

    def _arm_nav_check(self, station: StationRuntime) -> None:
        if station.nav_check_at is not None:
            return
        at = station.state.nav_until
        self._bucket(self._nav_checks, at, EventKind.TIMER_EXPIRY, self._on_nav_check, "nav").members[
            station.state.id
        ] = station
        station.nav_check_at = at

    def _on_nav_check(self, event: SimEvent) -> None:
        bucket = self._nav_checks.pop(event.time)
        for station in bucket.members.values():
            station.nav_check_at = None
            if self.medium.carrier_sense(station.id, event.time) is ChannelState.BUSY:
                continue
            if event.time >= station.state.nav_until:
                self._station_idle(station, event.time)
            else:
                self._arm_nav_check(station)

    def _bucket(
        self, buckets: Dict[int, _Bucket], at: int, kind: EventKind, action: Callable[[SimEvent], None], detail: str
    ) -> _Bucket:
        """The shared event for every station due at `at`, scheduled on first use."""
        bucket = buckets.get(at)
        if bucket is None:
            handle = self.scheduler.schedule_at(at, kind, "*", action, detail=detail)
            bucket = buckets[at] = _Bucket(handle=handle)
        return bucket

    def _conclude(self, station: StationRuntime, outcome: ContentionOutcome, t: int) -> None:
        self.scheduler.cancel(station.timer)
        station.timer = None
        if outcome in (ContentionOutcome.RTS_COLLIDED, ContentionOutcome.CTS_TIMEOUT):
            self.collector.rts_failed(station.attempt_counted)
        on_contention_outcome(station.state, outcome, self.rng)
        if station.state.phase is StationPhase.BACKOFF and self._is_idle(station, t):
            self._resume_countdown(station, t)

    def _on_cts_timeout(self, event: SimEvent) -> None:
        station = self.stations[event.subject]
        station.timer = None
        self._conclude(station, ContentionOutcome.CTS_TIMEOUT, event.time)

    def _on_ack_timeout(self, event: SimEvent) -> None:
        station = self.stations[event.subject]
        station.timer = None
        self._conclude(station, ContentionOutcome.ACK_TIMEOUT, event.time)

    def _station_received(self, station: StationRuntime, active: ActiveReception, t: int) -> None:
        frame = active.frame
        state = station.state
        if active.corrupted:
            return
        if frame.kind is FrameKind.RTS:
            self.apply_nav(station, frame.nav_duration, t)
        elif frame.kind is FrameKind.CTS:
            if frame.source == state.destination and state.phase is StationPhase.AWAIT_CTS:
                if frame.destination == state.id:
                    self.scheduler.cancel(station.timer)
                    station.timer = None
                    state.phase = StationPhase.TRANSMITTING
                    self.scheduler.schedule_at(
                        t + self.timings.sifs, EventKind.TIMER_EXPIRY, state.id, self._on_send_data, detail="sifs"
                    )
                    return
                decoded = state.id in frame.decoded_sources
                outcome = ContentionOutcome.DECODED_NOT_CHOSEN if decoded else ContentionOutcome.RTS_COLLIDED
                self._conclude(station, outcome, t)
            if frame.destination != state.id:
                self.apply_nav(station, frame.nav_duration, t)
        elif frame.kind is FrameKind.ACK:
            if frame.destination == state.id and state.phase is StationPhase.AWAIT_ACK:
                self.collector.exchange_completed(state.id, t - state.queue[0], t)
                self._conclude(station, ContentionOutcome.GRANTED_AND_ACKED, t)
                if self.traffic is not TrafficMode.SATURATION:
                    return
                if self.post_backoff:
                    # the countdown resumes once the ACK reception has ended
                    state.queue.append(t)
                    draw_backoff(state, self.rng)
                else:
                    self.schedule_arrival(state.id, t)

    def _on_send_data(self, event: SimEvent) -> None:
        state = self.stations[event.subject].state
        frame = self._frame(
            kind=FrameKind.DATA,
            source=state.id,
            destination=state.destination,
            bands=self.plan.bands,
            duration=self.timings.data,
        )
        self._transmit(frame, event.time)

    # ------------------------------------------------------------------ receiver side

    def _receiver_reception_started(self, receiver: ReceiverRuntime, active: ActiveReception) -> None:
        frame = active.frame
        if receiver.phase is ReceiverPhase.LISTENING:
            receiver.window.append(active)
        elif (
            receiver.phase is ReceiverPhase.AWAIT_DATA
            and frame.kind is FrameKind.DATA
            and frame.source == receiver.granted
        ):
            self.scheduler.cancel(receiver.watchdog)
            receiver.watchdog = None
            receiver.phase = ReceiverPhase.RECEIVING_DATA

    def _receiver_received(self, receiver: ReceiverRuntime, active: ActiveReception, t: int) -> None:
        frame = active.frame
        if frame.kind in (FrameKind.RTS, FrameKind.CTS):
            if self.nav_enabled and not active.corrupted and frame.destination != receiver.id:
                receiver.nav_until = max(receiver.nav_until, t + frame.nav_duration)
            return
        if frame.kind is not FrameKind.DATA or frame.destination != receiver.id:
            return
        if active.corrupted:
            self.collector.data_collided()
            logger.debug("DATA from {source} corrupted at {receiver}", source=frame.source, receiver=receiver.id)
            if receiver.phase is ReceiverPhase.RECEIVING_DATA and frame.source == receiver.granted:
                receiver.phase = ReceiverPhase.LISTENING
                receiver.granted = None
            return
        if receiver.phase is ReceiverPhase.RECEIVING_DATA and frame.source == receiver.granted:
            receiver.phase = ReceiverPhase.ACKING
            self.scheduler.schedule_at(
                t + self.timings.sifs,
                EventKind.TIMER_EXPIRY,
                receiver.id,
                self._on_send_ack,
                payload=frame.source,
                detail="sifs",
            )

    def _resolve_window(self, receiver: ReceiverRuntime, t: int) -> None:
        window, receiver.window = receiver.window, []
        decision = ap_resolve_rts(band_occupancy(a.reception for a in window), self.rng, receiver=receiver.id)
        if decision.outcome is ApOutcome.GRANT and t < receiver.nav_until:
            logger.debug(
                "{receiver} holds back its grant to {winner} until {nav_until} ns",
                receiver=receiver.id,
                winner=decision.winner,
                nav_until=receiver.nav_until,
            )
            decision = ApDecision(outcome=ApOutcome.NAV_DEFERRED, decoded=decision.decoded)
        n_rts = sum(1 for a in window if a.frame.kind is FrameKind.RTS)
        self.collector.round_resolved(n_rts, len(decision.decoded), decision.outcome.value)
        if self.record_decisions:
            self.decisions.append((t, receiver.id, decision))
        if decision.outcome is ApOutcome.GRANT and decision.winner is not None:
            self.run_exchange(receiver.id, decision.winner, t, decision.decoded_sources)

    def run_exchange(self, receiver_id: str, winner: str, t_grant: int, decoded_sources: Sequence[str] = ()) -> None:
        """
        Answer a granted RTS window: CTS on all bands one SIFS after `t_grant`. The DATA and
        ACK follow from the CTS and DATA receptions, each one SIFS later.
        """
        receiver = self.receivers[receiver_id]
        receiver.phase = ReceiverPhase.RESPONDING
        receiver.granted = winner
        cts = self._frame(
            kind=FrameKind.CTS,
            source=receiver_id,
            destination=winner,
            bands=self.plan.bands,
            duration=self.timings.cts,
            nav_duration=self.timings.cts_nav,
            decoded_sources=frozenset(decoded_sources),
        )
        self.scheduler.schedule_at(
            t_grant + self.timings.sifs, EventKind.TIMER_EXPIRY, receiver_id, self._on_send_cts, payload=cts, detail="sifs"
        )

    def _on_send_cts(self, event: SimEvent) -> None:
        self._transmit(event.payload, event.time)

    def _on_send_ack(self, event: SimEvent) -> None:
        frame = self._frame(
            kind=FrameKind.ACK,
            source=event.subject,
            destination=event.payload,
            bands=self.plan.bands,
            duration=self.timings.ack,
        )
        self._transmit(frame, event.time)

    def _on_watchdog(self, event: SimEvent) -> None:
        receiver = self.receivers[event.subject]
        receiver.watchdog = None
        logger.debug("No DATA from {station} at {receiver}", station=receiver.granted, receiver=receiver.id)
        receiver.phase = ReceiverPhase.LISTENING
        receiver.granted = None

    # ------------------------------------------------------------------ medium

    def _transmit(self, frame: Frame, t: int) -> None:
        self.scheduler.schedule_at(
            t, EventKind.TRANSMISSION_START, frame.source, self._on_tx_start, payload=frame, detail=f"tx {frame.describe()}"
        )

    def _on_tx_start(self, event: SimEvent) -> None:
        frame: Frame = event.payload
        t = event.time
        source = self.node(frame.source)
        for active in source.view.receptions:
            active.corrupted = True
        source.view.transmitting = True
        self._busy_begin(source, t)
        transmission = self.medium.begin(frame, t)
        prop = self.timings.propagation
        self.scheduler.schedule_at(
            t + frame.duration, EventKind.TRANSMISSION_END, frame.source, self._on_tx_end, payload=frame,
            detail=f"tx {frame.describe()}",
        )
        if transmission.receptions:
            self.scheduler.schedule_at(
                t + prop, EventKind.TRANSMISSION_START, frame.source, self._on_rx_start, payload=transmission,
                detail=f"rx {frame.describe()}",
            )
        else:
            self.medium.finish(transmission)

    def _on_tx_end(self, event: SimEvent) -> None:
        frame: Frame = event.payload
        t = event.time
        self._last_activity = t
        source = self.node(frame.source)
        source.view.transmitting = False
        if isinstance(source, StationRuntime):
            if frame.kind is FrameKind.RTS:
                source.state.phase = StationPhase.AWAIT_CTS
                source.timer = self.scheduler.schedule_at(
                    t + self.timings.cts_timeout, EventKind.TIMER_EXPIRY, frame.source, self._on_cts_timeout,
                    detail="cts-timeout",
                )
            elif frame.kind is FrameKind.DATA:
                source.state.phase = StationPhase.AWAIT_ACK
                source.timer = self.scheduler.schedule_at(
                    t + self.timings.ack_timeout, EventKind.TIMER_EXPIRY, frame.source, self._on_ack_timeout,
                    detail="ack-timeout",
                )
        elif frame.kind is FrameKind.CTS:
            source.phase = ReceiverPhase.AWAIT_DATA
            source.watchdog = self.scheduler.schedule_at(
                t + self.timings.data_watchdog, EventKind.TIMER_EXPIRY, frame.source, self._on_watchdog,
                detail="data-watchdog",
            )
        elif frame.kind is FrameKind.ACK:
            source.phase = ReceiverPhase.LISTENING
            source.granted = None
        self._busy_end(source, t)
        if isinstance(source, ReceiverRuntime):
            self._maybe_resolve(source, t)

    def _on_rx_start(self, event: SimEvent) -> None:
        transmission: Transmission = event.payload
        t = event.time
        started: List[Tuple[NodeRuntime, ActiveReception]] = []
        for reception in transmission.receptions:
            node = self.node(reception.listener)
            active = ActiveReception(reception=reception, corrupted=node.view.transmitting)
            for ongoing in node.view.receptions:
                if ongoing.frame.bands & active.frame.bands:
                    ongoing.corrupted = True
                    active.corrupted = True
                    if ongoing.frame.kind is FrameKind.CTS and active.frame.kind is FrameKind.CTS:
                        self.collector.cts_collided()
            node.view.receptions.append(active)
            started.append((node, active))
            self._busy_begin(node, t)
            if isinstance(node, ReceiverRuntime):
                self._receiver_reception_started(node, active)
        self.scheduler.schedule_at(
            t + transmission.frame.duration, EventKind.TRANSMISSION_END, transmission.frame.source, self._on_rx_end,
            payload=(transmission, started), detail=f"rx {transmission.frame.describe()}",
        )

    def _on_rx_end(self, event: SimEvent) -> None:
        transmission, started = event.payload
        t = event.time
        self._last_activity = t
        for node, active in started:
            node.view.receptions.remove(active)
            if isinstance(node, StationRuntime):
                self._station_received(node, active, t)
            else:
                self._receiver_received(node, active, t)
            self._busy_end(node, t)
            if isinstance(node, ReceiverRuntime):
                self._maybe_resolve(node, t)
        self.medium.finish(transmission)

    def _maybe_resolve(self, receiver: ReceiverRuntime, t: int) -> None:
        if receiver.phase is ReceiverPhase.LISTENING and receiver.window and not receiver.view.receptions:
            self._resolve_window(receiver, t)

    def _busy_begin(self, node: NodeRuntime, t: int) -> None:
        was_idle = isinstance(node, StationRuntime) and self._is_idle(node, t)
        self.medium.occupy(node.id, t)
        if was_idle:
            self._station_busy(node, t)

    def _busy_end(self, node: NodeRuntime, t: int) -> None:
        if not self.medium.release(node.id, t) or isinstance(node, ReceiverRuntime):
            return
        if t >= node.state.nav_until:
            self._station_idle(node, t)
        else:
            self._arm_nav_check(node)

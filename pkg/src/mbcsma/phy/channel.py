from collections import defaultdict
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from mbcsma.errors import ConfigurationError
from mbcsma.phy.params import FrameKind, FrameTimings


class Role(StrEnum):
    STATION = "Station"
    ACCESS_POINT = "AccessPoint"


class ChannelState(StrEnum):
    IDLE = "Idle"
    BUSY = "Busy"


@dataclass(frozen=True)
class BandPlan:
    """A spectrum divided into `n_bands` orthogonal bands, identified 0..N-1."""

    n_bands: int

    def __post_init__(self) -> None:
        if self.n_bands < 1:
            raise ConfigurationError(f"n_bands must be at least 1, got {self.n_bands}", key="bands")

    @property
    def bands(self) -> FrozenSet[int]:
        return frozenset(range(self.n_bands))

    def contiguous_blocks(self, span: int) -> List[FrozenSet[int]]:
        """All N-k+1 contiguous blocks of `span` bands, lowest first."""
        if not 1 <= span <= self.n_bands:
            raise ConfigurationError(
                f"RTS band span {span} does not fit in {self.n_bands} bands", key="spans"
            )
        return [frozenset(range(first, first + span)) for first in range(self.n_bands - span + 1)]


@dataclass(frozen=True, eq=False)
class Frame:
    """
    One RTS, CTS, DATA or ACK on the medium.

    `destination` is the identity field carried by every frame. A CTS also names the set
    of RTS senders the receiver decoded, so contenders can tell a lost RTS from one that
    was decoded but not chosen. Frames compare by identity.
    """

    kind: FrameKind
    source: str
    destination: str
    bands: FrozenSet[int]
    duration: int  # ns
    nav_duration: int = 0  # ns, RTS/CTS only
    decoded_sources: FrozenSet[str] = frozenset()
    frame_id: int = 0

    def describe(self) -> str:
        bands = ";".join(str(b) for b in sorted(self.bands))
        return f"{self.kind}>{self.destination}@{bands}"


@dataclass(frozen=True)
class Topology:
    """
    Nodes with their roles plus the directed `hears` relation: `(a, b)` in `edges` means a hears b.

    Listener lists follow node declaration order so that dispatch stays deterministic.
    """

    nodes: Tuple[Tuple[str, Role], ...]
    edges: FrozenSet[Tuple[str, str]]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.nodes]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"Duplicate node identifiers in {names}", key="topology")
        known = set(names)
        for listener, source in self.edges:
            if listener not in known or source not in known:
                raise ConfigurationError(f"Edge {listener}<-{source} names an unknown node", key="topology")
            if listener == source:
                raise ConfigurationError(f"Node {listener} cannot hear itself", key="topology")

    @classmethod
    def fully_connected(cls, nodes: Sequence[Tuple[str, Role]]) -> "Topology":
        names = [name for name, _ in nodes]
        edges = frozenset((a, b) for a in names for b in names if a != b)
        return cls(nodes=tuple(nodes), edges=edges)

    @classmethod
    def from_links(cls, nodes: Sequence[Tuple[str, Role]], links: Iterable[Tuple[str, str]]) -> "Topology":
        """Build a topology from bidirectional links."""
        edges = set()
        for a, b in links:
            edges.add((a, b))
            edges.add((b, a))
        return cls(nodes=tuple(nodes), edges=frozenset(edges))

    @cached_property
    def roles(self) -> Dict[str, Role]:
        return dict(self.nodes)

    @cached_property
    def names(self) -> List[str]:
        return [name for name, _ in self.nodes]

    @property
    def stations(self) -> List[str]:
        return [name for name, role in self.nodes if role is Role.STATION]

    @property
    def access_points(self) -> List[str]:
        return [name for name, role in self.nodes if role is Role.ACCESS_POINT]

    def hears(self, listener: str, source: str) -> bool:
        return (listener, source) in self.edges

    @cached_property
    def _listeners(self) -> Dict[str, List[str]]:
        return {
            source: [name for name in self.names if (name, source) in self.edges] for source in self.names
        }

    def listeners_of(self, source: str) -> List[str]:
        return self._listeners[source]


@dataclass(frozen=True)
class Reception:
    """A frame arriving at one listener over [start, end) in nanoseconds."""

    listener: str
    frame: Frame
    start: int
    end: int

    def overlaps(self, other: "Reception") -> bool:
        return self.start < other.end and other.start < self.end


def deliver(frame: Frame, topology: Topology, t_start: int, timings: FrameTimings) -> List[Reception]:
    """
    Receptions produced by a frame that starts at `t_start` at its source.

    Every node that hears the source receives the frame over
    [t_start + propagation, t_start + propagation + duration]; nobody else receives anything.
    """
    if frame.source not in topology.roles:
        raise ValueError(f"Unknown source {frame.source}")
    start = t_start + timings.propagation
    return [
        Reception(listener=listener, frame=frame, start=start, end=start + frame.duration)
        for listener in topology.listeners_of(frame.source)
    ]


@dataclass
class BandOccupancy:
    """
    Per band, the (frame, source) pairs active in a reception window at one listener.

    `arrivals` keeps the frames in the order their receptions were handed in.
    """

    entries: Dict[int, List[Tuple[Frame, str]]] = field(default_factory=dict)
    arrivals: List[Frame] = field(default_factory=list)

    def count(self, band: int) -> int:
        return len(self.entries.get(band, ()))

    def state(self, band: int) -> str:
        n = self.count(band)
        if n == 0:
            return "idle"
        return "decodable" if n == 1 else "collision"

    @property
    def collided_bands(self) -> List[int]:
        return sorted(band for band, items in self.entries.items() if len(items) >= 2)

    @property
    def frames(self) -> List[Frame]:
        """Every frame once, by frame id, ties in arrival order."""
        seen: Dict[int, Frame] = {}
        for frame in self.arrivals:
            seen.setdefault(id(frame), frame)
        for band in sorted(self.entries):
            for frame, _ in self.entries[band]:
                seen.setdefault(id(frame), frame)
        return sorted(seen.values(), key=lambda f: f.frame_id)

    def decodable(self, frame: Frame) -> bool:
        """A frame is decodable iff every band it occupies carries it alone."""
        return all(self.count(band) == 1 for band in frame.bands)


def band_occupancy(receptions: Iterable[Reception]) -> BandOccupancy:
    """
    Bookkeeping of the bands used by concurrent receptions at a listener.

    Each frame is listed under exactly the bands it occupies. A band with two or more
    entries is a collision on that band; no capture effect is modeled.
    """
    entries: Dict[int, List[Tuple[Frame, str]]] = defaultdict(list)
    arrivals: List[Frame] = []
    for reception in receptions:
        arrivals.append(reception.frame)
        for band in sorted(reception.frame.bands):
            entries[band].append((reception.frame, reception.frame.source))
    return BandOccupancy(entries=dict(entries), arrivals=arrivals)


@dataclass
class Transmission:
    frame: Frame
    start: int
    end: int
    receptions: List[Reception]


class Medium:
    """
    Ideal shared channel: keeps the transmissions currently in the air and, per node,
    how many signals (its own transmission included) the node currently hears.

    Physical carrier sense reads that count. The caller reports every signal start and
    end at the node that perceives it, in time order.
    """

    def __init__(self, topology: Topology, timings: FrameTimings):
        self.topology = topology
        self.timings = timings
        self._active: List[Transmission] = []
        self._signals: Dict[str, int] = {name: 0 for name in topology.roles}
        self._changed: Dict[str, int] = {name: 0 for name in topology.roles}

    @property
    def active(self) -> List[Transmission]:
        return list(self._active)

    def begin(self, frame: Frame, t_start: int) -> Transmission:
        transmission = Transmission(
            frame=frame,
            start=t_start,
            end=t_start + frame.duration,
            receptions=deliver(frame, self.topology, t_start, self.timings),
        )
        self._active.append(transmission)
        return transmission

    def finish(self, transmission: Transmission) -> None:
        """Forget a transmission once its last reception has ended."""
        self._active.remove(transmission)

    def occupy(self, node: str, t: int) -> bool:
        """Count one more signal at `node`. Returns whether the node sensed idle just before."""
        self._check(node, t)
        was_idle = self._signals[node] == 0
        self._signals[node] += 1
        self._changed[node] = t
        return was_idle

    def release(self, node: str, t: int) -> bool:
        """
        Drop one signal at `node`. Returns whether the node now senses idle.

        :raises ValueError: If the node hears nothing to release
        """
        self._check(node, t)
        if self._signals[node] == 0:
            raise ValueError(f"Node {node} hears no signal to release at {t} ns")
        self._signals[node] -= 1
        self._changed[node] = t
        return self._signals[node] == 0

    def carrier_sense(self, listener: str, t: int) -> ChannelState:
        """Busy iff the listener hears at least one signal on any band at t."""
        self._check(listener, t)
        return ChannelState.BUSY if self._signals[listener] else ChannelState.IDLE

    def _check(self, node: str, t: int) -> None:
        if node not in self._signals:
            raise ValueError(f"Unknown listener {node}")
        if t < self._changed[node]:
            raise ValueError(f"Time {t} ns precedes the last change at {node} ({self._changed[node]} ns)")


def station_destinations(topology: Topology, destinations: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
    """Destination of every station: explicit mapping first, else the first access point it hears."""
    resolved: Dict[str, str] = {}
    for station in topology.stations:
        if destinations and station in destinations:
            resolved[station] = destinations[station]
            continue
        heard = [ap for ap in topology.access_points if topology.hears(station, ap)]
        if not heard:
            raise ConfigurationError(f"Station {station} hears no access point", key="topology")
        resolved[station] = heard[0]
    return resolved

from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

from mbcsma.errors import ConfigurationError
from mbcsma.mac.contention import DEFAULT_CW_MAX, DEFAULT_CW_MIN, ContentionWindow
from mbcsma.mac.network import TrafficMode
from mbcsma.phy.channel import BandPlan, Role, Topology, station_destinations
from mbcsma.phy.params import PhyParams

DEFAULT_TARGET_EXCHANGES = 100_000
DEFAULT_WARMUP = 1_000


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Everything one run needs: topology, band plan, per-station RTS spans, PHY, contention
    window bounds, traffic, seed and stop rule.

    `spans` maps station ids to RTS band spans (missing stations use 1). `destinations`
    overrides the access point each station addresses. The run stops after
    `target_exchanges` measured exchanges or at `sim_duration` seconds, whichever is set;
    with both, whichever comes first. `post_backoff` makes a backlogged station draw a
    backoff after every acknowledged packet instead of starting over with an idle DIFS.
    """

    topology: Topology
    n_bands: int
    spans: Mapping[str, int] = field(default_factory=dict)
    phy: PhyParams = field(default_factory=PhyParams)
    cw_min: int = DEFAULT_CW_MIN
    cw_max: int = DEFAULT_CW_MAX
    traffic: TrafficMode = TrafficMode.SATURATION
    seed: int = 1
    target_exchanges: Optional[int] = DEFAULT_TARGET_EXCHANGES
    warmup: int = DEFAULT_WARMUP
    sim_duration: Optional[float] = None
    destinations: Mapping[str, str] = field(default_factory=dict)
    nav_enabled: bool = True
    post_backoff: bool = False
    name: str = "saturated"

    def __post_init__(self) -> None:
        plan = BandPlan(self.n_bands)
        stations = self.topology.stations
        if self.traffic is TrafficMode.SATURATION and not stations:
            raise ConfigurationError("Saturation traffic needs at least one station", key="stations")
        for station, span in self.spans.items():
            if station not in stations:
                raise ConfigurationError(f"Span given for unknown station {station}", key="spans")
            plan.contiguous_blocks(span)
        ContentionWindow(cw_min=self.cw_min, cw_max=self.cw_max)
        for station, destination in self.resolved_destinations.items():
            if self.topology.roles.get(destination) is not Role.ACCESS_POINT:
                raise ConfigurationError(
                    f"Station {station} addresses {destination}, which is not an access point", key="destinations"
                )
        if self.target_exchanges is None and self.sim_duration is None:
            raise ConfigurationError("Either a target exchange count or a duration is required", key="duration_exchanges")
        if self.target_exchanges is not None and self.target_exchanges < 1:
            raise ConfigurationError(
                f"duration_exchanges must be positive, got {self.target_exchanges}", key="duration_exchanges"
            )
        if self.sim_duration is not None and self.sim_duration <= 0:
            raise ConfigurationError(f"sim_duration must be positive, got {self.sim_duration}", key="sim_duration")
        if self.warmup < 0:
            raise ConfigurationError(f"warmup must not be negative, got {self.warmup}", key="warmup")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"Seed {self.seed} is out of range", key="seeds")

    @property
    def plan(self) -> BandPlan:
        return BandPlan(self.n_bands)

    @property
    def n_stations(self) -> int:
        return len(self.topology.stations)

    @property
    def resolved_destinations(self) -> Dict[str, str]:
        return station_destinations(self.topology, self.destinations)

    def span_of(self, station: str) -> int:
        return self.spans.get(station, 1)

    @property
    def key(self) -> Tuple[int, int, int]:
        """Sort key of the run in a sweep: (stations, bands, seed)."""
        return (self.n_stations, self.n_bands, self.seed)

    def to_dict(self) -> Dict[str, Any]:
        """Plain description used in logs and run records."""
        return {
            "name": self.name,
            "nodes": [[name, role.value] for name, role in self.topology.nodes],
            "edges": sorted([list(edge) for edge in self.topology.edges]),
            "n_bands": self.n_bands,
            "spans": dict(self.spans),
            "phy": self.phy.to_dict(),
            "cw_min": self.cw_min,
            "cw_max": self.cw_max,
            "traffic": self.traffic.value,
            "seed": self.seed,
            "target_exchanges": self.target_exchanges,
            "warmup": self.warmup,
            "sim_duration": self.sim_duration,
            "destinations": dict(self.destinations),
            "nav_enabled": self.nav_enabled,
            "post_backoff": self.post_backoff,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioConfig":
        topology = Topology(
            nodes=tuple((name, Role(role)) for name, role in data["nodes"]),
            edges=frozenset((listener, source) for listener, source in data["edges"]),
        )
        return cls(
            topology=topology,
            n_bands=data["n_bands"],
            spans=dict(data.get("spans", {})),
            phy=PhyParams.from_dict(data.get("phy", {})),
            cw_min=data.get("cw_min", DEFAULT_CW_MIN),
            cw_max=data.get("cw_max", DEFAULT_CW_MAX),
            traffic=TrafficMode(data.get("traffic", TrafficMode.SATURATION.value)),
            seed=data.get("seed", 1),
            target_exchanges=data.get("target_exchanges", DEFAULT_TARGET_EXCHANGES),
            warmup=data.get("warmup", DEFAULT_WARMUP),
            sim_duration=data.get("sim_duration"),
            destinations=dict(data.get("destinations", {})),
            nav_enabled=data.get("nav_enabled", True),
            post_backoff=data.get("post_backoff", False),
            name=data.get("name", "saturated"),
        )

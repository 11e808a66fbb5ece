from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Dict, List, Optional, Tuple

from haystack import component, default_from_dict, default_to_dict, logging

from mbcsma.errors import ConfigurationError
from mbcsma.mac.contention import DEFAULT_CW_MAX, DEFAULT_CW_MIN
from mbcsma.mac.network import TrafficMode
from mbcsma.phy.params import PhyParams
from mbcsma.scenarios.builders import SCENARIOS, build_scenario
from mbcsma.scenarios.config import DEFAULT_TARGET_EXCHANGES, DEFAULT_WARMUP, ScenarioConfig

logger = logging.getLogger(__name__)


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


@dataclass
class SweepSpec:
    """
    A batch of runs: the Cartesian product of station counts, band counts and seeds for one scenario.

    The remaining fields apply to every run of the sweep.
    """

    stations: List[int] = field(default_factory=lambda: [10, 50, 100])
    bands: List[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    seeds: List[int] = field(default_factory=lambda: [1])
    scenario: str = "saturated"
    output: str = "results.csv"
    format: OutputFormat = OutputFormat.CSV
    spans: List[int] = field(default_factory=lambda: [1])
    cw_min: int = DEFAULT_CW_MIN
    cw_max: int = DEFAULT_CW_MAX
    duration_exchanges: Optional[int] = DEFAULT_TARGET_EXCHANGES
    warmup: int = DEFAULT_WARMUP
    sim_duration: Optional[float] = None
    trace: Optional[str] = None
    workers: int = 1
    fully_connected: bool = False
    nav: bool = True
    post_backoff: bool = False
    phy: PhyParams = field(default_factory=PhyParams)

    def __post_init__(self) -> None:
        for key in ("stations", "bands", "seeds", "spans"):
            if not getattr(self, key):
                raise ConfigurationError(f"{key} must list at least one value", key=key)
        if any(n < 1 for n in self.stations):
            raise ConfigurationError(f"Station counts must be positive, got {self.stations}", key="stations")
        if any(n < 1 for n in self.bands):
            raise ConfigurationError(f"Band counts must be positive, got {self.bands}", key="bands")
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(
                f"Unknown scenario {self.scenario!r}, expected one of {', '.join(SCENARIOS)}", key="scenario"
            )
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}", key="workers")

    @property
    def run_count(self) -> int:
        return len(self.stations) * len(self.bands) * len(self.seeds)


def plan_sweep(spec: SweepSpec, traffic: TrafficMode = TrafficMode.SATURATION) -> List[ScenarioConfig]:
    """
    One configuration per distinct (stations, bands, seed), sorted by that key.

    Fixed topologies (hidden, exposed, pathologic) ignore the station count, so their
    duplicate points are planned once.

    :raises ConfigurationError: If any planned run is invalid
    """
    planned: Dict[Tuple[int, int, int], ScenarioConfig] = {}
    for n_stations in spec.stations:
        for n_bands in spec.bands:
            for seed in spec.seeds:
                config = build_scenario(
                    spec.scenario,
                    n_stations,
                    n_bands,
                    spans=spec.spans,
                    fully_connected=spec.fully_connected,
                    phy=spec.phy,
                    cw_min=spec.cw_min,
                    cw_max=spec.cw_max,
                    traffic=traffic,
                    seed=seed,
                    target_exchanges=spec.duration_exchanges,
                    warmup=spec.warmup,
                    sim_duration=spec.sim_duration,
                    nav_enabled=spec.nav,
                    post_backoff=spec.post_backoff,
                )
                planned.setdefault(config.key, config)
    return [planned[key] for key in sorted(planned)]


@component
class SweepPlanner:
    """
    Expands a `SweepSpec` into one `ScenarioConfig` per (stations, bands, seed).

    ### Usage example
    ```python
    planner = SweepPlanner()
    configs = planner.run(spec=SweepSpec(stations=[10], bands=[1, 5], seeds=[1, 2]))["configs"]
    assert len(configs) == 4
    ```
    """

    def __init__(self, traffic: str = TrafficMode.SATURATION.value):
        """
        :param traffic: Traffic mode of every planned run, "Saturation" or "SinglePacket"
        """
        self.traffic = TrafficMode(traffic)

    def to_dict(self) -> Dict[str, Any]:
        return default_to_dict(self, traffic=self.traffic.value)  # type: ignore

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepPlanner":
        return default_from_dict(cls, data)  # type: ignore

    @component.output_types(configs=List[ScenarioConfig])
    def run(self, spec: SweepSpec) -> dict:
        """
        Plan the runs of a sweep.

        :param spec: The sweep to expand
        :return: Dictionary with the run configurations sorted by (stations, bands, seed)
        :raises ConfigurationError: If any planned run is invalid
        """
        configs = plan_sweep(spec, self.traffic)
        logger.info(
            "Planned {runs} {scenario} runs out of {requested} requested points",
            runs=len(configs),
            scenario=spec.scenario,
            requested=spec.run_count,
        )
        return {"configs": configs}

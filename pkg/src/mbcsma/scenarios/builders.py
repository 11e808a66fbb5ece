from dataclasses import replace
from itertools import cycle
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

from mbcsma.errors import ConfigurationError
from mbcsma.phy.channel import Role, Topology
from mbcsma.scenarios.config import ScenarioConfig

ACCESS_POINT = "AP"

SpanSpec = Union[int, Sequence[int]]


def cycle_spans(stations: Sequence[str], spans: SpanSpec) -> Dict[str, int]:
    """One span for every station; a list of spans is cycled over the stations in order."""
    values = [spans] if isinstance(spans, int) else list(spans)
    if not values:
        raise ConfigurationError("At least one RTS span is required", key="spans")
    return {station: span for station, span in zip(stations, cycle(values)) if span != 1}


def build_saturated_cell(n_stations: int, n_bands: int, spans: SpanSpec = 1, **overrides: Any) -> ScenarioConfig:
    """One access point `AP` and stations STA0..STA{n-1}, all hearing each other, always backlogged."""
    if n_stations < 1:
        raise ConfigurationError(f"A saturated cell needs at least one station, got {n_stations}", key="stations")
    stations = [f"STA{i}" for i in range(n_stations)]
    nodes = [(ACCESS_POINT, Role.ACCESS_POINT)] + [(name, Role.STATION) for name in stations]
    overrides.setdefault("name", "saturated")
    return ScenarioConfig(
        topology=Topology.fully_connected(nodes),
        n_bands=n_bands,
        spans=cycle_spans(stations, spans),
        **overrides,
    )


def build_uplink_spans(spans: Sequence[int] = (1, 2), n_bands: int = 5, **overrides: Any) -> ScenarioConfig:
    """Saturated cell where station i sends its RTS over `spans[i]` contiguous bands."""
    overrides.setdefault("name", "uplink-spans")
    return build_saturated_cell(len(spans), n_bands, spans=list(spans), **overrides)


def build_hidden_node(n_bands: int = 1, **overrides: Any) -> ScenarioConfig:
    """X and Y both hear the receiver R but not each other."""
    nodes = [("X", Role.STATION), ("Y", Role.STATION), ("R", Role.ACCESS_POINT)]
    overrides.setdefault("name", "hidden")
    return ScenarioConfig(
        topology=Topology.from_links(nodes, [("X", "R"), ("Y", "R")]),
        n_bands=n_bands,
        **overrides,
    )


def build_pathologic_pairs(
    n_bands: int = 2, fully_connected: bool = False, same_destination: bool = False, **overrides: Any
) -> ScenarioConfig:
    """
    A sends to B and C sends to D. B hears A and C, D hears only C.

    With `fully_connected` every node hears every other one. With `same_destination`
    both stations address B.
    """
    nodes = [("A", Role.STATION), ("B", Role.ACCESS_POINT), ("C", Role.STATION), ("D", Role.ACCESS_POINT)]
    if fully_connected:
        topology = Topology.fully_connected(nodes)
    else:
        topology = Topology.from_links(nodes, [("A", "B"), ("C", "B"), ("C", "D")])
    overrides.setdefault("name", "pathologic")
    return ScenarioConfig(
        topology=topology,
        n_bands=n_bands,
        destinations={"A": "B", "C": "B" if same_destination else "D"},
        **overrides,
    )


def build_exposed_node(n_bands: int = 1, isolated: bool = False, **overrides: Any) -> ScenarioConfig:
    """
    S sends to D while the exposed station S_E, which hears S but not D, sends to D_E.

    With `isolated` only the S_E to D_E pair exists, as the reference for its throughput.
    """
    pairs: List[Tuple[str, str]] = [("S_E", "D_E")]
    links = [("S_E", "D_E")]
    if not isolated:
        pairs.insert(0, ("S", "D"))
        links += [("S", "D"), ("S", "S_E")]
    nodes = [(station, Role.STATION) for station, _ in pairs] + [(ap, Role.ACCESS_POINT) for _, ap in pairs]
    overrides.setdefault("name", "exposed")
    return ScenarioConfig(
        topology=Topology.from_links(nodes, links),
        n_bands=n_bands,
        destinations=dict(pairs),
        **overrides,
    )


def _saturated(n_stations: int, n_bands: int, spans: SpanSpec, fully_connected: bool, **overrides: Any) -> ScenarioConfig:
    return build_saturated_cell(n_stations, n_bands, spans=spans, **overrides)


def _hidden(n_stations: int, n_bands: int, spans: SpanSpec, fully_connected: bool, **overrides: Any) -> ScenarioConfig:
    config = build_hidden_node(n_bands=n_bands, **overrides)
    return _with_spans(config, spans)


def _exposed(n_stations: int, n_bands: int, spans: SpanSpec, fully_connected: bool, **overrides: Any) -> ScenarioConfig:
    config = build_exposed_node(n_bands=n_bands, **overrides)
    return _with_spans(config, spans)


def _pathologic(
    n_stations: int, n_bands: int, spans: SpanSpec, fully_connected: bool, **overrides: Any
) -> ScenarioConfig:
    config = build_pathologic_pairs(n_bands=n_bands, fully_connected=fully_connected, **overrides)
    return _with_spans(config, spans)


def _with_spans(config: ScenarioConfig, spans: SpanSpec) -> ScenarioConfig:
    return replace(config, spans=cycle_spans(config.topology.stations, spans))


# Scenario names addressable from the command line. Fixed topologies ignore the station count.
SCENARIOS: Dict[str, Callable[..., ScenarioConfig]] = {
    "saturated": _saturated,
    "hidden": _hidden,
    "exposed": _exposed,
    "pathologic": _pathologic,
}


def build_scenario(
    name: str,
    n_stations: int,
    n_bands: int,
    spans: SpanSpec = 1,
    fully_connected: bool = False,
    **overrides: Any,
) -> ScenarioConfig:
    """
    :raises ConfigurationError: If the scenario name is unknown or the resulting config is invalid
    """
    try:
        builder = SCENARIOS[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown scenario {name!r}, expected one of {', '.join(SCENARIOS)}", key="scenario"
        ) from None
    return builder(n_stations, n_bands, spans, fully_connected, **overrides)

from mbcsma.scenarios.builders import (
    SCENARIOS,
    build_exposed_node,
    build_hidden_node,
    build_pathologic_pairs,
    build_saturated_cell,
    build_scenario,
    build_uplink_spans,
    cycle_spans,
)
from mbcsma.scenarios.config import DEFAULT_TARGET_EXCHANGES, DEFAULT_WARMUP, ScenarioConfig
from mbcsma.scenarios.runner import build_network, run_scenario

__all__ = [
    "DEFAULT_TARGET_EXCHANGES",
    "DEFAULT_WARMUP",
    "SCENARIOS",
    "ScenarioConfig",
    "build_exposed_node",
    "build_hidden_node",
    "build_network",
    "build_pathologic_pairs",
    "build_saturated_cell",
    "build_scenario",
    "build_uplink_spans",
    "cycle_spans",
    "run_scenario",
]

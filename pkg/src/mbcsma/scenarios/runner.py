import time

from haystack import logging

from mbcsma.engine.randomness import SeededRandom
from mbcsma.engine.scheduler import to_ns
from mbcsma.mac.network import Network, NetworkResult
from mbcsma.metrics.collector import MetricsCollector
from mbcsma.scenarios.config import ScenarioConfig

logger = logging.getLogger(__name__)


def build_network(config: ScenarioConfig, record_trace: bool = False, record_decisions: bool = False) -> Network:
    """Wire a fresh network for one run; every random draw comes from one generator seeded by `config.seed`."""
    return Network(
        topology=config.topology,
        plan=config.plan,
        timings=config.phy.timings(),
        rng=SeededRandom(config.seed),
        destinations=config.resolved_destinations,
        spans=config.spans,
        cw_min=config.cw_min,
        cw_max=config.cw_max,
        traffic=config.traffic,
        nav_enabled=config.nav_enabled,
        post_backoff=config.post_backoff,
        collector=MetricsCollector(payload_bits=config.phy.payload_bits, warmup=config.warmup),
        record_trace=record_trace,
        record_decisions=record_decisions,
    )


def run_scenario(config: ScenarioConfig, record_trace: bool = False, record_decisions: bool = False) -> NetworkResult:
    """
    Simulate one scenario until its stop rule fires.

    :param config: Scenario to run
    :param record_trace: Keep the dispatched event trace
    :param record_decisions: Keep every receiver decision with its time
    """
    network = build_network(config, record_trace=record_trace, record_decisions=record_decisions)
    logger.info(
        "Starting {name} run with {n_stations} stations on {n_bands} bands, seed {seed}",
        name=config.name,
        n_stations=config.n_stations,
        n_bands=config.n_bands,
        seed=config.seed,
    )
    started = time.perf_counter()
    until = to_ns(config.sim_duration) if config.sim_duration is not None else None
    result = network.run(target_exchanges=config.target_exchanges, until=until)
    logger.info(
        "Finished {name} run ({n_stations}, {n_bands}, {seed}): {acked} packets in {wall:.1f}s",
        name=config.name,
        n_stations=config.n_stations,
        n_bands=config.n_bands,
        seed=config.seed,
        acked=result.metrics.acked_packets,
        wall=time.perf_counter() - started,
    )
    return result

from mbcsma.metrics.collector import MetricsCollector, RoundStats, RunMetrics
from mbcsma.metrics.oracle import DEFAULT_ASSIGNMENT_BUDGET, SlotOracle, slot_oracle
from mbcsma.metrics.statistics import (
    DELAY_QUANTILES,
    QUANTILE_COLUMNS,
    DelayCdf,
    GainKind,
    collision_probability,
    delay_cdf,
    gain_percent,
    gain_table,
    saturation_throughput,
    summarize,
    throughput_upper_bound,
)

__all__ = [
    "DEFAULT_ASSIGNMENT_BUDGET",
    "DELAY_QUANTILES",
    "QUANTILE_COLUMNS",
    "DelayCdf",
    "GainKind",
    "MetricsCollector",
    "RoundStats",
    "RunMetrics",
    "SlotOracle",
    "collision_probability",
    "delay_cdf",
    "gain_percent",
    "gain_table",
    "saturation_throughput",
    "slot_oracle",
    "summarize",
    "throughput_upper_bound",
]

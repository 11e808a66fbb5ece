import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from haystack import logging

from mbcsma.errors import EmptyDelaySampleError
from mbcsma.metrics.collector import RunMetrics
from mbcsma.phy.params import FrameTimings, PhyParams

logger = logging.getLogger(__name__)

DELAY_QUANTILES: Tuple[float, ...] = (0.50, 0.90, 0.95, 0.98, 0.99)

# export column per delay quantile
QUANTILE_COLUMNS: Dict[float, str] = {0.50: "delay_p50", 0.90: "p90", 0.95: "p95", 0.98: "p98", 0.99: "p99"}


class GainKind(StrEnum):
    """
    Attributes:
        THROUGHPUT: Higher is better, relative to the single-band value
        DELAY: Lower is better, relative to the multiband value
    """

    THROUGHPUT = "throughput"
    DELAY = "delay"


def collision_probability(metrics: RunMetrics) -> Optional[float]:
    """Share of RTS attempts that collided; None when nothing was sent."""
    if metrics.rts_attempts == 0:
        return None
    return metrics.rts_collisions / metrics.rts_attempts


def saturation_throughput(metrics: RunMetrics) -> Optional[float]:
    """Acknowledged payload bits per second of measured time."""
    if metrics.sim_duration <= 0:
        return None
    return metrics.acked_payload_bits / metrics.sim_duration


def throughput_upper_bound(params: PhyParams) -> float:
    """Payload rate of back-to-back exchanges with no backoff: one DIFS plus one full exchange per packet."""
    timings = FrameTimings.from_params(params)
    return params.payload_bits / ((timings.difs + timings.exchange) / 1e9)


@dataclass(frozen=True)
class DelayCdf:
    """Empirical CDF over sorted per-packet delays in seconds."""

    delays: Tuple[float, ...]

    @classmethod
    def from_delays(cls, delays: Iterable[float]) -> "DelayCdf":
        ordered = np.sort(np.asarray(list(delays), dtype=float))
        if ordered.size == 0:
            raise EmptyDelaySampleError("No completed packet, the delay CDF is undefined")
        return cls(delays=tuple(float(d) for d in ordered))

    def __len__(self) -> int:
        return len(self.delays)

    def quantile(self, q: float) -> float:
        """Smallest delay d with CDF(d) >= q."""
        if not 0.0 < q <= 1.0:
            raise ValueError(f"Quantile must lie in (0, 1], got {q}")
        index = max(math.ceil(round(q * len(self.delays), 9)) - 1, 0)
        return self.delays[index]

    def cdf(self, d: float) -> float:
        """Fraction of delays not above d."""
        return float(np.searchsorted(self.delays, d, side="right")) / len(self.delays)

    def quantiles(self, qs: Sequence[float] = DELAY_QUANTILES) -> Dict[float, float]:
        return {q: self.quantile(q) for q in qs}


def delay_cdf(metrics: RunMetrics) -> DelayCdf:
    """
    :raises EmptyDelaySampleError: If the run acknowledged no packet
    """
    return DelayCdf.from_delays(metrics.per_packet_delays)


def gain_percent(multi: float, single: float, kind: GainKind = GainKind.THROUGHPUT) -> float:
    """
    Relative gain of the multiband protocol over the single-band one.

    Throughput gain divides by the single-band value; delay gain divides by the multiband
    value, so 1.53 ms against 3.13 ms is a gain of about 104.6%.

    :raises ZeroDivisionError: If the reference value is zero
    """
    if kind is GainKind.THROUGHPUT:
        if single == 0:
            raise ZeroDivisionError("Single-band throughput is zero")
        return 100.0 * (multi - single) / single
    if multi == 0:
        raise ZeroDivisionError("Multiband delay is zero")
    return 100.0 * (single - multi) / multi


def summarize(metrics: RunMetrics) -> Dict[str, Optional[float]]:
    """Export fields of one run; metrics that are undefined come out as None."""
    summary: Dict[str, Optional[float]] = {
        "collision_prob": collision_probability(metrics),
        "throughput_bps": saturation_throughput(metrics),
    }
    quantiles: Mapping[float, Optional[float]]
    try:
        quantiles = delay_cdf(metrics).quantiles()
    except EmptyDelaySampleError:
        logger.warning("Run acknowledged no packet, delay quantiles are absent")
        quantiles = {q: None for q in DELAY_QUANTILES}
    for q, value in quantiles.items():
        summary[QUANTILE_COLUMNS[q]] = value
    return summary


def gain_table(records: Iterable[Mapping[str, Any]]) -> List[Dict[str, Any]]:
    """
    Gain of every multiband aggregate over the single-band aggregate with the same station count.

    Records are aggregate rows keyed like the export (`n_stations`, `n_bands`,
    `throughput_bps`, `p90`...). Gains that cannot be computed are None.
    """
    by_cell = {(int(r["n_stations"]), int(r["n_bands"])): r for r in records}
    rows: List[Dict[str, Any]] = []
    for (n_stations, n_bands), record in sorted(by_cell.items()):
        baseline = by_cell.get((n_stations, 1))
        if n_bands < 2 or baseline is None:
            continue
        row: Dict[str, Any] = {
            "n_stations": n_stations,
            "n_bands": n_bands,
            "throughput_gain_pct": _gain(record, baseline, "throughput_bps", GainKind.THROUGHPUT),
        }
        for q in ("p90", "p95", "p98", "p99"):
            row[f"delay_gain_{q}"] = _gain(record, baseline, q, GainKind.DELAY)
        rows.append(row)
    return rows


def _gain(record: Mapping[str, Any], baseline: Mapping[str, Any], key: str, kind: GainKind) -> Optional[float]:
    multi, single = record.get(key), baseline.get(key)
    if multi is None or single is None:
        return None
    try:
        return gain_percent(float(multi), float(single), kind)
    except ZeroDivisionError:
        return None

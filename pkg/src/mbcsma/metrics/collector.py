from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

from haystack import logging

from mbcsma.engine.scheduler import to_seconds

logger = logging.getLogger(__name__)


@dataclass
class RoundStats:
    """RTS resolution rounds that saw the same number of RTS frames."""

    rounds: int = 0
    successful_rounds: int = 0
    rts_frames: int = 0
    rts_collided: int = 0

    @property
    def station_collision_rate(self) -> float:
        return self.rts_collided / self.rts_frames if self.rts_frames else 0.0

    @property
    def round_success_rate(self) -> float:
        return self.successful_rounds / self.rounds if self.rounds else 0.0


@dataclass
class RunMetrics:
    """
    Accumulators of one run after warm-up.

    `rts_collisions` counts station-side RTS attempts that ended in a collision or a CTS
    timeout. Delays are access delays in seconds, from the start of contention for a
    head-of-queue packet to the reception of its ACK.
    """

    rts_attempts: int = 0
    rts_collisions: int = 0
    acked_packets: int = 0
    acked_payload_bits: int = 0
    per_packet_delays: List[float] = field(default_factory=list)
    sim_duration: float = 0.0
    acked_bits_by_station: Dict[str, int] = field(default_factory=dict)
    data_collisions: int = 0
    cts_collisions: int = 0
    ap_outcomes: Dict[str, int] = field(default_factory=dict)
    round_stats: Dict[int, RoundStats] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunMetrics":
        data = dict(data)
        data["round_stats"] = {int(n): RoundStats(**stats) for n, stats in data.get("round_stats", {}).items()}
        return cls(**data)


class MetricsCollector:
    """
    Feeds `RunMetrics` from the MAC event handlers and applies the warm-up rule:
    the first `warmup` completed exchanges are discarded before accumulation starts.
    """

    def __init__(self, payload_bits: int, warmup: int = 0):
        self.payload_bits = payload_bits
        self.warmup = warmup
        self.completed_exchanges = 0
        self.measure_start = 0
        self.metrics = RunMetrics()
        self._ap_outcomes: Counter[str] = Counter()

    @property
    def measuring(self) -> bool:
        return self.completed_exchanges >= self.warmup

    @property
    def measured_exchanges(self) -> int:
        return max(0, self.completed_exchanges - self.warmup)

    def rts_sent(self) -> bool:
        """Count an RTS attempt. Returns whether it was counted, to be handed back to `rts_failed`."""
        if self.measuring:
            self.metrics.rts_attempts += 1
            return True
        return False

    def rts_failed(self, counted: bool) -> None:
        """Count a failed attempt, only if the attempt itself was counted."""
        if counted and self.measuring:
            self.metrics.rts_collisions += 1

    def exchange_completed(self, station: str, delay_ns: int, t: int) -> None:
        self.completed_exchanges += 1
        if self.completed_exchanges == self.warmup:
            self._restart(t)
            return
        if not self.measuring:
            return
        m = self.metrics
        m.acked_packets += 1
        m.acked_payload_bits += self.payload_bits
        m.acked_bits_by_station[station] = m.acked_bits_by_station.get(station, 0) + self.payload_bits
        m.per_packet_delays.append(to_seconds(delay_ns))

    def round_resolved(self, n_rts: int, n_decoded: int, outcome: str) -> None:
        if not self.measuring:
            return
        self._ap_outcomes[outcome] += 1
        if n_rts == 0:
            return
        stats = self.metrics.round_stats.setdefault(n_rts, RoundStats())
        stats.rounds += 1
        stats.rts_frames += n_rts
        stats.rts_collided += n_rts - n_decoded
        if n_decoded:
            stats.successful_rounds += 1

    def data_collided(self) -> None:
        if self.measuring:
            self.metrics.data_collisions += 1

    def cts_collided(self) -> None:
        if self.measuring:
            self.metrics.cts_collisions += 1

    def finish(self, t: int) -> RunMetrics:
        self.metrics.sim_duration = to_seconds(t - self.measure_start)
        self.metrics.ap_outcomes = dict(sorted(self._ap_outcomes.items()))
        return self.metrics

    def _restart(self, t: int) -> None:
        logger.debug("Warm-up of {warmup} exchanges finished at {t} ns", warmup=self.warmup, t=t)
        self.measure_start = t
        self.metrics = RunMetrics()
        self._ap_outcomes.clear()

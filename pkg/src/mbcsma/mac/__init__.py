from mbcsma.mac.access_point import ApDecision, ApOutcome, ap_resolve_rts, virtual_collision_check
from mbcsma.mac.contention import (
    DEFAULT_CW_MAX,
    DEFAULT_CW_MIN,
    ContentionOutcome,
    ContentionWindow,
    StationPhase,
    StationState,
    backoff_tick,
    draw_backoff,
    freeze_backoff,
    idle_slots_elapsed,
    on_contention_outcome,
    select_rts_bands,
)
from mbcsma.mac.network import Network, NetworkResult, ReceiverPhase, TrafficMode

__all__ = [
    "DEFAULT_CW_MAX",
    "DEFAULT_CW_MIN",
    "ApDecision",
    "ApOutcome",
    "ContentionOutcome",
    "ContentionWindow",
    "Network",
    "NetworkResult",
    "ReceiverPhase",
    "StationPhase",
    "StationState",
    "TrafficMode",
    "ap_resolve_rts",
    "backoff_tick",
    "draw_backoff",
    "freeze_backoff",
    "idle_slots_elapsed",
    "on_contention_outcome",
    "select_rts_bands",
    "virtual_collision_check",
]

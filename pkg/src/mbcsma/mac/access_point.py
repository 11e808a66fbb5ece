from dataclasses import dataclass, field
from enum import StrEnum
from typing import List, Optional, Sequence

from mbcsma.engine.randomness import SeededRandom
from mbcsma.phy.channel import BandOccupancy, Frame
from mbcsma.phy.params import FrameKind


class ApOutcome(StrEnum):
    NO_RTS = "NoRts"
    ALL_COLLIDED = "AllCollided"
    GRANT = "Grant"
    VIRTUAL_COLLISION = "VirtualCollision"
    NOT_ADDRESSED = "NotAddressed"
    NAV_DEFERRED = "NavDeferred"


@dataclass(frozen=True)
class ApDecision:
    outcome: ApOutcome
    winner: Optional[str] = None
    decoded: List[Frame] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.outcome is ApOutcome.GRANT and self.winner not in {f.source for f in self.decoded}:
            raise ValueError(f"Grant winner {self.winner} is not among the decoded senders")

    @property
    def decoded_sources(self) -> List[str]:
        return [frame.source for frame in self.decoded]


def virtual_collision_check(decoded: Sequence[Frame]) -> bool:
    """True iff the decoded RTS carry at least two distinct destination identities."""
    return len({frame.destination for frame in decoded}) >= 2


def ap_resolve_rts(occ: BandOccupancy, rng: SeededRandom, receiver: Optional[str] = None) -> ApDecision:
    """
    Decide the response to one RTS reception window.

    Decoded RTS are those alone on every band they occupy. With none decoded the round is
    a total collision and no CTS is sent. Decoded RTS addressing different destinations
    are a virtual RTS collision, also answered by silence. Otherwise, when `receiver` is
    their destination (or not given), the winner is drawn uniformly among the decoded senders.

    :param occ: Band occupancy over a full RTS reception window
    :param rng: The run's random source
    :param receiver: Identity of the resolving node; decoded RTS for someone else are ignored
    """
    rts_frames = [frame for frame in occ.frames if frame.kind is FrameKind.RTS]
    if not rts_frames:
        return ApDecision(outcome=ApOutcome.NO_RTS)

    decoded = [frame for frame in rts_frames if occ.decodable(frame)]
    if not decoded:
        return ApDecision(outcome=ApOutcome.ALL_COLLIDED)

    if virtual_collision_check(decoded):
        return ApDecision(outcome=ApOutcome.VIRTUAL_COLLISION, decoded=decoded)

    if receiver is not None and decoded[0].destination != receiver:
        return ApDecision(outcome=ApOutcome.NOT_ADDRESSED, decoded=decoded)

    winner = rng.choice(decoded).source
    return ApDecision(outcome=ApOutcome.GRANT, winner=winner, decoded=decoded)

from dataclasses import asdict, dataclass, fields
from enum import StrEnum
from typing import Any, Dict

from mbcsma.engine.scheduler import ceil_ns, to_ns
from mbcsma.errors import ConfigurationError


class FrameKind(StrEnum):
    RTS = "RTS"
    CTS = "CTS"
    DATA = "DATA"
    ACK = "ACK"


@dataclass(frozen=True)
class PhyParams:
    """
    PHY layer parameters. Defaults are the 802.11n values used for the saturation study.

    Control-frame sizes exclude the PHY header, which `frame_duration` adds to every frame.
    Times are in seconds, sizes in bits.
    """

    payload_bits: int = 8184
    mac_header_bits: int = 272
    phy_header_bits: int = 128
    ack_bits: int = 112
    rts_bits: int = 160
    cts_bits: int = 112
    channel_bit_rate: float = 72.2e6
    propagation_delay: float = 1e-6
    sifs: float = 10e-6
    slot_time: float = 9e-6
    difs: float = 28e-6

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "propagation_delay":
                if value < 0:
                    raise ConfigurationError(f"{f.name} must not be negative, got {value}", key=f.name)
            elif value <= 0:
                raise ConfigurationError(f"{f.name} must be strictly positive, got {value}", key=f.name)
        if self.difs <= self.sifs:
            raise ConfigurationError(f"difs ({self.difs}) must exceed sifs ({self.sifs})", key="difs")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhyParams":
        return cls(**data)

    def frame_bits(self, kind: FrameKind) -> int:
        mac_bits = {
            FrameKind.RTS: self.rts_bits,
            FrameKind.CTS: self.cts_bits,
            FrameKind.ACK: self.ack_bits,
            FrameKind.DATA: self.mac_header_bits + self.payload_bits,
        }[kind]
        return self.phy_header_bits + mac_bits

    def timings(self) -> "FrameTimings":
        return FrameTimings.from_params(self)


def frame_duration(kind: FrameKind, params: PhyParams) -> float:
    """
    Airtime of a frame in seconds: total bits over the channel bit rate.

    The RTS duration does not depend on how many bands the RTS occupies.
    """
    return params.frame_bits(kind) / params.channel_bit_rate


@dataclass(frozen=True)
class FrameTimings:
    """Integer-nanosecond view of `PhyParams`; frame durations are rounded up to whole nanoseconds."""

    rts: int
    cts: int
    data: int
    ack: int
    sifs: int
    difs: int
    slot: int
    propagation: int

    @classmethod
    def from_params(cls, params: PhyParams) -> "FrameTimings":
        return cls(
            rts=ceil_ns(frame_duration(FrameKind.RTS, params)),
            cts=ceil_ns(frame_duration(FrameKind.CTS, params)),
            data=ceil_ns(frame_duration(FrameKind.DATA, params)),
            ack=ceil_ns(frame_duration(FrameKind.ACK, params)),
            sifs=to_ns(params.sifs),
            difs=to_ns(params.difs),
            slot=to_ns(params.slot_time),
            propagation=to_ns(params.propagation_delay),
        )

    def duration(self, kind: FrameKind) -> int:
        return {
            FrameKind.RTS: self.rts,
            FrameKind.CTS: self.cts,
            FrameKind.DATA: self.data,
            FrameKind.ACK: self.ack,
        }[kind]

    @property
    def rts_nav(self) -> int:
        """NAV carried by an RTS: from RTS end through ACK end."""
        return 3 * self.sifs + self.cts + self.data + self.ack + 3 * self.propagation

    @property
    def cts_nav(self) -> int:
        """NAV carried by a CTS: from CTS end through ACK end."""
        return 2 * self.sifs + self.data + self.ack + 2 * self.propagation

    @property
    def cts_timeout(self) -> int:
        """Wait after the RTS ends before a missing CTS is declared a collision."""
        return self.sifs + self.cts + 2 * self.propagation + self.slot

    @property
    def ack_timeout(self) -> int:
        return self.sifs + self.ack + 2 * self.propagation + self.slot

    @property
    def data_watchdog(self) -> int:
        """Wait after the CTS ends before a receiver gives up on the granted DATA."""
        return self.sifs + 2 * self.propagation + self.slot

    @property
    def exchange(self) -> int:
        """RTS + CTS + DATA + ACK with their SIFS gaps and four propagation hops."""
        return self.rts + self.cts + self.data + self.ack + 3 * self.sifs + 4 * self.propagation

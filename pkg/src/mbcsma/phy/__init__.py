from mbcsma.phy.channel import (
    BandOccupancy,
    BandPlan,
    ChannelState,
    Frame,
    Medium,
    Reception,
    Role,
    Topology,
    Transmission,
    band_occupancy,
    deliver,
    station_destinations,
)
from mbcsma.phy.params import FrameKind, FrameTimings, PhyParams, frame_duration

__all__ = [
    "BandOccupancy",
    "BandPlan",
    "ChannelState",
    "Frame",
    "FrameKind",
    "FrameTimings",
    "Medium",
    "PhyParams",
    "Reception",
    "Role",
    "Topology",
    "Transmission",
    "band_occupancy",
    "deliver",
    "frame_duration",
    "station_destinations",
]

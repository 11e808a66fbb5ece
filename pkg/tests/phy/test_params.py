import pytest

from mbcsma.errors import ConfigurationError
from mbcsma.phy.params import FrameKind, FrameTimings, PhyParams, frame_duration


class TestPhyParams:
    def test_default_frame_durations(self) -> None:
        """Test the airtime of every frame under the default parameters"""
        timings = PhyParams().timings()

        assert timings.rts == 3_989
        assert timings.cts == 3_325
        assert timings.ack == 3_325
        assert timings.data == 118_892
        assert (timings.sifs, timings.difs, timings.slot, timings.propagation) == (10_000, 28_000, 9_000, 1_000)

    def test_frame_duration_in_seconds(self) -> None:
        """Test that frame_duration divides total bits by the bit rate"""
        params = PhyParams()

        assert frame_duration(FrameKind.DATA, params) == pytest.approx(8584 / 72.2e6)
        assert frame_duration(FrameKind.RTS, params) == pytest.approx(288 / 72.2e6)

    def test_derived_intervals(self) -> None:
        """Test NAV values, timeouts and the exchange length"""
        timings = FrameTimings.from_params(PhyParams())

        assert timings.exchange == 163_531
        assert timings.cts_timeout == 24_325
        assert timings.ack_timeout == 24_325
        assert timings.data_watchdog == 21_000
        assert timings.rts_nav == 3 * 10_000 + 3_325 + 118_892 + 3_325 + 3 * 1_000
        assert timings.cts_nav == 2 * 10_000 + 118_892 + 3_325 + 2 * 1_000
        assert timings.duration(FrameKind.CTS) == timings.cts

    def test_payload_changes_only_data(self) -> None:
        """Test that the payload size only affects the DATA frame"""
        small = PhyParams(payload_bits=1000).timings()
        default = PhyParams().timings()

        assert small.data < default.data
        assert small.rts == default.rts

    @pytest.mark.parametrize(
        "overrides, key",
        [
            ({"payload_bits": 0}, "payload_bits"),
            ({"channel_bit_rate": -1.0}, "channel_bit_rate"),
            ({"propagation_delay": -1e-6}, "propagation_delay"),
            ({"difs": 5e-6}, "difs"),
        ],
    )
    def test_invalid_values_raise(self, overrides, key) -> None:
        """Test that invalid parameters name the offending key"""
        with pytest.raises(ConfigurationError) as exc_info:
            PhyParams(**overrides)

        assert exc_info.value.key == key

    def test_zero_propagation_is_allowed(self) -> None:
        """Test that an ideal zero propagation delay is accepted"""
        assert PhyParams(propagation_delay=0.0).timings().propagation == 0

    def test_dict_round_trip(self) -> None:
        """Test to_dict and from_dict"""
        params = PhyParams(payload_bits=4000)

        assert PhyParams.from_dict(params.to_dict()) == params

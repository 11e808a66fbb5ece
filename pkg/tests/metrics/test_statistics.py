import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbcsma.errors import EmptyDelaySampleError
from mbcsma.metrics.collector import RunMetrics
from mbcsma.metrics.statistics import (
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
from mbcsma.phy.params import PhyParams


class TestRunStatistics:
    def test_collision_probability(self) -> None:
        """Test the share of collided RTS attempts"""
        assert collision_probability(RunMetrics(rts_attempts=200, rts_collisions=50)) == 0.25

    def test_collision_probability_without_attempts(self) -> None:
        """Test that no attempts leave the probability undefined"""
        assert collision_probability(RunMetrics()) is None

    def test_saturation_throughput(self) -> None:
        """Test acknowledged bits over measured seconds"""
        metrics = RunMetrics(acked_payload_bits=8184 * 1000, sim_duration=0.5)

        assert saturation_throughput(metrics) == pytest.approx(16_368_000)
        assert saturation_throughput(RunMetrics()) is None

    def test_upper_bound(self) -> None:
        """Test the back-to-back exchange bound of the default PHY"""
        assert throughput_upper_bound(PhyParams()) == pytest.approx(8184 / 191_531e-9)


class TestDelayCdf:
    @pytest.fixture
    def cdf(self) -> DelayCdf:
        return DelayCdf.from_delays([float(d) for d in range(10, 0, -1)])

    def test_quantiles(self, cdf: DelayCdf) -> None:
        """Test the smallest delay whose CDF reaches q"""
        assert cdf.quantile(0.5) == 5.0
        assert cdf.quantile(0.9) == 9.0
        assert cdf.quantile(0.99) == 10.0
        assert cdf.quantile(1.0) == 10.0
        assert cdf.quantile(0.01) == 1.0

    def test_cdf(self, cdf: DelayCdf) -> None:
        """Test the empirical distribution function"""
        assert cdf.cdf(0.5) == 0.0
        assert cdf.cdf(3.0) == 0.3
        assert cdf.cdf(10.0) == 1.0

    @pytest.mark.parametrize("q", [0.0, 1.5, -0.1])
    def test_quantile_out_of_range(self, cdf: DelayCdf, q: float) -> None:
        """Test that q must lie in (0, 1]"""
        with pytest.raises(ValueError):
            cdf.quantile(q)

    def test_empty_sample_raises(self) -> None:
        """Test that a run without ACKs has no delay CDF"""
        with pytest.raises(EmptyDelaySampleError):
            delay_cdf(RunMetrics())

    def test_constant_delays_give_a_step(self) -> None:
        """Test that identical delays give the same value at every quantile"""
        cdf = delay_cdf(RunMetrics(per_packet_delays=[191_531e-9] * 40))

        assert set(cdf.quantiles().values()) == {191_531e-9}

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=200))
    def test_quantiles_are_monotone(self, delays) -> None:
        """Test that quantiles never decrease with q"""
        values = list(DelayCdf.from_delays(delays).quantiles().values())

        assert values == sorted(values)


class TestGains:
    def test_throughput_gain(self) -> None:
        """Test the throughput gain of 25.11 over its single-band baseline"""
        assert gain_percent(25.11, 25.11 / 1.5004) == pytest.approx(50.04, abs=0.01)

    def test_delay_gain(self) -> None:
        """Test that 1.53 ms against 3.13 ms is a gain of about 104.6%"""
        assert gain_percent(1.53, 3.13, GainKind.DELAY) == pytest.approx(104.575, abs=0.01)

    def test_equal_values(self) -> None:
        """Test that equal values are no gain"""
        assert gain_percent(3.0, 3.0) == 0.0
        assert gain_percent(3.0, 3.0, GainKind.DELAY) == 0.0

    def test_zero_reference_raises(self) -> None:
        """Test division by a zero reference"""
        with pytest.raises(ZeroDivisionError):
            gain_percent(1.0, 0.0)
        with pytest.raises(ZeroDivisionError):
            gain_percent(0.0, 1.0, GainKind.DELAY)

    def test_gain_table(self) -> None:
        """Test that every multiband cell is compared to the single-band cell with the same stations"""
        records = [
            {"n_stations": 100, "n_bands": 1, "throughput_bps": 10.0, "p90": 2.0, "p95": 4.0, "p98": None, "p99": 6.0},
            {"n_stations": 100, "n_bands": 2, "throughput_bps": 15.0, "p90": 1.0, "p95": 2.0, "p98": 3.0, "p99": 0.0},
            {"n_stations": 10, "n_bands": 2, "throughput_bps": 15.0, "p90": 1.0, "p95": 2.0, "p98": 3.0, "p99": 3.0},
        ]

        rows = gain_table(records)

        assert rows == [
            {
                "n_stations": 100,
                "n_bands": 2,
                "throughput_gain_pct": 50.0,
                "delay_gain_p90": 100.0,
                "delay_gain_p95": 100.0,
                "delay_gain_p98": None,
                "delay_gain_p99": None,
            }
        ]


class TestSummarize:
    def test_summary_columns(self) -> None:
        """Test the export fields of a run"""
        metrics = RunMetrics(
            rts_attempts=4, rts_collisions=1, acked_payload_bits=100, sim_duration=1.0, per_packet_delays=[1.0, 2.0]
        )

        summary = summarize(metrics)

        assert summary == {
            "collision_prob": 0.25,
            "throughput_bps": 100.0,
            "delay_p50": 1.0,
            "p90": 2.0,
            "p95": 2.0,
            "p98": 2.0,
            "p99": 2.0,
        }

    def test_missing_delays_are_none(self) -> None:
        """Test that a run without ACKs exports no delay quantiles"""
        summary = summarize(RunMetrics(rts_attempts=3, rts_collisions=3, sim_duration=1.0))

        assert summary["collision_prob"] == 1.0
        assert summary["delay_p50"] is None
        assert summary["p99"] is None

import pytest

from mbcsma.engine.randomness import SeededRandom
from mbcsma.engine.scheduler import EventKind
from mbcsma.mac.access_point import ApOutcome
from mbcsma.mac.contention import StationPhase
from mbcsma.mac.network import Network, ReceiverPhase, TrafficMode
from mbcsma.metrics.collector import MetricsCollector
from mbcsma.phy.channel import BandPlan, ChannelState, Role, Topology
from mbcsma.phy.params import PhyParams

EXCHANGE_NS = 163_531
DIFS_NS = 28_000
SLOT_NS = 9_000


def cell(n_stations: int) -> Topology:
    return Topology.fully_connected([("AP", Role.ACCESS_POINT)] + [(f"STA{i}", Role.STATION) for i in range(n_stations)])


def make_network(n_stations: int, n_bands: int = 1, seed: int = 1, **kwargs) -> Network:
    topology = cell(n_stations)
    return Network(
        topology=topology,
        plan=BandPlan(n_bands),
        timings=PhyParams().timings(),
        rng=SeededRandom(seed),
        destinations={station: "AP" for station in topology.stations},
        **kwargs,
    )


class TestSingleStation:
    @pytest.fixture(scope="class")
    def result(self):
        return make_network(1).run(target_exchanges=60)

    def test_first_delay_is_difs_plus_exchange(self, result) -> None:
        """Test that the first packet waits one DIFS and one full exchange"""
        assert round(result.metrics.per_packet_delays[0] * 1e9) == DIFS_NS + EXCHANGE_NS == 191_531

    def test_every_delay_is_difs_plus_exchange(self, result) -> None:
        """Test that each packet is sent after one idle DIFS, so the delay CDF is a single step"""
        delays = {round(delay * 1e9) for delay in result.metrics.per_packet_delays}

        assert delays == {DIFS_NS + EXCHANGE_NS}

    def test_post_backoff_adds_whole_backoff_slots(self) -> None:
        """Test that with post-backoff every later packet adds between 0 and 15 backoff slots"""
        result = make_network(1, post_backoff=True).run(target_exchanges=60)

        extras = [round(delay * 1e9) - 191_531 for delay in result.metrics.per_packet_delays[1:]]
        assert all(extra % SLOT_NS == 0 and 0 <= extra // SLOT_NS <= 15 for extra in extras)
        assert len(set(extras)) > 1

    def test_no_contention(self, result) -> None:
        """Test that a lone station never collides"""
        metrics = result.metrics
        assert metrics.acked_packets == 60
        assert metrics.rts_attempts == 60
        assert metrics.rts_collisions == 0
        assert metrics.acked_payload_bits == 60 * 8184

    def test_single_packet_traffic_stops_after_one_exchange(self) -> None:
        """Test that single-packet traffic runs dry after the first ACK"""
        network = make_network(1, traffic=TrafficMode.SINGLE_PACKET)

        result = network.run(until=10_000_000)

        assert result.metrics.acked_packets == 1
        assert network.stations["STA0"].state.phase is StationPhase.IDLE_WAIT
        assert network.receivers["AP"].phase is ReceiverPhase.LISTENING

    def test_ran_dry_without_horizon_ends_at_last_activity(self) -> None:
        """Test that a run that runs out of events reports the time of the last frame"""
        network = make_network(1, traffic=TrafficMode.SINGLE_PACKET)

        result = network.run(target_exchanges=5)

        assert result.end_time == 191_531
        assert result.metrics.sim_duration == pytest.approx(191_531e-9)


class TestTwoStationCollision:
    @pytest.fixture
    def network(self) -> Network:
        return make_network(2, record_decisions=True)

    def test_simultaneous_rts_collide(self, network: Network) -> None:
        """Test that two stations starting together collide on a single band and double their window"""
        result = network.run(until=60_000)

        assert result.decisions[0][0] == 28_000 + 1_000 + 3_989
        assert result.decisions[0][2].outcome is ApOutcome.ALL_COLLIDED
        assert result.metrics.rts_attempts == 2
        assert result.metrics.rts_collisions == 2
        for station in network.stations.values():
            assert station.state.cw.cw == 32
            assert station.state.phase is StationPhase.BACKOFF
            assert station.countdown_start == 32_989 + DIFS_NS

    def test_no_cts_after_total_collision(self) -> None:
        """Test that nothing is transmitted between the collision and the CTS timeout"""
        network = make_network(2, record_trace=True)

        result = network.run(until=56_314)

        sent = [r.detail for r in result.trace if r.kind == EventKind.TRANSMISSION_START.value and r.detail.startswith("tx")]
        assert sent == ["tx RTS>AP@0", "tx RTS>AP@0"]


class TestSaturatedCell:
    def test_same_seed_same_trace(self) -> None:
        """Test that two runs with one seed produce identical traces"""
        first = make_network(5, n_bands=2, seed=42, record_trace=True).run(until=20_000_000)
        second = make_network(5, n_bands=2, seed=42, record_trace=True).run(until=20_000_000)

        assert first.trace.dumps() == second.trace.dumps()
        assert first.metrics == second.metrics

    def test_one_cts_per_grant(self) -> None:
        """Test that every grant is answered by exactly one CTS on all bands"""
        network = make_network(8, n_bands=3, seed=7, record_trace=True, record_decisions=True)

        result = network.run(until=30_000_000)

        cts_sent = [
            r
            for r in result.trace
            if r.kind == EventKind.TRANSMISSION_START.value and r.detail.startswith("tx CTS")
        ]
        grants = [d for t, _, d in result.decisions if d.outcome is ApOutcome.GRANT and t + 10_000 <= result.end_time]
        assert len(cts_sent) == len(grants)
        assert all(r.detail.endswith("@0;1;2") for r in cts_sent)
        assert result.metrics.cts_collisions == 0
        assert result.metrics.data_collisions == 0

    def test_wide_rts_spans(self) -> None:
        """Test that stations with two-band RTS still complete exchanges"""
        network = make_network(3, n_bands=4, spans={"STA0": 2, "STA1": 3}, post_backoff=True)

        result = network.run(target_exchanges=200)

        assert result.metrics.acked_packets == 200
        assert set(result.metrics.acked_bits_by_station) == {"STA0", "STA1", "STA2"}

    def test_last_winner_keeps_the_medium(self) -> None:
        """Test that without post-backoff the last winner resends before any frozen countdown completes a slot"""
        collector = MetricsCollector(payload_bits=8184, warmup=50)

        result = make_network(5, collector=collector).run(target_exchanges=200)

        assert len(result.metrics.acked_bits_by_station) == 1
        assert result.metrics.rts_collisions == 0
        assert {round(delay * 1e9) for delay in result.metrics.per_packet_delays} == {DIFS_NS + EXCHANGE_NS}

    def test_throughput_below_back_to_back_bound(self) -> None:
        """Test that measured throughput stays below one exchange per DIFS plus exchange"""
        result = make_network(10, n_bands=2, seed=3).run(target_exchanges=500)

        throughput = result.metrics.acked_payload_bits / result.metrics.sim_duration
        assert throughput <= 8184 / ((DIFS_NS + EXCHANGE_NS) * 1e-9)

    def test_run_requires_a_stop_rule(self) -> None:
        """Test that a run needs a target or a horizon"""
        with pytest.raises(ValueError):
            make_network(1).run()

    def test_unknown_destination_raises(self) -> None:
        """Test that stations must address an access point"""
        topology = cell(2)

        with pytest.raises(ValueError):
            Network(topology, BandPlan(1), PhyParams().timings(), SeededRandom(1), {"STA0": "STA1", "STA1": "AP"})


class TestNav:
    def test_later_expiry_wins(self) -> None:
        """Test that a shorter NAV never shortens an active one"""
        network = make_network(2)
        station = network.stations["STA1"]

        network.apply_nav(station, 100_000, 0)
        network.apply_nav(station, 20_000, 10_000)

        assert station.state.nav_until == 100_000

    def test_nav_disabled_is_ignored(self) -> None:
        """Test that apply_nav does nothing when virtual carrier sense is off"""
        network = make_network(2, nav_enabled=False)
        station = network.stations["STA1"]

        network.apply_nav(station, 100_000, 0)

        assert station.state.nav_until == 0


class TestCarrierSense:
    def test_medium_tracks_the_exchange(self) -> None:
        """Test that the shared medium reports busy during the DATA and idle once the ACK is through"""
        network = make_network(1, traffic=TrafficMode.SINGLE_PACKET)
        network.schedule_arrival("STA0", 0)

        network.scheduler.run_until(100_000)

        assert network.medium.carrier_sense("STA0", 100_000) is ChannelState.BUSY
        assert network.medium.carrier_sense("AP", 100_000) is ChannelState.BUSY

        network.scheduler.run_until(200_000)

        assert network.medium.carrier_sense("STA0", 200_000) is ChannelState.IDLE
        assert network.medium.carrier_sense("AP", 200_000) is ChannelState.IDLE
        assert network.medium.active == []

    def test_unknown_station_arrival_raises(self) -> None:
        """Test that packets can only be handed to known stations"""
        with pytest.raises(ValueError):
            make_network(1).schedule_arrival("AP", 0)


class TestFrameIds:
    def test_every_network_numbers_its_own_frames(self) -> None:
        """Test that frame ids start at zero in each network and follow creation order"""
        for _ in range(2):
            result = make_network(1, record_decisions=True).run(target_exchanges=3)

            assert [decision.decoded[0].frame_id for _, _, decision in result.decisions] == [0, 4, 8]

from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbcsma.engine.randomness import SeededRandom
from mbcsma.errors import ConfigurationError
from mbcsma.mac.contention import (
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
from mbcsma.phy.channel import BandPlan, ChannelState


@pytest.fixture
def station() -> StationState:
    station = StationState(id="STA0", destination="AP")
    station.queue.append(0)
    return station


class TestContentionWindow:
    def test_defaults(self) -> None:
        """Test that the window starts at cw_min"""
        window = ContentionWindow()

        assert (window.cw, window.cw_min, window.cw_max) == (16, 16, 1024)
        assert window.stage == 0

    def test_double_clamps_at_cw_max(self) -> None:
        """Test that doubling stops at cw_max"""
        window = ContentionWindow(cw=1024)

        window.double()

        assert window.cw == 1024
        assert window.stage == 6

    @pytest.mark.parametrize("cw_min, cw_max, key", [(0, 16, "cw_min"), (16, 8, "cw_max"), (16, 48, "cw_max")])
    def test_invalid_bounds_raise(self, cw_min: int, cw_max: int, key: str) -> None:
        """Test that cw_max must be cw_min times a power of two"""
        with pytest.raises(ConfigurationError) as exc_info:
            ContentionWindow(cw_min=cw_min, cw_max=cw_max)

        assert exc_info.value.key == key

    @given(st.lists(st.booleans(), max_size=40))
    def test_window_stays_on_the_ladder(self, failures: list) -> None:
        """Test that any sequence of failures and successes keeps cw in {16 * 2^k} up to 1024"""
        window = ContentionWindow()
        for failed in failures:
            if failed:
                window.double()
            else:
                window.reset()

            assert window.cw in {16, 32, 64, 128, 256, 512, 1024}


class TestBackoff:
    def test_first_draw_is_below_cw_min(self, station: StationState) -> None:
        """Test that the first backoff is drawn from [0, 15]"""
        rng = SeededRandom(5)

        draws = {draw_backoff(station, rng).backoff_counter for _ in range(400)}

        assert draws <= set(range(16))
        assert station.phase is StationPhase.BACKOFF

    def test_three_idle_slots_reach_zero(self, station: StationState) -> None:
        """Test that counter 3 reaches 0 after three idle slots"""
        station.phase, station.backoff_counter = StationPhase.BACKOFF, 3

        for _ in range(3):
            backoff_tick(station, ChannelState.IDLE)

        assert station.backoff_counter == 0

    def test_busy_slot_freezes(self, station: StationState) -> None:
        """Test that a busy slot after one idle slot leaves the counter at 2"""
        station.phase, station.backoff_counter = StationPhase.BACKOFF, 3

        backoff_tick(station, ChannelState.IDLE)
        backoff_tick(station, ChannelState.BUSY)

        assert station.backoff_counter == 2

    def test_tick_outside_backoff_raises(self, station: StationState) -> None:
        """Test that only a station in Backoff counts down"""
        with pytest.raises(ValueError):
            backoff_tick(station, ChannelState.IDLE)

    def test_idle_slots_elapsed(self) -> None:
        """Test whole-slot counting from the countdown start"""
        assert idle_slots_elapsed(28_000, 28_000, 9_000) == 0
        assert idle_slots_elapsed(28_000, 36_999, 9_000) == 0
        assert idle_slots_elapsed(28_000, 37_000, 9_000) == 1
        assert idle_slots_elapsed(28_000, 10_000, 9_000) == 0

    def test_freeze_consumes_completed_slots_only(self, station: StationState) -> None:
        """Test that freezing mid-slot keeps the partial slot"""
        station.phase, station.backoff_counter = StationPhase.BACKOFF, 5

        freeze_backoff(station, 28_000, 28_000 + 2 * 9_000 + 4_000, 9_000)

        assert station.backoff_counter == 3

    def test_freeze_never_goes_negative(self, station: StationState) -> None:
        """Test that a long idle stretch stops at zero"""
        station.phase, station.backoff_counter = StationPhase.BACKOFF, 2

        freeze_backoff(station, 0, 1_000_000, 9_000)

        assert station.backoff_counter == 0


class TestSelectRtsBands:
    def test_single_band(self, station: StationState) -> None:
        """Test that one band always yields band 0"""
        rng = SeededRandom(1)

        assert {select_rts_bands(station, BandPlan(1), rng) for _ in range(20)} == {frozenset({0})}

    def test_uniform_over_five_bands(self, station: StationState) -> None:
        """Test that span 1 over five bands picks each band about a fifth of the time"""
        rng = SeededRandom(2024)
        draws = 100_000

        counts = Counter(select_rts_bands(station, BandPlan(5), rng) for _ in range(draws))

        assert len(counts) == 5
        for block in counts:
            assert counts[block] / draws == pytest.approx(0.2, abs=0.01)

    def test_span_two_uses_contiguous_blocks(self, station: StationState) -> None:
        """Test that span 2 over five bands draws among the four contiguous blocks"""
        station.rts_band_span = 2
        rng = SeededRandom(9)

        blocks = {select_rts_bands(station, BandPlan(5), rng) for _ in range(400)}

        assert blocks == {frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3}), frozenset({3, 4})}

    def test_span_above_bands_raises(self, station: StationState) -> None:
        """Test that a span wider than the plan is a configuration error"""
        station.rts_band_span = 3

        with pytest.raises(ConfigurationError):
            select_rts_bands(station, BandPlan(2), SeededRandom(1))

    def test_pending_backoff_raises(self, station: StationState) -> None:
        """Test that bands are only selected once the counter is zero"""
        station.backoff_counter = 1

        with pytest.raises(ValueError):
            select_rts_bands(station, BandPlan(2), SeededRandom(1))


class TestContentionOutcome:
    @pytest.fixture
    def rng(self) -> SeededRandom:
        return SeededRandom(3)

    @pytest.mark.parametrize(
        "outcome", [ContentionOutcome.RTS_COLLIDED, ContentionOutcome.CTS_TIMEOUT, ContentionOutcome.ACK_TIMEOUT]
    )
    def test_failures_double_and_keep_the_packet(self, station: StationState, rng, outcome) -> None:
        """Test that a failed round doubles cw and redraws from the larger window"""
        on_contention_outcome(station, outcome, rng)

        assert station.cw.cw == 32
        assert station.has_packet
        assert station.phase is StationPhase.BACKOFF
        assert 0 <= station.backoff_counter <= 31

    def test_collision_at_cw_max(self, station: StationState, rng) -> None:
        """Test that cw stays at cw_max after another collision"""
        station.cw.cw = 1024

        on_contention_outcome(station, ContentionOutcome.RTS_COLLIDED, rng)

        assert station.cw.cw == 1024

    def test_success_resets_and_dequeues(self, station: StationState, rng) -> None:
        """Test that an acknowledged packet resets cw to cw_min and leaves the queue"""
        station.cw.cw = 64

        on_contention_outcome(station, ContentionOutcome.GRANTED_AND_ACKED, rng)

        assert station.cw.cw == 16
        assert not station.has_packet
        assert station.phase is StationPhase.IDLE_WAIT

    def test_success_draws_no_backoff_for_the_next_packet(self, station: StationState, rng) -> None:
        """Test that a queued follow-up packet waits in IdleWait instead of getting a backoff"""
        station.queue.append(500)
        before = rng.state

        on_contention_outcome(station, ContentionOutcome.GRANTED_AND_ACKED, rng)

        assert list(station.queue) == [500]
        assert station.phase is StationPhase.IDLE_WAIT
        assert station.backoff_counter == 0
        assert rng.state == before

    def test_decoded_not_chosen_resets_but_keeps(self, station: StationState, rng) -> None:
        """Test that a decoded but unchosen RTS resets cw and keeps the packet"""
        station.cw.cw = 128

        on_contention_outcome(station, ContentionOutcome.DECODED_NOT_CHOSEN, rng)

        assert station.cw.cw == 16
        assert station.has_packet
        assert 0 <= station.backoff_counter <= 15

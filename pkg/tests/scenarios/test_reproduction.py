from typing import Dict, Tuple

import pytest

from mbcsma.metrics import RunMetrics, collision_probability, saturation_throughput, throughput_upper_bound
from mbcsma.phy.params import PhyParams
from mbcsma.scenarios import build_saturated_cell, run_scenario

pytestmark = pytest.mark.slow

REDUCED_RUN = {"seed": 1, "target_exchanges": 20_000, "warmup": 1_000}


@pytest.fixture(scope="module")
def post_backoff_cells() -> Dict[Tuple[int, int], RunMetrics]:
    cells = [(50, 1), (50, 2), (50, 5), (100, 1), (100, 5)]
    return {
        (n, bands): run_scenario(build_saturated_cell(n, bands, post_backoff=True, **REDUCED_RUN)).metrics
        for n, bands in cells
    }


class TestReducedSaturationGrid:
    def test_collision_probability_falls_with_bands(self, post_backoff_cells) -> None:
        """Test that 50 stations collide less with every added band, starting near one half on a single band"""
        p1, p2, p5 = (collision_probability(post_backoff_cells[(50, bands)]) for bands in (1, 2, 5))

        assert 0.45 <= p1 <= 0.65
        assert p1 > p2 > p5

    def test_multiband_throughput_gain_is_positive(self, post_backoff_cells) -> None:
        """Test that five bands carry more than one band in a 100-station cell"""
        single = saturation_throughput(post_backoff_cells[(100, 1)])
        multi = saturation_throughput(post_backoff_cells[(100, 5)])

        assert multi > single

    def test_throughput_stays_below_the_back_to_back_bound(self, post_backoff_cells) -> None:
        """Test that no cell exceeds one exchange per DIFS plus exchange"""
        bound = throughput_upper_bound(PhyParams())

        assert all(saturation_throughput(metrics) <= bound for metrics in post_backoff_cells.values())

    def test_without_post_backoff_one_station_holds_the_medium(self) -> None:
        """Test that a busy single-band cell degenerates to one station sending back to back"""
        metrics = run_scenario(build_saturated_cell(50, 1, **REDUCED_RUN)).metrics

        assert len(metrics.acked_bits_by_station) == 1
        assert collision_probability(metrics) == 0.0
        assert saturation_throughput(metrics) == pytest.approx(throughput_upper_bound(PhyParams()), rel=1e-6)

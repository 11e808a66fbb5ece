import argparse
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv import load_dotenv

from mbcsma.metrics import RunMetrics, collision_probability, delay_cdf, gain_percent, saturation_throughput
from mbcsma.scenarios import build_saturated_cell, run_scenario

load_dotenv()

logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


@dataclass
class Check:
    label: str
    measured: float
    reference: str
    passed: bool


def within(value: float, target: float, rel: float) -> bool:
    return abs(value - target) <= rel * target


def run_cells(
    cells: Sequence[Cell], seeds: Sequence[int], exchanges: int, warmup: int, post_backoff: bool
) -> Dict[Cell, List[RunMetrics]]:
    """Run every (stations, bands) cell once per seed."""
    results: Dict[Cell, List[RunMetrics]] = {}
    for n_stations, n_bands in cells:
        for seed in seeds:
            config = build_saturated_cell(
                n_stations,
                n_bands,
                seed=seed,
                target_exchanges=exchanges,
                warmup=warmup,
                post_backoff=post_backoff,
                name="reproduction",
            )
            results.setdefault((n_stations, n_bands), []).append(run_scenario(config).metrics)
    return results


def mean_of(runs: List[RunMetrics], metric: Callable[[RunMetrics], Optional[float]]) -> float:
    return float(np.mean([metric(run) or 0.0 for run in runs]))


def checks_for(results: Dict[Cell, List[RunMetrics]]) -> List[Check]:
    """Collision probability, throughput, multiband gain and p99 delay against the reference saturation results."""
    collision = {cell: mean_of(results[cell], collision_probability) for cell in [(50, 1), (50, 2), (50, 5)]}
    mbits = {cell: mean_of(runs, saturation_throughput) / 1e6 for cell, runs in results.items()}
    p99_ms = {
        cell: mean_of(results[cell], lambda m: delay_cdf(m).quantile(0.99)) * 1e3 for cell in [(100, 1), (100, 4)]
    }
    gain = gain_percent(mbits[(100, 5)], mbits[(100, 1)])
    return [
        Check("collision (50,1)", collision[(50, 1)], "0.50 +- 0.05", abs(collision[(50, 1)] - 0.50) <= 0.05),
        Check("collision (50,2)", collision[(50, 2)], "0.25 +- 0.04", abs(collision[(50, 2)] - 0.25) <= 0.04),
        Check("collision (50,5)", collision[(50, 5)], "< 0.10", collision[(50, 5)] < 0.10),
        Check("throughput (10,5) Mbit/s", mbits[(10, 5)], "25.17 +- 10%", within(mbits[(10, 5)], 25.17, 0.10)),
        Check("throughput (100,2) Mbit/s", mbits[(100, 2)], "21.73 +- 10%", within(mbits[(100, 2)], 21.73, 0.10)),
        Check("throughput (100,5) Mbit/s", mbits[(100, 5)], "25.11 +- 10%", within(mbits[(100, 5)], 25.11, 0.10)),
        Check("gain (100,5) over (100,1) %", gain, "> 40", gain > 40),
        Check("p99 delay (100,1) ms", p99_ms[(100, 1)], "3.13 +- 15%", within(p99_ms[(100, 1)], 3.13, 0.15)),
        Check("p99 delay (100,4) ms", p99_ms[(100, 4)], "1.53 +- 15%", within(p99_ms[(100, 4)], 1.53, 0.15)),
    ]


def main() -> int:
    """
    Run the saturation cells behind the reference collision, throughput and delay figures at reduced scale,
    in both post-success modes, and log measured against reference values.

    :return: 0 if every check passed in some mode, 1 otherwise
    """
    parser = argparse.ArgumentParser(description="Compare reduced-scale saturation runs with reference values")
    parser.add_argument("--exchanges", type=int, default=20_000)
    parser.add_argument("--warmup", type=int, default=1_000)
    parser.add_argument("--seeds", type=int, nargs="+", default=[1, 2])
    args = parser.parse_args()

    cells: List[Cell] = [(50, 1), (50, 2), (50, 5), (10, 5), (100, 1), (100, 2), (100, 4), (100, 5)]
    passed_somewhere: Dict[str, bool] = {}
    for post_backoff in (False, True):
        mode = "post-backoff" if post_backoff else "idle-DIFS restart"
        logger.info(f"Running {len(cells)} cells x {len(args.seeds)} seeds, {args.exchanges} exchanges, {mode}")
        results = run_cells(cells, args.seeds, args.exchanges, args.warmup, post_backoff)
        for check in checks_for(results):
            status = "ok" if check.passed else "MISS"
            logger.info(f"[{mode}] {check.label}: {check.measured:.3f} (reference {check.reference}) {status}")
            passed_somewhere[check.label] = passed_somewhere.get(check.label, False) or check.passed

    missed = [label for label, passed in passed_somewhere.items() if not passed]
    if missed:
        logger.error(f"Not reproduced in either mode: {', '.join(missed)}")
        return 1
    logger.info("Every check was reproduced")
    return 0


if __name__ == "__main__":
    exit(main())

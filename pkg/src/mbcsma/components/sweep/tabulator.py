from collections import defaultdict
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from haystack import component, default_from_dict, default_to_dict, logging

from mbcsma.components.sweep.runner import RunResult
from mbcsma.metrics.statistics import gain_table, summarize

logger = logging.getLogger(__name__)

EXPORT_COLUMNS = [
    "n_stations",
    "n_bands",
    "seed",
    "collision_prob",
    "throughput_bps",
    "delay_p50",
    "p90",
    "p95",
    "p98",
    "p99",
]
GAIN_COLUMNS = [
    "n_stations",
    "n_bands",
    "throughput_gain_pct",
    "delay_gain_p90",
    "delay_gain_p95",
    "delay_gain_p98",
    "delay_gain_p99",
]

MEAN_SEED = "mean"


@component
class MetricsTabulator:
    """
    Turns run results into export records: one per run, then one mean over seeds per
    (stations, bands) cell, plus the gain of each multiband cell over its single-band one.

    A metric that is absent from some runs is averaged over the runs that have it, and
    stays absent when no run has it.
    """

    def __init__(self, include_gains: bool = True):
        """
        :param include_gains: Compute gain rows when the sweep contains single-band cells
        """
        self.include_gains = include_gains

    def to_dict(self) -> Dict[str, Any]:
        return default_to_dict(self, include_gains=self.include_gains)  # type: ignore

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricsTabulator":
        return default_from_dict(cls, data)  # type: ignore

    @staticmethod
    def _record(result: RunResult) -> Dict[str, Any]:
        record: Dict[str, Any] = {"n_stations": result.n_stations, "n_bands": result.n_bands, "seed": result.seed}
        record.update(summarize(result.metrics))
        return record

    @staticmethod
    def _mean(values: List[Optional[float]]) -> Optional[float]:
        present = [v for v in values if v is not None]
        if not present:
            return None
        return float(np.mean(present))

    def _aggregate(self, records: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        cells: Dict[Tuple[int, int], List[Dict[str, Any]]] = defaultdict(list)
        for record in records:
            cells[(record["n_stations"], record["n_bands"])].append(record)

        aggregates = []
        for (n_stations, n_bands), members in sorted(cells.items()):
            aggregate: Dict[str, Any] = {"n_stations": n_stations, "n_bands": n_bands, "seed": MEAN_SEED}
            for column in EXPORT_COLUMNS[3:]:
                aggregate[column] = self._mean([member[column] for member in members])
            aggregates.append(aggregate)
        return aggregates

    @component.output_types(records=List[Dict[str, Any]], aggregates=List[Dict[str, Any]], gains=List[Dict[str, Any]])
    def run(self, results: List[RunResult]) -> dict:
        """
        Tabulate a sweep.

        :param results: Finished runs
        :return: Dictionary with per-run records, per-cell aggregates and gain rows, all sorted
        """
        records = sorted((self._record(r) for r in results), key=lambda r: (r["n_stations"], r["n_bands"], r["seed"]))
        aggregates = self._aggregate(records)
        gains = gain_table(aggregates) if self.include_gains else []
        logger.info(
            "Tabulated {runs} runs into {cells} cells and {gains} gain rows",
            runs=len(records),
            cells=len(aggregates),
            gains=len(gains),
        )
        return {"records": records, "aggregates": aggregates, "gains": gains}

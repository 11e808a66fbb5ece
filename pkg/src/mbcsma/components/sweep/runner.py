from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from haystack import component, default_from_dict, default_to_dict, logging

from mbcsma.errors import SweepAbortedError
from mbcsma.metrics.collector import RunMetrics
from mbcsma.scenarios.config import ScenarioConfig
from mbcsma.scenarios.runner import run_scenario

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Metrics of one finished run, tagged with its sweep coordinates."""

    scenario: str
    n_stations: int
    n_bands: int
    seed: int
    metrics: RunMetrics
    trace_path: Optional[str] = None

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.n_stations, self.n_bands, self.seed)


def trace_file_name(config: ScenarioConfig) -> str:
    return f"{config.name}_n{config.n_stations}_b{config.n_bands}_s{config.seed}.trace"


def execute_run(config: ScenarioConfig, trace_dir: Optional[str] = None) -> RunResult:
    """
    Run one configuration and optionally write its event trace.

    Module-level so that worker processes can unpickle it.
    """
    result = run_scenario(config, record_trace=trace_dir is not None)
    trace_path = None
    if trace_dir is not None:
        path = Path(trace_dir) / trace_file_name(config)
        result.trace.write(path)
        trace_path = str(path)
    return RunResult(
        scenario=config.name,
        n_stations=config.n_stations,
        n_bands=config.n_bands,
        seed=config.seed,
        metrics=result.metrics,
        trace_path=trace_path,
    )


@component
class SimulationRunner:
    """
    Executes the planned runs, in-process or on a pool of worker processes.

    Runs are independent, each with its own seeded generator, so the pool size never
    changes the results. The first failing run stops the sweep: with `raise_on_failure`
    a `SweepAbortedError` carries the runs finished so far, otherwise they are returned
    together with the error messages.

    ### Usage example
    ```python
    runner = SimulationRunner(workers=4)
    results = runner.run(configs=configs)["results"]
    ```
    """

    def __init__(self, workers: int = 1, raise_on_failure: bool = True, trace_dir: Optional[str] = None):
        """
        Initialize the component.

        :param workers: Number of worker processes; 1 runs everything in the calling process
        :param raise_on_failure: If True, a failing run raises instead of being reported in `errors`
        :param trace_dir: Directory that receives one event trace per run
        """
        self.workers = workers
        self.raise_on_failure = raise_on_failure
        self.trace_dir = trace_dir

    def to_dict(self) -> Dict[str, Any]:
        """
        Serialize the component to a dictionary.

        :returns: Dictionary with serialized data.
        """
        return default_to_dict(  # type: ignore
            self,
            workers=self.workers,
            raise_on_failure=self.raise_on_failure,
            trace_dir=self.trace_dir,
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimulationRunner":
        return default_from_dict(cls, data)  # type: ignore

    def _fail(self, config: ScenarioConfig, error: BaseException, results: List[RunResult]) -> str:
        message = f"Run ({config.n_stations}, {config.n_bands}, {config.seed}) of {config.name} failed: {error}"
        if self.raise_on_failure:
            raise SweepAbortedError(message, partial_results=sorted(results, key=lambda r: r.key)) from error
        logger.warning(message)
        return message

    def _run_serial(self, configs: List[ScenarioConfig]) -> tuple[List[RunResult], List[str]]:
        results: List[RunResult] = []
        for index, config in enumerate(configs, start=1):
            try:
                results.append(execute_run(config, self.trace_dir))
            except Exception as e:
                return results, [self._fail(config, e, results)]
            logger.info("Completed run {index}/{total}", index=index, total=len(configs))
        return results, []

    def _run_pool(self, configs: List[ScenarioConfig]) -> tuple[List[RunResult], List[str]]:
        results: List[RunResult] = []
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            futures: List[Future] = [executor.submit(execute_run, config, self.trace_dir) for config in configs]
            for index, (config, future) in enumerate(zip(configs, futures), start=1):
                try:
                    results.append(future.result())
                except Exception as e:
                    for pending in futures:
                        pending.cancel()
                    return results, [self._fail(config, e, results)]
                logger.info("Completed run {index}/{total}", index=index, total=len(configs))
        return results, []

    @component.output_types(results=List[RunResult], errors=List[str])
    def run(self, configs: List[ScenarioConfig]) -> dict:
        """
        Execute every configuration.

        :param configs: Runs to execute
        :return: Dictionary with the finished runs sorted by (stations, bands, seed) and the error messages
        :raises SweepAbortedError: If a run fails and `raise_on_failure` is set
        """
        if self.workers > 1 and len(configs) > 1:
            results, errors = self._run_pool(configs)
        else:
            results, errors = self._run_serial(configs)
        return {"results": sorted(results, key=lambda r: r.key), "errors": errors}

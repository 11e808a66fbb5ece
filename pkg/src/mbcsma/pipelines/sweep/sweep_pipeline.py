from typing import Optional

from haystack import Pipeline

from mbcsma.components.sweep.planner import SweepPlanner
from mbcsma.components.sweep.runner import SimulationRunner
from mbcsma.components.sweep.tabulator import MetricsTabulator
from mbcsma.components.writers.results_writer import ResultsWriter


def get_sweep_pipeline(
    output_path: str = "results.csv",
    file_format: str = "csv",
    workers: int = 1,
    trace_dir: Optional[str] = None,
    traffic: str = "Saturation",
    raise_on_failure: bool = False,
) -> Pipeline:
    """
    Planner -> runner -> tabulator -> writer. Run it with `{"planner": {"spec": spec}}`;
    the writer's `paths` and the runner's `errors` are the pipeline outputs.
    """
    pipeline = Pipeline(metadata={"inputs": {"spec": ["planner.spec"]}, "outputs": {"paths": "writer.paths"}})
    pipeline.add_component("planner", SweepPlanner(traffic=traffic))
    pipeline.add_component(
        "runner", SimulationRunner(workers=workers, raise_on_failure=raise_on_failure, trace_dir=trace_dir)
    )
    pipeline.add_component("tabulator", MetricsTabulator())
    pipeline.add_component("writer", ResultsWriter(output_path=output_path, file_format=file_format))

    pipeline.connect("planner.configs", "runner.configs")
    pipeline.connect("runner.results", "tabulator.results")
    pipeline.connect("tabulator.records", "writer.records")
    pipeline.connect("tabulator.aggregates", "writer.aggregates")
    pipeline.connect("tabulator.gains", "writer.gains")
    return pipeline

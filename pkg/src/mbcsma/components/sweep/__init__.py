from mbcsma.components.sweep.planner import OutputFormat, SweepPlanner, SweepSpec, plan_sweep
from mbcsma.components.sweep.runner import RunResult, SimulationRunner, execute_run
from mbcsma.components.sweep.tabulator import EXPORT_COLUMNS, GAIN_COLUMNS, MetricsTabulator

__all__ = [
    "EXPORT_COLUMNS",
    "GAIN_COLUMNS",
    "MetricsTabulator",
    "OutputFormat",
    "RunResult",
    "SimulationRunner",
    "SweepPlanner",
    "SweepSpec",
    "execute_run",
    "plan_sweep",
]

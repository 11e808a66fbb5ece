from mbcsma.components.sweep import MetricsTabulator, SimulationRunner, SweepPlanner
from mbcsma.components.writers import ResultsWriter

__all__ = ["MetricsTabulator", "ResultsWriter", "SimulationRunner", "SweepPlanner"]

from mbcsma.components.writers.results_writer import ResultsWriter, gains_path

__all__ = ["ResultsWriter", "gains_path"]

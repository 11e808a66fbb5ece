from mbcsma.pipelines.sweep.sweep_pipeline import get_sweep_pipeline

__all__ = ["get_sweep_pipeline"]

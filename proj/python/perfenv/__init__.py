"""Cutoff-line racing over replayed performance profiles."""

from ._core import (
    QualityMatrix,
    RacingResult,
    SplpInstance,
    TruthTable,
    ValidationError,
    build_truth,
    cmcs_configurations,
    experiment,
    figure_data,
    generate_splp_instance,
    generate_synthetic,
    load_matrix,
    overlap_fraction,
    overlap_top,
    race,
    save_matrix,
    speedup,
    trace_cmcs,
)

__all__ = [
    "QualityMatrix",
    "RacingResult",
    "SplpInstance",
    "TruthTable",
    "ValidationError",
    "build_truth",
    "cmcs_configurations",
    "experiment",
    "figure_data",
    "generate_splp_instance",
    "generate_synthetic",
    "load_matrix",
    "overlap_fraction",
    "overlap_top",
    "race",
    "save_matrix",
    "speedup",
    "trace_cmcs",
]

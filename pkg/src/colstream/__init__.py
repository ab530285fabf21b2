"""Column-streaming convolution engine: schedules, cycle-level simulation and cycle models."""

from .convcore import ConvParams, FeatureMap, FilterSet, conv2d, conv_layer, output_dim
from .cycles import (ComparisonRow, compare_sweep, cycles_baseline, cycles_this_work,
                     padded_elements_baseline)
from .engine import EngineConfig, EngineReport, run_conv, verify_against_oracle
from .mapping import build_schedule, classify_kernel, decompose_column, spare_pe_report
from .priorart import (AcceleratorRecord, builtin_dataset, evaluation_value, normalize,
                       validate_dataset)

__all__ = [
    "AcceleratorRecord", "ComparisonRow", "ConvParams", "EngineConfig", "EngineReport",
    "FeatureMap", "FilterSet", "build_schedule", "builtin_dataset", "classify_kernel",
    "compare_sweep", "conv2d", "conv_layer", "cycles_baseline", "cycles_this_work",
    "decompose_column", "evaluation_value", "normalize", "output_dim",
    "padded_elements_baseline", "run_conv", "spare_pe_report", "validate_dataset",
    "verify_against_oracle",
]

"""Root finding and combinatorial searches over lambda and n."""

from .breakpoints import BreakpointMap, MultimodalCandidate, mode_argmax, mode_breakpoints, scan_multimodal
from .excluded import (
    CeilingSource,
    ExcludedReport,
    check_k_plus_one,
    check_mode_conjecture,
    check_single_interval,
    conjecture_samples,
    conjectured_mode,
    default_n_upper,
    excluded_values,
)
from .roots import DoubleModeResult, first_double_mode, root_rk, unit_root

__all__ = [
    "BreakpointMap",
    "CeilingSource",
    "DoubleModeResult",
    "ExcludedReport",
    "MultimodalCandidate",
    "check_k_plus_one",
    "check_mode_conjecture",
    "check_single_interval",
    "conjecture_samples",
    "conjectured_mode",
    "default_n_upper",
    "excluded_values",
    "first_double_mode",
    "mode_argmax",
    "mode_breakpoints",
    "root_rk",
    "scan_multimodal",
    "unit_root",
]

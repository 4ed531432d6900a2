from .doublepulse import AppendixRates, TimeStructureReport, appendix_rates, verify_time_structure
from .montecarlo import (
    ExperimentConfig,
    PeakSummary,
    RunSummary,
    TacHistogram,
    estimate_ratio,
    simulate_pulse_train,
)

__all__ = [
    "AppendixRates",
    "ExperimentConfig",
    "PeakSummary",
    "RunSummary",
    "TacHistogram",
    "TimeStructureReport",
    "appendix_rates",
    "estimate_ratio",
    "simulate_pulse_train",
    "verify_time_structure",
]

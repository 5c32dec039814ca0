"""Trapped-ion QEC crosstalk simulation."""

from ._core import (  # noqa: F401
    Axis,
    BackendKind,
    Basis,
    CrosstalkMode,
    DenseState,
    LogicalErrorEstimate,
    MeasureResult,
    NoiseParams,
    PauliString,
    RefocusMode,
    Rng,
    StabilizerTableau,
    SteaneExperiment,
    TrialOutcome,
    adaptive_sample,
    channel_rates,
    chi,
    enumerate_paths,
    eps_ct_deph,
    eps_ct_dw,
    eps_ct_int,
    eps_ct_loops,
    eps_ct_ms,
    eps_ct_off,
    log_grid,
    monte_carlo,
    single_qubit_ct_angle,
)

__all__ = [
    "Axis", "BackendKind", "Basis", "CrosstalkMode", "DenseState",
    "LogicalErrorEstimate", "MeasureResult", "NoiseParams", "PauliString",
    "RefocusMode", "Rng", "StabilizerTableau", "SteaneExperiment",
    "TrialOutcome", "adaptive_sample", "channel_rates", "chi",
    "enumerate_paths", "eps_ct_deph", "eps_ct_dw", "eps_ct_int",
    "eps_ct_loops", "eps_ct_ms", "eps_ct_off", "log_grid", "monte_carlo",
    "single_qubit_ct_angle",
]

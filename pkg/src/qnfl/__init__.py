"""Simulator and theory engine for no-free-lunch limits of learning unitary
dynamics from entangled data under incoherent (measurement-only) access."""

__version__ = "0.1.0"

from .dataset import (
    DiagonalState,
    EntangledState,
    TrainingExample,
    expectation_diagonal,
    expectation_general,
    sample_diagonal_state,
    sample_entangled_general,
    sample_orthogonal_family,
)
from .haar import (
    analytic_moment,
    haar_probability_vector,
    haar_state,
    haar_unitary,
    orthonormal_haar_family,
)
from .learner import (
    TrialConfig,
    TrialRecord,
    learn_index,
    measure_mean,
    rho_metric,
    risk_closed_form,
    risk_monte_carlo,
    risk_trace_norm_form,
    run_trial,
)
from .linalg import (
    fidelity_pure,
    kron,
    matmul,
    partial_trace_reference,
    trace_distance_pure,
)
from .rng import Rng
from .sweep import SweepConfig, aggregate_csv, load_sweep_config, records_to_csv, run_sweep
from .theory import (
    BoundInput,
    expected_mean_gap_sq,
    expected_shot_variance,
    formal_branch_switch_m,
    ideal_nfl_bound,
    mean_gap_sq_exact,
    nfl_bound_formal,
    nfl_bound_informal,
    packing_sample,
    projector_overlap_tail,
    shot_variance_exact,
    validate_packing,
)
from .verify import run_suite

__all__ = [
    "Rng",
    "haar_unitary",
    "haar_state",
    "orthonormal_haar_family",
    "haar_probability_vector",
    "analytic_moment",
    "fidelity_pure",
    "trace_distance_pure",
    "matmul",
    "kron",
    "partial_trace_reference",
    "EntangledState",
    "DiagonalState",
    "TrainingExample",
    "sample_entangled_general",
    "sample_diagonal_state",
    "sample_orthogonal_family",
    "expectation_diagonal",
    "expectation_general",
    "TrialConfig",
    "TrialRecord",
    "measure_mean",
    "learn_index",
    "run_trial",
    "rho_metric",
    "risk_closed_form",
    "risk_trace_norm_form",
    "risk_monte_carlo",
    "BoundInput",
    "nfl_bound_formal",
    "nfl_bound_informal",
    "ideal_nfl_bound",
    "formal_branch_switch_m",
    "expected_shot_variance",
    "shot_variance_exact",
    "expected_mean_gap_sq",
    "mean_gap_sq_exact",
    "packing_sample",
    "validate_packing",
    "projector_overlap_tail",
    "SweepConfig",
    "load_sweep_config",
    "run_sweep",
    "records_to_csv",
    "aggregate_csv",
    "run_suite",
    "__version__",
]

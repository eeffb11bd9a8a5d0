"""Bilocal (two-source) Bell inequality tools for pairs of two-qubit states."""

from .correlations import (
    ConstraintViolation,
    CorrelationResult,
    MeasurementStrategy,
    canonical_strategy,
    eval_bloch_general,
    eval_paper_formula,
    eval_trace,
    eval_werner_prime,
    pq_threshold,
    s_value,
)
from .optimizer import OptimizationTrace, PsoConfig, optimize, pso_step, ring_neighborhood
from .qstate import (
    BlochForm,
    StateError,
    bloch_compose,
    bloch_decompose,
    bob_observable,
    pauli,
    ppt_min_eigenvalue,
    qubit_observable,
    spectral_radius,
    werner,
)

__version__ = "0.1.0"

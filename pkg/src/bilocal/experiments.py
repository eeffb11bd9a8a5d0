"""Werner-pair experiments: swarm search over strategies, audit, (p, q) scans.

A strategy is encoded as a 30-vector: components 0-11 hold the raw
``x0, x1, y0, y1`` (normalised on decode), 12-20 hold ``M`` row-major and
21-29 hold ``N`` row-major (rescaled on decode so that Bob's observables
have spectral radius at most one).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from .correlations import (
    BILOCAL_BOUND,
    MeasurementStrategy,
    eval_paper_formula,
    eval_trace,
    eval_werner_prime,
    pq_threshold,
)
from .optimizer import OptimizationTrace, PsoConfig, optimize
from .qstate import PAULI_PAIRS, bloch_decompose, bob_observable, spectral_radius, werner

__all__ = [
    "AuditReport",
    "ENCODING_DIM",
    "HEADLINE_P",
    "HEADLINE_Q",
    "PqCell",
    "REPORTED_SPRIME",
    "audit_reported",
    "decode",
    "decode_batch",
    "encode",
    "paper_objective",
    "paper_objective_batch",
    "reported_strategy",
    "run_paper_experiment",
    "run_trace_experiment",
    "scan_pq",
    "scan_to_csv",
    "trace_objective",
]

ENCODING_DIM = 30
REPORTED_SPRIME = 4.0642
SEPARABLE_LIMIT = Fraction(1, 3)

# printed fractions 3.2/4.1294 and 1/3.1, kept exact
HEADLINE_P = Fraction("3.2") / Fraction("4.1294")
HEADLINE_Q = Fraction(1) / Fraction("3.1")

_DEFAULT_AXIS = np.array([0.0, 0.0, 1.0])


def reported_strategy() -> MeasurementStrategy:
    """The printed optimum, exactly as published (not projected)."""
    text = resources.files("bilocal.data").joinpath("reported_strategy.json").read_text()
    return MeasurementStrategy.from_json(json.loads(text))


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=-1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return np.where(norms > 0, v / safe, _DEFAULT_AXIS)


def _bob_radius(C: np.ndarray) -> np.ndarray:
    ops = np.tensordot(C, PAULI_PAIRS, axes=([-2, -1], [0, 1]))
    return np.max(np.abs(np.linalg.eigvalsh(ops)), axis=-1)


def decode_batch(V) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Project a ``(n, 30)`` batch onto admissible strategies.

    Returns ``(vecs, M, N)`` with ``vecs`` of shape ``(n, 4, 3)`` holding
    unit ``x0, x1, y0, y1`` and ``M``, ``N`` of shape ``(n, 3, 3)``.
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if V.shape[-1] != ENCODING_DIM:
        raise ValueError(f"encoding must have {ENCODING_DIM} components, got {V.shape[-1]}")
    vecs = _normalize_rows(V[:, :12].reshape(-1, 4, 3))
    mats = V[:, 12:].reshape(-1, 2, 3, 3)
    scale = np.maximum(1.0, _bob_radius(mats))
    mats = mats / scale[..., None, None]
    return vecs, mats[:, 0], mats[:, 1]


def decode(v) -> MeasurementStrategy:
    """Admissible strategy for an arbitrary encoding; the identity on admissible ones."""
    vecs, M, N = decode_batch(np.asarray(v, dtype=float).reshape(1, -1))
    x0, x1, y0, y1 = vecs[0]
    return MeasurementStrategy(x0, x1, y0, y1, M[0], N[0])


def encode(strategy: MeasurementStrategy) -> np.ndarray:
    return np.concatenate(
        [strategy.x0, strategy.x1, strategy.y0, strategy.y1, strategy.M.ravel(), strategy.N.ravel()]
    )


_SIGNS = np.array([1.0, -1.0, 1.0])


def paper_objective_batch(V) -> np.ndarray:
    """S' for each row of a ``(n, 30)`` batch of encodings."""
    vecs, M, N = decode_batch(V)
    x0, x1, y0, y1 = (vecs[:, i] for i in range(4))
    Ip = np.sum(_SIGNS * (x0 + x1) * M.sum(axis=2), axis=1) * np.sum(_SIGNS * (y0 + y1), axis=1)
    Jp = np.sum(_SIGNS * (x0 - x1) * N.sum(axis=2), axis=1) * np.sum(_SIGNS * (y0 - y1), axis=1)
    return np.sqrt(np.abs(Ip)) + np.sqrt(np.abs(Jp))


def paper_objective(v) -> float:
    """S' of the decoded strategy (published Werner formula)."""
    return eval_werner_prime(decode(v))[2]


def _check_pq(p: float, q: float) -> None:
    for name, val in (("p", p), ("q", q)):
        if not 0.0 <= val <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {val!r}")


def trace_objective(v, p: float, q: float) -> float:
    """Exact S of the decoded strategy on ``werner(p) (x) werner(q)``."""
    _check_pq(p, q)
    return eval_trace(decode(v), werner(p), werner(q)).S


def run_paper_experiment(config: PsoConfig = PsoConfig()) -> tuple[MeasurementStrategy, float, OptimizationTrace]:
    """Maximise S' from random starts in ``[-1, 1]^30``."""
    best, value, trace = optimize(
        paper_objective_batch, ENCODING_DIM, (-1.0, 1.0), config, vectorized=True
    )
    return decode(best), value, trace


def run_trace_experiment(
    p: float, q: float, config: PsoConfig = PsoConfig()
) -> tuple[MeasurementStrategy, float, OptimizationTrace]:
    """Maximise the exact S on ``werner(p) (x) werner(q)`` with the same encoding and swarm."""
    _check_pq(p, q)
    rho_ab, rho_bc = werner(p), werner(q)

    def objective(v):
        return eval_trace(decode(v), rho_ab, rho_bc, check=False).S

    best, value, trace = optimize(objective, ENCODING_DIM, (-1.0, 1.0), config)
    return decode(best), value, trace


def _rank1_residual(C: np.ndarray) -> float:
    sv = np.linalg.svd(C, compute_uv=False)
    return float(np.linalg.norm(sv[1:]))


@dataclass(frozen=True)
class AuditReport:
    p: float
    q: float
    Sprime_paper: float
    Iprime: float
    Jprime: float
    S_paper_at_pq: float
    S_trace_at_pq: float
    spectral_radius_M: float
    spectral_radius_N: float
    rank1_residual_M: float
    rank1_residual_N: float
    frobenius_M: float
    frobenius_N: float
    formula_gap: float
    pq_threshold: float
    violates_paper: bool
    violates_trace: bool
    ab_entangled: bool
    bc_entangled: bool

    def to_json(self) -> dict:
        return {k: (float(f"{v:.12g}") if isinstance(v, float) else v) for k, v in asdict(self).items()}


def audit_reported(p: float = 1.0, q: float = 1.0) -> AuditReport:
    """Recompute everything derivable from the printed optimum, without projecting it."""
    _check_pq(p, q)
    s = reported_strategy()
    Ip, Jp, Sp = eval_werner_prime(s, check=False)
    one = werner(1.0)
    bf_one = bloch_decompose(one)
    paper_at_one = eval_paper_formula(s, bf_one, bf_one, check=False).S
    trace_at_one = eval_trace(s, one, one, check=False).S
    trace_at_pq = eval_trace(s, werner(float(p)), werner(float(q)), check=False).S
    s_paper = math.sqrt(float(p) * float(q)) * Sp
    return AuditReport(
        p=float(p),
        q=float(q),
        Sprime_paper=Sp,
        Iprime=Ip,
        Jprime=Jp,
        S_paper_at_pq=s_paper,
        S_trace_at_pq=trace_at_pq,
        spectral_radius_M=spectral_radius(bob_observable(s.M)),
        spectral_radius_N=spectral_radius(bob_observable(s.N)),
        rank1_residual_M=_rank1_residual(s.M),
        rank1_residual_N=_rank1_residual(s.N),
        frobenius_M=float(np.linalg.norm(s.M)),
        frobenius_N=float(np.linalg.norm(s.N)),
        formula_gap=abs(paper_at_one - trace_at_one),
        pq_threshold=pq_threshold(Sp),
        violates_paper=bool(Fraction(p) * Fraction(q) > Fraction(pq_threshold(Sp))),
        violates_trace=trace_at_pq > BILOCAL_BOUND,
        ab_entangled=p > SEPARABLE_LIMIT,
        bc_entangled=q > SEPARABLE_LIMIT,
    )


@dataclass(frozen=True)
class PqCell:
    p: float
    q: float
    pq: float
    violates_paper: bool
    violates_trace: bool
    ab_entangled: bool
    bc_entangled: bool

    def to_json(self) -> dict:
        return asdict(self)


def _pq_cell(p, q, Sprime: float, strategy: MeasurementStrategy | None) -> PqCell:
    # exact rational product so cells on the threshold are classified consistently
    pq = Fraction(p) * Fraction(q)
    violates_paper = pq > Fraction(pq_threshold(Sprime))
    violates_trace = False
    if strategy is not None:
        violates_trace = eval_trace(strategy, werner(float(p)), werner(float(q)), check=False).S > BILOCAL_BOUND
    return PqCell(
        p=float(p),
        q=float(q),
        pq=float(pq),
        violates_paper=bool(violates_paper),
        violates_trace=bool(violates_trace),
        ab_entangled=bool(p > SEPARABLE_LIMIT),
        bc_entangled=bool(q > SEPARABLE_LIMIT),
    )


def scan_pq(
    Sprime: float,
    grid_steps: int = 101,
    strategy: MeasurementStrategy | None = None,
    *,
    points=None,
) -> list[PqCell]:
    """Classify a uniform ``grid_steps x grid_steps`` grid over ``[0, 1]^2``.

    ``violates_paper`` tests ``pq > (2 / Sprime)^2``; ``violates_trace``
    evaluates the exact S of ``strategy`` (False when no strategy is given).
    Extra ``(p, q)`` pairs, e.g. exact :class:`~fractions.Fraction` values,
    may be classified instead of the grid by passing ``points``.
    """
    if points is None:
        if grid_steps < 2:
            raise ValueError("grid_steps must be at least 2")
        axis = [Fraction(k, grid_steps - 1) for k in range(grid_steps)]
        points = [(p, q) for p in axis for q in axis]
    return [_pq_cell(p, q, Sprime, strategy) for p, q in points]


SCAN_COLUMNS = ("p", "q", "pq", "violates_paper", "violates_trace", "ab_entangled", "bc_entangled")


def scan_to_csv(cells: list[PqCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for c in cells:
        writer.writerow(
            [f"{c.p:.12g}", f"{c.q:.12g}", f"{c.pq:.12g}"]
            + [str(getattr(c, k)).lower() for k in SCAN_COLUMNS[3:]]
        )
    return buf.getvalue()

"""Bilocal correlators I, J and the score S = sqrt|I| + sqrt|J|.

Three evaluation routes are provided:

* :func:`eval_trace` -- the exact expectation on the 16-dimensional space
  (Alice, Bob-left, Bob-right, Charles).  This is the reference.
* :func:`eval_bloch_general` -- the same quantity contracted from Bloch
  coefficients, ``I = (T_AB^T X)^T M (S_BC Y)``.
* :func:`eval_paper_formula` / :func:`eval_werner_prime` -- the published
  coefficient formula, which factorises into an Alice-Bob bracket times a
  Charles bracket and uses only the row sums of M and N.  It does not agree
  with the trace in general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import BlochForm, bob_observable, check_state, qubit_observable, spectral_radius

__all__ = [
    "BILOCAL_BOUND",
    "ConstraintViolation",
    "CorrelationResult",
    "MeasurementStrategy",
    "canonical_strategy",
    "eval_bloch_general",
    "eval_paper_formula",
    "eval_trace",
    "eval_werner_prime",
    "pq_threshold",
    "s_value",
]

BILOCAL_BOUND = 2.0
UNIT_TOL = 1e-9
EIG_TOL = 1e-9


class ConstraintViolation(ValueError):
    """A measurement strategy is outside the admissible set."""


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class MeasurementStrategy:
    """Settings ``a_x = x_x . sigma``, ``c_z = y_z . sigma`` and Bob's ``b_0``, ``b_1``.

    ``M`` and ``N`` are the coefficient matrices of ``b_0`` and ``b_1`` in the
    basis ``sigma_i (x) sigma_j``.
    """

    x0: np.ndarray
    x1: np.ndarray
    y0: np.ndarray
    y1: np.ndarray
    M: np.ndarray
    N: np.ndarray

    def __post_init__(self):
        for name in ("x0", "x1", "y0", "y1"):
            self._freeze(name, (3,))
        self._freeze("M", (3, 3))
        self._freeze("N", (3, 3))

    def _freeze(self, name, shape):
        arr = np.array(getattr(self, name), dtype=float)
        if arr.shape != shape:
            raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, name, arr)

    def validate(self) -> "MeasurementStrategy":
        """Raise :class:`ConstraintViolation` unless every setting is admissible."""
        for name in ("x0", "x1", "y0", "y1"):
            norm = float(np.linalg.norm(getattr(self, name)))
            if abs(norm - 1.0) > UNIT_TOL:
                raise ConstraintViolation(f"|{name}| = {norm:.12g}, expected 1 (tol {UNIT_TOL:g})")
        for name in ("M", "N"):
            rho = spectral_radius(bob_observable(getattr(self, name)))
            if rho > 1.0 + EIG_TOL:
                raise ConstraintViolation(
                    f"spectral radius of Bob's observable from {name} is {rho:.12g} > 1 (tol {EIG_TOL:g})"
                )
        return self

    def to_json(self) -> dict:
        return {k: getattr(self, k).tolist() for k in ("x0", "x1", "y0", "y1", "M", "N")}

    @classmethod
    def from_json(cls, obj: dict) -> "MeasurementStrategy":
        missing = {"x0", "x1", "y0", "y1", "M", "N"} - set(obj)
        if missing:
            raise ValueError(f"strategy is missing keys: {sorted(missing)}")
        return cls(obj["x0"], obj["x1"], obj["y0"], obj["y1"], obj["M"], obj["N"])


def canonical_strategy() -> MeasurementStrategy:
    """``a, c = (sigma_3 +- sigma_1)/sqrt2``, ``b_0 = sigma_3 (x) sigma_3``, ``b_1 = sigma_1 (x) sigma_1``."""
    h = 1 / math.sqrt(2)
    M = np.zeros((3, 3))
    M[2, 2] = 1.0
    N = np.zeros((3, 3))
    N[0, 0] = 1.0
    return MeasurementStrategy((h, 0, h), (-h, 0, h), (h, 0, h), (-h, 0, h), M, N)


@dataclass(frozen=True)
class CorrelationResult:
    I: float
    J: float
    S: float

    @classmethod
    def from_ij(cls, I: float, J: float) -> "CorrelationResult":
        return cls(float(I), float(J), s_value(I, J))

    def to_json(self) -> dict:
        return {"I": _sig12(self.I), "J": _sig12(self.J), "S": _sig12(self.S)}


def s_value(I: float, J: float) -> float:
    """Bilocal score ``sqrt|I| + sqrt|J|``; bilocal models give at most 2."""
    return math.sqrt(abs(I)) + math.sqrt(abs(J))


def pq_threshold(Sprime: float) -> float:
    """Smallest ``p*q`` for which ``sqrt(pq) * S'`` exceeds 2."""
    if not Sprime > 0:
        raise ValueError(f"S' must be positive, got {Sprime!r}")
    return (BILOCAL_BOUND / Sprime) ** 2


def _check(strategy: MeasurementStrategy, check: bool) -> None:
    if check:
        strategy.validate()


def eval_trace(strategy: MeasurementStrategy, rhoAB, rhoBC, *, check: bool = True) -> CorrelationResult:
    """Exact ``<(a0 + a1) b0 (c0 + c1)>`` and ``<(a0 - a1) b1 (c0 - c1)>`` on ``rhoAB (x) rhoBC``."""
    _check(strategy, check)
    rhoAB = check_state(rhoAB)
    rhoBC = check_state(rhoBC)
    rho = np.kron(rhoAB, rhoBC)
    a0, a1 = qubit_observable(strategy.x0), qubit_observable(strategy.x1)
    c0, c1 = qubit_observable(strategy.y0), qubit_observable(strategy.y1)
    b0, b1 = bob_observable(strategy.M), bob_observable(strategy.N)
    op_i = np.kron(np.kron(a0 + a1, b0), c0 + c1)
    op_j = np.kron(np.kron(a0 - a1, b1), c0 - c1)
    I = np.trace(op_i @ rho).real
    J = np.trace(op_j @ rho).real
    return CorrelationResult.from_ij(I, J)


def eval_bloch_general(
    strategy: MeasurementStrategy, bfAB: BlochForm, bfBC: BlochForm, *, check: bool = True
) -> CorrelationResult:
    """Correlators from Bloch coefficients.

    ``I = sum_ij m_ij (sum_k X_k t_ki) (sum_l s_jl Y_l)`` with
    ``X = x0 + x1`` and ``Y = y0 + y1``; ``J`` likewise with differences
    and ``N``.  Local Bloch vectors drop out because Bob's observables are
    traceless on each factor.
    """
    _check(strategy, check)
    T, S = bfAB.T, bfBC.T
    I = (T.T @ (strategy.x0 + strategy.x1)) @ strategy.M @ (S @ (strategy.y0 + strategy.y1))
    J = (T.T @ (strategy.x0 - strategy.x1)) @ strategy.N @ (S @ (strategy.y0 - strategy.y1))
    return CorrelationResult.from_ij(I, J)


def _paper_bracket(X, T, B, S, Y) -> float:
    alice_bob = X @ T @ B.sum(axis=1)
    charles = np.sum(S @ Y)
    return float(alice_bob * charles)


def eval_paper_formula(
    strategy: MeasurementStrategy, bfAB: BlochForm, bfBC: BlochForm, *, check: bool = True
) -> CorrelationResult:
    """Published coefficient formula.

    ``I = [sum_k X_k sum_i t_ki (sum_j m_ij)] * [sum_k sum_l s_kl Y_l]``.
    Bob's matrix enters only through its row sums, and the Charles bracket
    sums every entry of ``S_BC Y``.  This is the reading under which the
    formula reduces to the published Werner expressions.
    """
    _check(strategy, check)
    X, Xm = strategy.x0 + strategy.x1, strategy.x0 - strategy.x1
    Y, Ym = strategy.y0 + strategy.y1, strategy.y0 - strategy.y1
    I = _paper_bracket(X, bfAB.T, strategy.M, bfBC.T, Y)
    J = _paper_bracket(Xm, bfAB.T, strategy.N, bfBC.T, Ym)
    return CorrelationResult.from_ij(I, J)


def eval_werner_prime(strategy: MeasurementStrategy, *, check: bool = True) -> tuple[float, float, float]:
    """Return ``(I', J', S')`` with ``I = pq I'`` and ``J = pq J'`` for Werner pairs."""
    _check(strategy, check)
    x0, x1, y0, y1 = strategy.x0, strategy.x1, strategy.y0, strategy.y1
    rows_m = strategy.M.sum(axis=1)
    rows_n = strategy.N.sum(axis=1)
    Ip = (
        (x0[0] + x1[0]) * rows_m[0] - (x0[1] + x1[1]) * rows_m[1] + (x0[2] + x1[2]) * rows_m[2]
    ) * ((y0[0] + y1[0]) - (y0[1] + y1[1]) + (y0[2] + y1[2]))
    Jp = (
        (x0[0] - x1[0]) * rows_n[0] - (x0[1] - x1[1]) * rows_n[1] + (x0[2] - x1[2]) * rows_n[2]
    ) * ((y0[0] - y1[0]) - (y0[1] - y1[1]) + (y0[2] - y1[2]))
    return float(Ip), float(Jp), s_value(Ip, Jp)

"""Two-qubit density matrices, their Bloch (Pauli) form, and observables.

Conventions: sigma_1 = X, sigma_2 = Y, sigma_3 = Z in the computational
basis, and the first tensor factor is the first qubit of the pair.  The
correlation matrix is ``T[i, j] = Tr(rho sigma_i (x) sigma_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PAULIS",
    "BlochForm",
    "StateError",
    "bloch_compose",
    "bloch_decompose",
    "bob_observable",
    "check_state",
    "matrix_from_json",
    "matrix_to_json",
    "partial_transpose",
    "pauli",
    "ppt_min_eigenvalue",
    "product_state",
    "qubit_observable",
    "random_state",
    "spectral_radius",
    "werner",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
PAULIS = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULIS.setflags(write=False)

# PAULI_PAIRS[i, j] = sigma_i (x) sigma_j
PAULI_PAIRS = np.einsum("iab,jcd->ijacbd", PAULIS, PAULIS).reshape(3, 3, 4, 4)
PAULI_PAIRS.setflags(write=False)

_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


class StateError(ValueError):
    """Raised when a matrix is not a valid two-qubit density matrix."""


def pauli(i: int) -> np.ndarray:
    """Return the Pauli matrix sigma_i for ``i`` in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise IndexError(f"Pauli index must be 1, 2 or 3, got {i!r}")
    return PAULIS[i - 1].copy()


def check_state(rho, *, psd: bool = True) -> np.ndarray:
    """Validate a 4x4 density matrix and return it as a complex array.

    Parameters
    ----------
    rho : array_like
        Candidate two-qubit density matrix.
    psd : bool
        Also require the smallest eigenvalue to be >= -1e-10.

    Raises
    ------
    StateError
        If the shape, hermiticity, trace or positivity check fails.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise StateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise StateError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        raise StateError(f"trace is {np.trace(rho).real:.3g}, expected 1")
    if psd:
        lmin = np.linalg.eigvalsh(rho)[0]
        if lmin < -PSD_TOL:
            raise StateError(f"matrix is not positive semidefinite (min eigenvalue {lmin:.3g})")
    return rho


def werner(p: float) -> np.ndarray:
    """Werner state ``p |phi+><phi+| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight must lie in [0, 1], got {p!r}")
    return p * np.outer(_PHI_PLUS, _PHI_PLUS.conj()) + (1 - p) * np.eye(4, dtype=complex) / 4


@dataclass(frozen=True)
class BlochForm:
    """Local Bloch vectors ``r`` (first qubit), ``s`` (second qubit) and correlations ``T``."""

    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        for name, shape in (("r", (3,)), ("s", (3,)), ("T", (3, 3))):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls) -> "BlochForm":
        return cls(np.zeros(3), np.zeros(3), np.zeros((3, 3)))

    def to_json(self) -> dict:
        return {"r": self.r.tolist(), "s": self.s.tolist(), "T": self.T.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "BlochForm":
        return cls(obj["r"], obj["s"], obj["T"])


def bloch_decompose(rho) -> BlochForm:
    """Expand a two-qubit state in the Pauli basis.

    ``r_i = Tr(rho sigma_i (x) I)``, ``s_j = Tr(rho I (x) sigma_j)`` and
    ``T_ij = Tr(rho sigma_i (x) sigma_j)``.  Positivity is not required,
    only hermiticity and unit trace.
    """
    rho = check_state(rho, psd=False)
    local_a = np.einsum("iab,cd->iacbd", PAULIS, _I2).reshape(3, 4, 4)
    local_b = np.einsum("ab,icd->iacbd", _I2, PAULIS).reshape(3, 4, 4)
    # Tr(rho A) = sum_{ab} rho[a, b] A[b, a]
    r = np.einsum("ab,iba->i", rho, local_a).real
    s = np.einsum("ab,iba->i", rho, local_b).real
    T = np.einsum("ab,ijba->ij", rho, PAULI_PAIRS).real
    return BlochForm(r, s, T)


def bloch_compose(bf: BlochForm) -> np.ndarray:
    """Rebuild ``rho = (I(x)I + r.sigma(x)I + I(x)s.sigma + sum T_ij sigma_i(x)sigma_j) / 4``.

    The result is Hermitian with unit trace but need not be positive.
    """
    a = qubit_observable(bf.r)
    b = qubit_observable(bf.s)
    rho = np.eye(4, dtype=complex) + np.kron(a, _I2) + np.kron(_I2, b) + bob_observable(bf.T)
    return rho / 4


def partial_transpose(rho) -> np.ndarray:
    """Transpose the second qubit of a 4x4 operator."""
    rho = np.asarray(rho)
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def ppt_min_eigenvalue(rho) -> float:
    """Smallest eigenvalue of the partial transpose; negative iff the state is entangled."""
    rho = check_state(rho)
    return float(np.linalg.eigvalsh(partial_transpose(rho))[0])


def qubit_observable(x) -> np.ndarray:
    """Return ``x . sigma`` for a real 3-vector ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {x.shape}")
    return np.tensordot(x, PAULIS, axes=1)


def bob_observable(C) -> np.ndarray:
    """Return ``sum_ij C_ij sigma_i (x) sigma_j`` for a real 3x3 coefficient matrix."""
    C = np.asarray(C, dtype=float)
    if C.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {C.shape}")
    return np.tensordot(C, PAULI_PAIRS, axes=2)


def spectral_radius(H) -> float:
    """Largest eigenvalue magnitude of a Hermitian matrix."""
    w = np.linalg.eigvalsh(np.asarray(H))
    return float(np.max(np.abs(w)))


def product_state(a, b) -> np.ndarray:
    """``rho_a (x) rho_b`` for single-qubit Bloch vectors ``a`` and ``b``."""
    rho_a = (_I2 + qubit_observable(a)) / 2
    rho_b = (_I2 + qubit_observable(b)) / 2
    return np.kron(rho_a, rho_b)


def random_state(rng: np.random.Generator, rank: int = 4) -> np.ndarray:
    """Random two-qubit density matrix ``G G^dagger / Tr`` with a complex Gaussian ``G``."""
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)

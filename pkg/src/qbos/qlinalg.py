"""Dense complex linear algebra for one- and two-qubit objects.

Conventions used by the whole package:

* two-qubit basis order is |OO>, |OT>, |TO>, |TT| with Alice as the first
  tensor factor (index 0/1 = O/T per player);
* pure linear-algebra identities are trusted to 1e-12, user-supplied
  matrices are gated at 1e-9;
* states and matrices are plain ``numpy`` arrays of ``complex128``.
"""
from __future__ import annotations

import numpy as np

from .errors import NonUnitaryInput

# Basis indices (Alice outcome first).
OO, OT, TO, TT = 0, 1, 2, 3
BASIS_LABELS = ("OO", "OT", "TO", "TT")

ATOL_EXACT = 1e-12   # linear-algebra identities
ATOL_GATE = 1e-9     # unitarity gate for user input

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SXSX = np.kron(SIGMA_X, SIGMA_X)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m, dtype=complex).conj().T


def unitarity_defect(m: np.ndarray) -> float:
    """max-norm of m^dag m - I."""
    m = np.asarray(m, dtype=complex)
    return float(np.abs(dagger(m) @ m - np.eye(m.shape[0])).max())


def require_unitary(m: np.ndarray, tol: float = ATOL_GATE) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise NonUnitaryInput("matrix has non-finite entries")
    defect = unitarity_defect(m)
    if defect > tol:
        raise NonUnitaryInput(f"matrix is not unitary (defect {defect:.3e} > {tol:.0e})")
    return m


def require_state(v: np.ndarray, tol: float = ATOL_GATE) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("state has non-finite amplitudes")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized (|norm-1| = {abs(norm - 1.0):.3e})")
    return v


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor = Alice."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply a unitary to a normalized state.

    The input matrix is gated at 1e-9.  Norm drift above 1e-12 is repaired by
    renormalizing so downstream normalization invariants keep holding; drift
    beyond 1e-6 means the inputs were inconsistent and is an error.
    """
    m = require_unitary(m)
    v = require_state(v)
    w = m @ v
    drift = abs(float(np.linalg.norm(w)) - 1.0)
    if drift > 1e-6:
        raise NonUnitaryInput(f"norm drifted by {drift:.3e} under apply()")
    if drift > ATOL_EXACT:
        w = w / np.linalg.norm(w)
    return w


def overlap_probability(target_index: int, v: np.ndarray) -> float:
    """|amplitude|^2 at a basis index of a normalized state."""
    v = require_state(v)
    return float(abs(v[target_index]) ** 2)


def same_up_to_global_phase(u: np.ndarray, v: np.ndarray) -> float:
    """Fidelity |<u|v>| of two normalized states; 1 means equal up to phase."""
    u = require_state(u)
    v = require_state(v)
    return float(abs(np.vdot(u, v)))


def matrices_equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """|tr(a^dag b)| / n for two n x n unitaries; 1 means equal up to phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(abs(np.trace(dagger(a) @ b)) / a.shape[0])

"""Shared test helpers."""
import math

import numpy as np

from qbos.scheme import StrategyParams, StrategySpace


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random n x n unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_params(rng: np.random.Generator, space: StrategySpace) -> StrategyParams:
    t, f, q = rng.uniform(-math.pi, math.pi, size=3)
    if space is StrategySpace.CLASSICAL:
        return StrategyParams.classical(t)
    if space is StrategySpace.RESTRICTED:
        return StrategyParams.restricted(t, f)
    return StrategyParams.full(t, f, q)


def basis_state(index: int) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[index] = 1.0
    return v

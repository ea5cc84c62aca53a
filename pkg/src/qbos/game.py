"""2x2 bimatrix payoff model with the Battle-of-Sexes special case.

Cells are ordered OO, OT, TO, TT (Alice outcome first).  The Battle of the
Sexes puts (alpha, beta) on OO, (beta, alpha) on TT and (gamma, gamma) on the
mismatched cells, with alpha > beta > gamma strictly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidMass, InvalidOrdering
from .qlinalg import BASIS_LABELS
from .scheme import OutcomeDistribution

OUTCOMES = BASIS_LABELS


@dataclass(frozen=True)
class PayoffMatrix:
    """Per-cell payoffs for both players, ordered OO, OT, TO, TT."""

    alice: tuple[float, float, float, float]
    bob: tuple[float, float, float, float]

    def __post_init__(self):
        for entries in (self.alice, self.bob):
            if len(entries) != 4 or not all(math.isfinite(e) for e in entries):
                raise ValueError(f"payoff entries must be 4 finite numbers, got {entries}")
        object.__setattr__(self, "alice", tuple(float(e) for e in self.alice))
        object.__setattr__(self, "bob", tuple(float(e) for e in self.bob))

    @classmethod
    def from_outcome_map(cls, cells: dict) -> "PayoffMatrix":
        """Build from {"OO": [a, b], ...} with all four outcomes present."""
        missing = set(OUTCOMES) - set(cells)
        extra = set(cells) - set(OUTCOMES)
        if missing or extra:
            raise ValueError(f"payoff map must have exactly the keys {OUTCOMES}")
        return cls(
            alice=tuple(float(cells[o][0]) for o in OUTCOMES),
            bob=tuple(float(cells[o][1]) for o in OUTCOMES),
        )

    def to_outcome_map(self) -> dict:
        return {o: [self.alice[i], self.bob[i]] for i, o in enumerate(OUTCOMES)}

    def alice_array(self) -> np.ndarray:
        return np.array(self.alice, dtype=float)

    def bob_array(self) -> np.ndarray:
        return np.array(self.bob, dtype=float)


@dataclass(frozen=True)
class BosParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not (self.alpha > self.beta > self.gamma):
            raise InvalidOrdering(
                f"need alpha > beta > gamma, got {self.alpha}, {self.beta}, {self.gamma}"
            )


@dataclass(frozen=True)
class PayoffPair:
    alice: float
    bob: float


def bos_matrix(p: BosParams) -> PayoffMatrix:
    """OO -> (alpha, beta), TT -> (beta, alpha), mismatches -> (gamma, gamma)."""
    return PayoffMatrix(
        alice=(p.alpha, p.gamma, p.gamma, p.beta),
        bob=(p.beta, p.gamma, p.gamma, p.alpha),
    )


def expected_payoffs(dist: OutcomeDistribution, m: PayoffMatrix) -> PayoffPair:
    """Probability-weighted sum of the payoff cells."""
    p = dist.as_array()
    return PayoffPair(alice=float(p @ m.alice_array()), bob=float(p @ m.bob_array()))


def reduced_payoffs_max_entangled(p_oo: float, p_tt: float, p: BosParams) -> PayoffPair:
    """Payoffs from the OO/TT masses alone.

    For Battle-of-Sexes matrices the two mismatch cells tie at gamma, so
    $_A = (alpha-gamma) P_OO + (beta-gamma) P_TT + gamma (and the mirrored
    expression for Bob) regardless of how the remaining mass splits.
    """
    if p_oo < 0 or p_tt < 0:
        raise InvalidMass(f"masses must be nonnegative, got {p_oo}, {p_tt}")
    if p_oo + p_tt > 1 + 1e-12:
        raise InvalidMass(f"p_oo + p_tt = {p_oo + p_tt!r} exceeds 1")
    return PayoffPair(
        alice=(p.alpha - p.gamma) * p_oo + (p.beta - p.gamma) * p_tt + p.gamma,
        bob=(p.beta - p.gamma) * p_oo + (p.alpha - p.gamma) * p_tt + p.gamma,
    )


def classical_mixed_payoff(p: BosParams) -> float:
    """Common payoff (alpha*beta - gamma^2) / (alpha + beta - 2*gamma) of the
    interior classical equilibrium."""
    return (p.alpha * p.beta - p.gamma**2) / (p.alpha + p.beta - 2 * p.gamma)

"""Full-SU(2) machinery at maximal entanglement: counter-strategies, outcome
forcing, and the numeric no-equilibrium certificate.

Write the shared state as J|OO> = sum_st C[s,t] |st> with coefficient matrix
C.  Local moves act on C by matrix multiplication:

    (A (x) I) |psi_C> = |psi_{A C}>        (I (x) B) |psi_C> = |psi_{C B^T}>

At delta = pi/2, sqrt(2) C is unitary, so for any Alice move there is a Bob
move with the identical effect on the shared state (and vice versa), and
either player can steer the final state onto any chosen basis outcome.  For a
game whose four cells all sit strictly below the sum of the two players' best
entries, that forcing power contradicts the existence of an equilibrium: the
certificate exhibits, for sampled profiles, a unilateral deviation per player
that collects that player's maximal entry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import game, qlinalg, scheme
from .equilibrium import Player, SearchConfig
from .errors import TrivialGame
from .game import PayoffMatrix, PayoffPair
from .qlinalg import BASIS_LABELS
from .scheme import StrategyParams

MAX_ENTANGLEMENT = math.pi / 2

# margin below which a cell's payoff sum counts as tied with the maximum;
# borderline games are rejected rather than certified
_STRICT_MARGIN = 1e-9


def _target_index(target) -> int:
    if isinstance(target, str):
        try:
            return BASIS_LABELS.index(target.upper())
        except ValueError:
            raise ValueError(f"unknown outcome {target!r}; expected one of {BASIS_LABELS}")
    idx = int(target)
    if not 0 <= idx <= 3:
        raise ValueError(f"outcome index must be 0..3, got {target!r}")
    return idx


def _coeff(state4: np.ndarray) -> np.ndarray:
    """Coefficient matrix C of a two-qubit state (row = Alice index)."""
    return np.asarray(state4, dtype=complex).reshape(2, 2)


def _shared_coeff() -> np.ndarray:
    return _coeff(scheme.initial_state(MAX_ENTANGLEMENT))


def counter_strategy(ua: np.ndarray) -> np.ndarray:
    """The Bob move U with (ua (x) I) J|OO> = (I (x) U) J|OO> up to phase.

    Constructively U = (C^-1 ua C)^T for the shared-state coefficient matrix C.
    """
    ua = qlinalg.require_unitary(ua)
    c = _shared_coeff()
    u = (np.linalg.inv(c) @ ua @ c).T
    defect = qlinalg.unitarity_defect(u)
    if defect > qlinalg.ATOL_EXACT:
        raise AssertionError(f"counter strategy drifted from unitarity ({defect:.3e})")
    return u


def forcing_deviation(opponent: np.ndarray, player: Player, target) -> np.ndarray:
    """A unilateral move driving the final state onto |target> at delta = pi/2.

    Solves V (C U_opp^T) = C_target for Alice and (U_opp C) V^T = C_target for
    Bob, where C_target is the coefficient matrix of J|target>.
    """
    opp = qlinalg.require_unitary(opponent)
    idx = _target_index(target)
    j = scheme.entangling_gate(MAX_ENTANGLEMENT)
    c = _shared_coeff()
    c_target = _coeff(j[:, idx])
    if player is Player.ALICE:
        v = c_target @ np.linalg.inv(c @ opp.T)
    else:
        v = (np.linalg.inv(opp @ c) @ c_target).T
    defect = qlinalg.unitarity_defect(v)
    if defect > qlinalg.ATOL_EXACT:
        raise AssertionError(f"forcing deviation drifted from unitarity ({defect:.3e})")
    return v


@dataclass(frozen=True)
class MaxPayoffs:
    alice_max: float
    bob_max: float


def max_payoff_entries(m: PayoffMatrix) -> MaxPayoffs:
    return MaxPayoffs(alice_max=max(m.alice), bob_max=max(m.bob))


def nontriviality_check(m: PayoffMatrix) -> tuple[bool, tuple[str, ...]]:
    """Cells whose payoff sum sits strictly below alice_max + bob_max.

    The certificate needs every cell strict: any cell attaining the maximal
    sum could host a profile both players are content with.
    """
    mp = max_payoff_entries(m)
    cap = mp.alice_max + mp.bob_max
    strict = tuple(
        BASIS_LABELS[i]
        for i in range(4)
        if m.alice[i] + m.bob[i] < cap - _STRICT_MARGIN
    )
    return len(strict) == 4, strict


@dataclass(frozen=True)
class SampleRecord:
    profile_alice: StrategyParams
    profile_bob: StrategyParams
    payoffs: PayoffPair
    alice_target: str
    alice_deviation: np.ndarray
    alice_payoff_achieved: float
    bob_target: str
    bob_deviation: np.ndarray
    bob_payoff_achieved: float
    refuted_alice: bool
    refuted_bob: bool

    def to_dict(self) -> dict:
        return {
            "profile": {
                "alice": [self.profile_alice.theta, self.profile_alice.phi, self.profile_alice.psi],
                "bob": [self.profile_bob.theta, self.profile_bob.phi, self.profile_bob.psi],
            },
            "payoffs": {"alice": self.payoffs.alice, "bob": self.payoffs.bob},
            "alice_target": self.alice_target,
            "alice_deviation": matrix_entries(self.alice_deviation),
            "alice_payoff_achieved": self.alice_payoff_achieved,
            "bob_target": self.bob_target,
            "bob_deviation": matrix_entries(self.bob_deviation),
            "bob_payoff_achieved": self.bob_payoff_achieved,
            "refuted_alice": self.refuted_alice,
            "refuted_bob": self.refuted_bob,
        }


def matrix_entries(m: np.ndarray) -> list:
    """Nested [re, im] pairs, the wire form used in reports."""
    return [[[float(e.real), float(e.imag)] for e in row] for row in np.asarray(m, complex)]


@dataclass(frozen=True)
class NoNeReport:
    samples: int
    records: tuple[SampleRecord, ...]
    nontrivial: bool
    strict_cells: tuple[str, ...]
    alice_max: float
    bob_max: float
    tolerance: float

    @property
    def refuted_count(self) -> int:
        return sum(1 for r in self.records if r.refuted_alice and r.refuted_bob)

    @property
    def all_refuted(self) -> bool:
        return self.refuted_count == self.samples

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "nontrivial": self.nontrivial,
            "strict_cells": list(self.strict_cells),
            "alice_max": self.alice_max,
            "bob_max": self.bob_max,
            "tolerance": self.tolerance,
            "refuted_count": self.refuted_count,
            "all_refuted": self.all_refuted,
            "records": [r.to_dict() for r in self.records],
        }


def _best_cell(entries: tuple[float, ...]) -> int:
    best = 0
    for i in range(1, 4):
        if entries[i] > entries[best]:
            best = i
    return best


def no_ne_certificate(m: PayoffMatrix, cfg: SearchConfig = SearchConfig(),
                      samples: int = 100) -> NoNeReport:
    """Refute seeded random full-SU(2) profiles by exhibiting forcing deviations.

    Raises TrivialGame when some cell attains the maximal payoff sum, since the
    contradiction argument needs every cell strict.
    """
    nontrivial, strict = nontriviality_check(m)
    if not nontrivial:
        raise TrivialGame(
            f"cells {tuple(c for c in BASIS_LABELS if c not in strict)} attain the "
            "maximal payoff sum; the no-equilibrium argument does not apply"
        )
    mp = max_payoff_entries(m)
    cell_a = _best_cell(m.alice)
    cell_b = _best_cell(m.bob)
    tol = 1e-9

    rng = np.random.default_rng(cfg.seed)
    records = []
    for _ in range(samples):
        angles = rng.uniform(-math.pi, math.pi, size=6)
        pa = StrategyParams.full(*angles[:3])
        pb = StrategyParams.full(*angles[3:])
        ua, ub = scheme.strategy_matrix(pa), scheme.strategy_matrix(pb)
        base = game.expected_payoffs(
            scheme.outcome_distribution(MAX_ENTANGLEMENT, ua, ub), m)

        dev_a = forcing_deviation(ub, Player.ALICE, cell_a)
        got_a = game.expected_payoffs(
            scheme.outcome_distribution(MAX_ENTANGLEMENT, dev_a, ub), m).alice
        dev_b = forcing_deviation(ua, Player.BOB, cell_b)
        got_b = game.expected_payoffs(
            scheme.outcome_distribution(MAX_ENTANGLEMENT, ua, dev_b), m).bob

        records.append(SampleRecord(
            profile_alice=pa,
            profile_bob=pb,
            payoffs=base,
            alice_target=BASIS_LABELS[cell_a],
            alice_deviation=dev_a,
            alice_payoff_achieved=got_a,
            bob_target=BASIS_LABELS[cell_b],
            bob_deviation=dev_b,
            bob_payoff_achieved=got_b,
            refuted_alice=abs(got_a - mp.alice_max) <= tol,
            refuted_bob=abs(got_b - mp.bob_max) <= tol,
        ))
    return NoNeReport(
        samples=samples,
        records=tuple(records),
        nontrivial=True,
        strict_cells=strict,
        alice_max=mp.alice_max,
        bob_max=mp.bob_max,
        tolerance=tol,
    )

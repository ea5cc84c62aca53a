"""The quantization scheme: strategy unitaries, the entangling gate, and the circuit.

A move is the SU(2) matrix

    U(theta, phi, psi) = [[ e^{i(phi+psi)/2} cos(theta/2),  i e^{i(phi-psi)/2} sin(theta/2)],
                          [ i e^{-i(phi-psi)/2} sin(theta/2), e^{-i(phi+psi)/2} cos(theta/2)]]

with three nested strategy spaces: classical play fixes phi = psi = 0,
restricted play ties psi = phi, full play uses all three angles.  The shared
entangling gate is

    J(delta) = exp(i (delta/2) sigma_x (x) sigma_x)
             = cos(delta/2) I + i sin(delta/2) sigma_x (x) sigma_x

so J(0) = I and J(pi/2)|OO> = (|OO> + i|TT>)/sqrt(2).  This functional form is
pinned by a regression test against the closed-form outcome probabilities at
both delta = 0 and delta = pi/2.  The circuit output is
J^dag (U_A (x) U_B) J |OO>.

Angles are normalized into (-pi, pi]; theta = pi is the flip move i sigma_x.
Strategies or states differing by a global phase are the same object; compare
probabilities or use qlinalg.same_up_to_global_phase.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg
from .errors import WrongSpace

# Entanglement is a single knob in [0, pi/2]: 0 decouples the players,
# pi/2 prepares the maximally entangled shared state.
DELTA_MIN = 0.0
DELTA_MAX = math.pi / 2


class StrategySpace(enum.Enum):
    CLASSICAL = "classical"
    RESTRICTED = "restricted"
    FULL_SU2 = "full"

    @property
    def free_angles(self) -> int:
        return {"classical": 1, "restricted": 2, "full": 3}[self.value]


def normalize_angle(x: float) -> float:
    """Reduce an angle modulo 2*pi into (-pi, pi]."""
    r = math.remainder(float(x), math.tau)
    if r <= -math.pi:
        r += math.tau
    return r


@dataclass(frozen=True)
class StrategyParams:
    """A player's move parameters; build via classical()/restricted()/full()."""

    theta: float
    phi: float
    psi: float
    space: StrategySpace

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))
        object.__setattr__(self, "phi", normalize_angle(self.phi))
        object.__setattr__(self, "psi", normalize_angle(self.psi))
        if self.space is StrategySpace.CLASSICAL and (self.phi != 0.0 or self.psi != 0.0):
            raise ValueError("classical strategies require phi = psi = 0")
        if self.space is StrategySpace.RESTRICTED and self.psi != self.phi:
            raise ValueError("restricted strategies require psi = phi")

    @classmethod
    def classical(cls, theta: float) -> "StrategyParams":
        return cls(theta, 0.0, 0.0, StrategySpace.CLASSICAL)

    @classmethod
    def restricted(cls, theta: float, phi: float) -> "StrategyParams":
        phi = normalize_angle(phi)
        return cls(theta, phi, phi, StrategySpace.RESTRICTED)

    @classmethod
    def full(cls, theta: float, phi: float, psi: float) -> "StrategyParams":
        return cls(theta, phi, psi, StrategySpace.FULL_SU2)

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.phi, self.psi], dtype=float)

    def promote(self, space: StrategySpace) -> "StrategyParams":
        """Re-tag into a wider space (the realized unitary is unchanged)."""
        if space is self.space:
            return self
        if self.space.free_angles > space.free_angles:
            raise WrongSpace(f"cannot narrow {self.space.value} to {space.value}")
        if space is StrategySpace.RESTRICTED:
            return StrategyParams.restricted(self.theta, self.phi)
        return StrategyParams.full(self.theta, self.phi, self.psi)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Measurement probabilities over |OO>, |OT>, |TO>, |TT>."""

    p_oo: float
    p_ot: float
    p_to: float
    p_tt: float

    def __post_init__(self):
        values = (self.p_oo, self.p_ot, self.p_to, self.p_tt)
        if any(p < -qlinalg.ATOL_EXACT or p > 1 + qlinalg.ATOL_EXACT for p in values):
            raise ValueError(f"probabilities out of range: {values}")
        if abs(sum(values) - 1.0) > qlinalg.ATOL_EXACT:
            raise ValueError(f"probabilities sum to {sum(values)!r}, not 1")

    @classmethod
    def from_array(cls, p) -> "OutcomeDistribution":
        p = np.asarray(p, dtype=float).reshape(4)
        return cls(*p)

    def as_array(self) -> np.ndarray:
        return np.array([self.p_oo, self.p_ot, self.p_to, self.p_tt], dtype=float)


def require_delta(delta: float) -> float:
    delta = float(delta)
    if not DELTA_MIN <= delta <= DELTA_MAX:
        raise ValueError(f"delta must lie in [0, pi/2], got {delta!r}")
    return delta


def strategy_matrix(p: StrategyParams) -> np.ndarray:
    """The SU(2) matrix realized by the parameters (unit determinant)."""
    c, s = math.cos(p.theta / 2), math.sin(p.theta / 2)
    ep = np.exp(0.5j * (p.phi + p.psi))
    em = np.exp(0.5j * (p.phi - p.psi))
    return np.array(
        [[ep * c, 1j * em * s],
         [1j * em.conjugate() * s, ep.conjugate() * c]]
    )


def entangling_gate(delta: float) -> np.ndarray:
    """J(delta) = cos(delta/2) I + i sin(delta/2) sigma_x (x) sigma_x."""
    delta = require_delta(delta)
    return math.cos(delta / 2) * np.eye(4, dtype=complex) + 1j * math.sin(delta / 2) * qlinalg.SXSX


def initial_state(delta: float) -> np.ndarray:
    """The shared state J(delta)|OO> the players act on."""
    return entangling_gate(delta)[:, qlinalg.OO].copy()


def final_state(delta: float, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    """J^dag (ua (x) ub) J |OO> with both moves gated for unitarity."""
    j = entangling_gate(delta)
    ua = qlinalg.require_unitary(ua)
    ub = qlinalg.require_unitary(ub)
    state = j[:, qlinalg.OO].copy()
    state = qlinalg.apply(qlinalg.tensor(ua, ub), state)
    return qlinalg.apply(qlinalg.dagger(j), state)


def outcome_distribution(delta: float, ua: np.ndarray, ub: np.ndarray) -> OutcomeDistribution:
    """Squared amplitudes of the circuit output state."""
    amps = final_state(delta, ua, ub)
    return OutcomeDistribution.from_array(np.abs(amps) ** 2)


def distribution_from_params(delta: float, pa: StrategyParams, pb: StrategyParams) -> OutcomeDistribution:
    return outcome_distribution(delta, strategy_matrix(pa), strategy_matrix(pb))


def closed_form_unentangled(pa: StrategyParams, pb: StrategyParams) -> OutcomeDistribution:
    """Outcome probabilities at delta = 0; depends on the thetas only.

    P_OO = cos^2(tA/2) cos^2(tB/2)      P_OT = cos^2(tA/2) sin^2(tB/2)
    P_TO = sin^2(tA/2) cos^2(tB/2)      P_TT = sin^2(tA/2) sin^2(tB/2)
    """
    xa, xb = math.cos(pa.theta / 2) ** 2, math.cos(pb.theta / 2) ** 2
    return OutcomeDistribution(
        p_oo=xa * xb,
        p_ot=xa * (1 - xb),
        p_to=(1 - xa) * xb,
        p_tt=(1 - xa) * (1 - xb),
    )


def closed_form_max_entangled(pa: StrategyParams, pb: StrategyParams) -> tuple[float, float]:
    """(P_OO, P_TT) at delta = pi/2 for restricted-space strategies.

    P_OO = cos^2(tA/2) cos^2(tB/2) cos^2(fA+fB)
    P_TT = [sin(tA/2) sin(tB/2) - cos(tA/2) cos(tB/2) sin(fA+fB)]^2

    Valid only for psi = phi moves, so full-SU(2) parameters are rejected
    rather than silently projected.
    """
    for p in (pa, pb):
        if p.space is StrategySpace.FULL_SU2:
            raise WrongSpace("closed_form_max_entangled requires classical or restricted strategies")
    ca, sa = math.cos(pa.theta / 2), math.sin(pa.theta / 2)
    cb, sb = math.cos(pb.theta / 2), math.sin(pb.theta / 2)
    big_phi = pa.phi + pb.phi
    p_oo = (ca * cb * math.cos(big_phi)) ** 2
    p_tt = (sa * sb - ca * cb * math.sin(big_phi)) ** 2
    return p_oo, p_tt

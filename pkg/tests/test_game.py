import math

import numpy as np
import pytest

from qbos import game, scheme
from qbos.errors import InvalidMass, InvalidOrdering
from qbos.game import (
    BosParams,
    PayoffMatrix,
    bos_matrix,
    classical_mixed_payoff,
    expected_payoffs,
    reduced_payoffs_max_entangled,
)
from qbos.scheme import OutcomeDistribution, StrategyParams


def dist(p_oo, p_ot, p_to, p_tt):
    return OutcomeDistribution(p_oo, p_ot, p_to, p_tt)


def test_bos_matrix_placement():
    m = bos_matrix(BosParams(5, 3, 1))
    assert m.alice == (5, 1, 1, 3)
    assert m.bob == (3, 1, 1, 5)
    m = bos_matrix(BosParams(2, 1, 0))
    assert m.alice == (2, 0, 0, 1)
    assert m.bob == (1, 0, 0, 2)


def test_bos_matrix_rejects_bad_ordering():
    with pytest.raises(InvalidOrdering):
        BosParams(3, 3, 1)
    with pytest.raises(InvalidOrdering):
        BosParams(3, 1, 2)


def test_expected_payoffs_pure_and_uniform():
    m = bos_matrix(BosParams(5, 3, 1))
    assert expected_payoffs(dist(1, 0, 0, 0), m) == game.PayoffPair(5, 3)
    assert expected_payoffs(dist(0, 0, 0, 1), m) == game.PayoffPair(3, 5)
    pair = expected_payoffs(dist(0.25, 0.25, 0.25, 0.25), m)
    # hand sum: (5+1+1+3)/4 and (3+1+1+5)/4
    assert pair.alice == pytest.approx(2.5, abs=1e-15)
    assert pair.bob == pytest.approx(2.5, abs=1e-15)


def test_payoff_bounded_by_entries():
    rng = np.random.default_rng(31)
    m = PayoffMatrix(alice=tuple(rng.uniform(-3, 7, 4)), bob=tuple(rng.uniform(-3, 7, 4)))
    for _ in range(100):
        w = rng.dirichlet(np.ones(4))
        pair = expected_payoffs(dist(*w), m)
        assert min(m.alice) - 1e-12 <= pair.alice <= max(m.alice) + 1e-12
        assert min(m.bob) - 1e-12 <= pair.bob <= max(m.bob) + 1e-12


def test_expected_payoffs_linear_in_distribution():
    rng = np.random.default_rng(32)
    m = bos_matrix(BosParams(5, 3, 1))
    for _ in range(100):
        w1, w2 = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        lam = rng.uniform()
        mix = lam * w1 + (1 - lam) * w2
        p1 = expected_payoffs(dist(*w1), m)
        p2 = expected_payoffs(dist(*w2), m)
        pm = expected_payoffs(dist(*mix), m)
        assert abs(pm.alice - (lam * p1.alice + (1 - lam) * p2.alice)) <= 1e-12
        assert abs(pm.bob - (lam * p1.bob + (1 - lam) * p2.bob)) <= 1e-12


def test_reduced_payoffs_endpoints():
    p = BosParams(5, 3, 1)
    assert reduced_payoffs_max_entangled(1, 0, p) == game.PayoffPair(5, 3)
    assert reduced_payoffs_max_entangled(0, 1, p) == game.PayoffPair(3, 5)
    assert reduced_payoffs_max_entangled(0, 0, p) == game.PayoffPair(1, 1)


def test_reduced_payoffs_match_full_expectation_any_split():
    rng = np.random.default_rng(33)
    p = BosParams(5, 3, 1)
    m = bos_matrix(p)
    for _ in range(200):
        p_oo, p_tt = rng.dirichlet(np.ones(3))[:2]
        rest = 1 - p_oo - p_tt
        split = rng.uniform()
        full = expected_payoffs(dist(p_oo, rest * split, rest * (1 - split), p_tt), m)
        reduced = reduced_payoffs_max_entangled(p_oo, p_tt, p)
        assert abs(full.alice - reduced.alice) <= 1e-12
        assert abs(full.bob - reduced.bob) <= 1e-12


def test_reduced_payoffs_rejects_excess_mass():
    with pytest.raises(InvalidMass):
        reduced_payoffs_max_entangled(0.7, 0.5, BosParams(5, 3, 1))
    with pytest.raises(InvalidMass):
        reduced_payoffs_max_entangled(-0.1, 0.5, BosParams(5, 3, 1))


def _interior_profile(p: BosParams) -> tuple[float, float]:
    denom = p.alpha + p.beta - 2 * p.gamma
    t_a = 2 * math.asin(math.sqrt((p.beta - p.gamma) / denom))
    t_b = 2 * math.asin(math.sqrt((p.alpha - p.gamma) / denom))
    return t_a, t_b


def _best_reply_payoff_grid(p: BosParams, theta_opp: float, player_is_alice: bool) -> float:
    """Dense-grid best reply at delta = 0, straight through the circuit formulas."""
    m = bos_matrix(p)
    opp = StrategyParams.classical(theta_opp)
    best = -math.inf
    for theta in np.linspace(0.0, math.pi, 2001):
        mine = StrategyParams.classical(theta)
        d = scheme.closed_form_unentangled(mine if player_is_alice else opp,
                                           opp if player_is_alice else mine)
        pair = expected_payoffs(d, m)
        best = max(best, pair.alice if player_is_alice else pair.bob)
    return best


@pytest.mark.parametrize("abc,expected", [
    ((5, 3, 1), 14 / 6),
    ((2, 1, 0), 2 / 3),
    ((3, 2, 1), 5 / 3),
])
def test_classical_mixed_payoff_values(abc, expected):
    p = BosParams(*abc)
    assert classical_mixed_payoff(p) == pytest.approx(expected, abs=1e-15)

    # oracle: at the interior profile both players are indifferent, so the
    # grid best reply equals the formula value and the profile realizes it
    t_a, t_b = _interior_profile(p)
    d = scheme.closed_form_unentangled(
        StrategyParams.classical(t_a), StrategyParams.classical(t_b))
    pair = expected_payoffs(d, bos_matrix(p))
    assert pair.alice == pytest.approx(expected, abs=1e-12)
    assert pair.bob == pytest.approx(expected, abs=1e-12)
    assert _best_reply_payoff_grid(p, t_b, True) == pytest.approx(expected, abs=1e-6)
    assert _best_reply_payoff_grid(p, t_a, False) == pytest.approx(expected, abs=1e-6)


def test_bos_exchange_symmetry():
    # swapping the players and relabeling OO <-> TT fixes the bimatrix
    rng = np.random.default_rng(34)
    for _ in range(20):
        g, b_margin, a_margin = rng.uniform(0.1, 2, size=3)
        p = BosParams(g + b_margin + a_margin, g + b_margin, g)
        m = bos_matrix(p)
        swap = [3, 2, 1, 0]  # OO<->TT, OT<->TO
        assert tuple(m.bob[i] for i in swap) == m.alice
        assert tuple(m.alice[i] for i in swap) == m.bob


def test_payoff_matrix_outcome_map_round_trip():
    m = bos_matrix(BosParams(5, 3, 1))
    again = PayoffMatrix.from_outcome_map(m.to_outcome_map())
    assert again == m
    with pytest.raises(ValueError):
        PayoffMatrix.from_outcome_map({"OO": [1, 1]})

import json
import math

import numpy as np
import pytest

from conftest import haar_unitary
from qbos import fullspace, qlinalg, scheme
from qbos.equilibrium import Player, SearchConfig
from qbos.errors import TrivialGame
from qbos.fullspace import (
    counter_strategy,
    forcing_deviation,
    max_payoff_entries,
    no_ne_certificate,
    nontriviality_check,
)
from qbos.game import BosParams, PayoffMatrix, bos_matrix, expected_payoffs
from qbos.qlinalg import BASIS_LABELS

HALF_PI = math.pi / 2
M = bos_matrix(BosParams(5, 3, 1))

COORDINATION = PayoffMatrix.from_outcome_map(
    {"OO": [2, 2], "OT": [0, 0], "TO": [0, 0], "TT": [0, 0]})
CONSTANT = PayoffMatrix.from_outcome_map(
    {"OO": [1, 1], "OT": [1, 1], "TO": [1, 1], "TT": [1, 1]})


def shared_state():
    return scheme.initial_state(HALF_PI)


# --- counter strategy ----------------------------------------------------------

def test_counter_of_identity_is_identity():
    u = counter_strategy(np.eye(2))
    assert qlinalg.matrices_equal_up_to_phase(u, np.eye(2)) >= 1 - 1e-12


def test_counter_of_flip_is_i_sigma_y_up_to_phase():
    u = counter_strategy(1j * qlinalg.SIGMA_X)
    assert qlinalg.matrices_equal_up_to_phase(u, -1j * qlinalg.SIGMA_Y) >= 1 - 1e-12


def test_counter_identity_holds_at_state_level():
    rng = np.random.default_rng(61)
    psi = shared_state()
    for _ in range(300):
        ua = haar_unitary(2, rng)
        u = counter_strategy(ua)
        lhs = qlinalg.tensor(ua, qlinalg.I2) @ psi
        rhs = qlinalg.tensor(qlinalg.I2, u) @ psi
        assert qlinalg.same_up_to_global_phase(lhs, rhs) >= 1 - 1e-12
        assert abs(abs(np.linalg.det(u)) - 1.0) <= 1e-12


# --- forcing deviations ----------------------------------------------------------

def test_forcing_bob_to_tt_against_identity():
    v = forcing_deviation(np.eye(2), Player.BOB, "TT")
    assert qlinalg.matrices_equal_up_to_phase(v, np.diag([1j, -1j])) >= 1 - 1e-12


def test_forcing_alice_to_oo_against_identity():
    v = forcing_deviation(np.eye(2), Player.ALICE, "OO")
    assert qlinalg.matrices_equal_up_to_phase(v, np.eye(2)) >= 1 - 1e-12


def test_forcing_reaches_every_outcome():
    rng = np.random.default_rng(62)
    for _ in range(40):
        opp = haar_unitary(2, rng)
        for idx, label in enumerate(BASIS_LABELS):
            va = forcing_deviation(opp, Player.ALICE, label)
            out = scheme.final_state(HALF_PI, va, opp)
            assert qlinalg.overlap_probability(idx, out) >= 1 - 1e-12
            vb = forcing_deviation(opp, Player.BOB, idx)
            out = scheme.final_state(HALF_PI, opp, vb)
            assert qlinalg.overlap_probability(idx, out) >= 1 - 1e-12


def test_forcing_rejects_bad_target():
    with pytest.raises(ValueError):
        forcing_deviation(np.eye(2), Player.BOB, "XY")


# --- payoff bounds and nontriviality ---------------------------------------------

def test_max_payoff_entries():
    assert max_payoff_entries(M) == fullspace.MaxPayoffs(5, 5)
    assert max_payoff_entries(bos_matrix(BosParams(2, 1, 0))) == fullspace.MaxPayoffs(2, 2)
    assert max_payoff_entries(CONSTANT) == fullspace.MaxPayoffs(1, 1)


def test_nontriviality_check():
    ok, strict = nontriviality_check(M)
    assert ok and set(strict) == set(BASIS_LABELS)   # sums 8,2,2,8 all below 10
    ok, strict = nontriviality_check(CONSTANT)
    assert not ok and strict == ()
    ok, strict = nontriviality_check(COORDINATION)
    assert not ok
    assert "OO" not in strict


# --- the certificate ----------------------------------------------------------------

def test_certificate_refutes_all_samples():
    report = no_ne_certificate(M, SearchConfig(seed=3), samples=100)
    assert report.samples == 100
    assert report.all_refuted
    for rec in report.records:
        assert rec.alice_payoff_achieved == pytest.approx(5.0, abs=1e-9)
        assert rec.bob_payoff_achieved == pytest.approx(5.0, abs=1e-9)
        # at least one player strictly gains, so the profile is never stable
        gain = max(rec.alice_payoff_achieved - rec.payoffs.alice,
                   rec.bob_payoff_achieved - rec.payoffs.bob)
        assert gain > 1e-6


def test_certificate_alternative_parameters():
    report = no_ne_certificate(bos_matrix(BosParams(2, 1, 0)), SearchConfig(seed=5), samples=50)
    assert report.all_refuted


def test_certificate_rejects_trivial_games():
    with pytest.raises(TrivialGame):
        no_ne_certificate(COORDINATION, SearchConfig())
    with pytest.raises(TrivialGame):
        no_ne_certificate(CONSTANT, SearchConfig())


def test_certificate_deterministic_bytes():
    r1 = no_ne_certificate(M, SearchConfig(seed=9), samples=40)
    r2 = no_ne_certificate(M, SearchConfig(seed=9), samples=40)
    assert json.dumps(r1.to_dict(), sort_keys=True) == json.dumps(r2.to_dict(), sort_keys=True)


def test_payoff_sum_bound_with_strict_mass():
    # sum identity: $_A + $_B <= alice_max + bob_max, strictly whenever a
    # strict cell carries mass
    rng = np.random.default_rng(63)
    mp = max_payoff_entries(M)
    cap = mp.alice_max + mp.bob_max
    for _ in range(100):
        ua, ub = haar_unitary(2, rng), haar_unitary(2, rng)
        dist = scheme.outcome_distribution(HALF_PI, ua, ub)
        pair = expected_payoffs(dist, M)
        assert pair.alice + pair.bob <= cap + 1e-9
        if dist.as_array().max() >= 1e-9:   # all four cells are strict for M
            assert pair.alice + pair.bob < cap

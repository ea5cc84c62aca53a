import json
import math

import numpy as np
import pytest

from qbos.equilibrium import (
    Player,
    Profile,
    SearchConfig,
    Verdict,
    best_response,
    profile_payoffs,
    search_ne,
    verify_ne,
)
from qbos.game import BosParams, bos_matrix, classical_mixed_payoff, expected_payoffs
from qbos.scheme import StrategyParams, StrategySpace, distribution_from_params

HALF_PI = math.pi / 2
BOS = BosParams(5, 3, 1)
M = bos_matrix(BOS)


def classical_profile(ta, tb):
    return Profile(StrategyParams.classical(ta), StrategyParams.classical(tb))


def restricted_profile(ta, fa, tb, fb):
    return Profile(StrategyParams.restricted(ta, fa), StrategyParams.restricted(tb, fb))


# --- best_response -----------------------------------------------------------

def test_best_response_classical_identity_opponent():
    params, value = best_response(
        0.0, M, StrategyParams.classical(0.0), Player.ALICE, StrategySpace.CLASSICAL)
    assert value == pytest.approx(5.0, abs=1e-9)
    assert abs(params.theta) <= 1e-4


def test_best_response_restricted_identity_opponent():
    params, value = best_response(
        HALF_PI, M, StrategyParams.restricted(0, 0), Player.BOB, StrategySpace.RESTRICTED)
    assert value == pytest.approx(5.0, abs=1e-6)
    # the winning move pushes everything onto TT
    d = distribution_from_params(HALF_PI, StrategyParams.restricted(0, 0), params)
    assert d.p_tt >= 1 - 1e-9


def test_best_response_against_flip():
    # against theta_B = pi the best Alice can do is flip as well, earning beta
    for fb in (0.0, 1.0, -2.0):
        params, value = best_response(
            HALF_PI, M, StrategyParams.restricted(math.pi, fb), Player.ALICE,
            StrategySpace.RESTRICTED)
        assert value == pytest.approx(3.0, abs=1e-9)
        assert abs(abs(params.theta) - math.pi) <= 1e-4


# --- verify_ne ----------------------------------------------------------------

def test_verify_classical_identity_profile():
    cert = verify_ne(0.0, M, classical_profile(0, 0), SearchConfig(epsilon=1e-9))
    assert cert.verdict is Verdict.EQUILIBRIUM
    assert cert.payoffs.alice == pytest.approx(5.0, abs=1e-12)
    assert cert.payoffs.bob == pytest.approx(3.0, abs=1e-12)


def test_verify_broken_identity_at_max_entanglement():
    cert = verify_ne(HALF_PI, M, restricted_profile(0, 0, 0, 0), SearchConfig())
    assert cert.verdict is Verdict.NOT_EQUILIBRIUM
    assert cert.gap_bob == pytest.approx(2.0, abs=1e-9)
    assert cert.gap_alice == pytest.approx(0.0, abs=1e-9)
    assert cert.witness_bob is not None
    replay = distribution_from_params(HALF_PI, cert.profile.alice, cert.witness_bob)
    assert replay.p_tt >= 1 - 1e-12


def test_verify_tilted_equilibrium():
    cert = verify_ne(
        HALF_PI, M, restricted_profile(-HALF_PI, 0.0, HALF_PI, HALF_PI),
        SearchConfig(epsilon=1e-9))
    assert cert.verdict is Verdict.EQUILIBRIUM
    assert cert.payoffs.alice == pytest.approx(3.0, abs=1e-9)
    assert cert.payoffs.bob == pytest.approx(5.0, abs=1e-9)


def test_certificate_verdict_matches_gap_rule():
    rng = np.random.default_rng(51)
    cfg = SearchConfig(grid_points_per_axis=19)
    for _ in range(8):
        prof = restricted_profile(*rng.uniform(-math.pi, math.pi, 4))
        cert = verify_ne(HALF_PI, M, prof, cfg)
        assert cert.is_equilibrium == (max(cert.gap_alice, cert.gap_bob) <= cfg.epsilon)
        if cert.verdict is Verdict.NOT_EQUILIBRIUM:
            assert cert.witness_alice is not None or cert.witness_bob is not None


def test_witness_replay_reproduces_gain():
    cert = verify_ne(HALF_PI, M, restricted_profile(0.3, 0.1, -0.2, 0.4), SearchConfig())
    assert cert.verdict is Verdict.NOT_EQUILIBRIUM
    if cert.witness_alice is not None:
        gain = expected_payoffs(
            distribution_from_params(HALF_PI, cert.witness_alice, cert.profile.bob), M
        ).alice - cert.payoffs.alice
        assert gain == pytest.approx(cert.gap_alice, abs=1e-9)
    if cert.witness_bob is not None:
        gain = expected_payoffs(
            distribution_from_params(HALF_PI, cert.profile.alice, cert.witness_bob), M
        ).bob - cert.payoffs.bob
        assert gain == pytest.approx(cert.gap_bob, abs=1e-9)


def test_replay_soundness_of_certified_payoffs():
    cert = verify_ne(HALF_PI, M, restricted_profile(math.pi, 0.7, math.pi, -0.1),
                     SearchConfig(epsilon=1e-9))
    pay = profile_payoffs(HALF_PI, M, cert.profile)
    assert pay.alice == pytest.approx(cert.payoffs.alice, abs=1e-9)
    assert pay.bob == pytest.approx(cert.payoffs.bob, abs=1e-9)
    assert cert.verdict is Verdict.EQUILIBRIUM   # theta = pi plane member


def test_classical_best_response_matches_analytic_reply():
    # analytic oracle: against weight y on O, the best reply payoff is the
    # better of the two pure replies
    rng = np.random.default_rng(52)
    a, b, g = BOS.alpha, BOS.beta, BOS.gamma
    for _ in range(100):
        tb = rng.uniform(-math.pi, math.pi)
        y = math.cos(tb / 2) ** 2
        analytic = max(a * y + g * (1 - y), g * y + b * (1 - y))
        _, got = best_response(
            0.0, M, StrategyParams.classical(tb), Player.ALICE, StrategySpace.CLASSICAL)
        assert got == pytest.approx(analytic, abs=1e-6)


# --- search_ne ----------------------------------------------------------------

def test_search_classical_finds_three_clusters():
    rep = search_ne(0.0, M, StrategySpace.CLASSICAL, SearchConfig(grid_points_per_axis=25))
    assert len(rep.clusters) == 3
    reps = sorted(
        (cl.representative.profile.alice.theta, cl.representative.profile.bob.theta)
        for cl in rep.clusters
    )
    assert reps[0] == pytest.approx((0.0, 0.0), abs=1e-6)
    t_a = 2 * math.asin(math.sqrt(2 / 6))
    t_b = 2 * math.asin(math.sqrt(4 / 6))
    assert reps[1] == pytest.approx((t_a, t_b), abs=1e-4)
    assert reps[2] == pytest.approx((math.pi, math.pi), abs=1e-3)

    by_pay = {round(cl.payoffs.alice, 6): cl for cl in rep.clusters}
    assert 5.0 in by_pay and 3.0 in by_pay
    interior = [cl for cl in rep.clusters
                if abs(cl.payoffs.alice - classical_mixed_payoff(BOS)) < 1e-6]
    assert len(interior) == 1
    assert interior[0].payoffs.bob == pytest.approx(classical_mixed_payoff(BOS), abs=1e-6)


def test_search_restricted_reports_family():
    rep = search_ne(HALF_PI, M, StrategySpace.RESTRICTED, SearchConfig(grid_points_per_axis=13))
    assert len(rep.accepted) > 0
    assert max(cl.size for cl in rep.clusters) >= 5
    for ap in rep.accepted:
        assert ap.certificate.payoffs.alice == pytest.approx(3.0, abs=1e-6)
        assert ap.certificate.payoffs.bob == pytest.approx(5.0, abs=1e-6)


def test_search_full_space_is_empty():
    rep = search_ne(HALF_PI, M, StrategySpace.FULL_SU2, SearchConfig(grid_points_per_axis=15))
    assert rep.accepted == ()
    assert rep.clusters == ()


def test_search_is_deterministic():
    cfg = SearchConfig(grid_points_per_axis=13)
    r1 = search_ne(HALF_PI, M, StrategySpace.RESTRICTED, cfg)
    r2 = search_ne(HALF_PI, M, StrategySpace.RESTRICTED, cfg)
    assert json.dumps(r1.to_dict(), sort_keys=True) == json.dumps(r2.to_dict(), sort_keys=True)


def test_search_replay_soundness():
    rep = search_ne(HALF_PI, M, StrategySpace.RESTRICTED, SearchConfig(grid_points_per_axis=13))
    for ap in rep.accepted[:20]:
        pay = profile_payoffs(HALF_PI, M, ap.profile)
        assert pay.alice == pytest.approx(ap.certificate.payoffs.alice, abs=1e-9)
        assert pay.bob == pytest.approx(ap.certificate.payoffs.bob, abs=1e-9)


# --- config validation ----------------------------------------------------------

def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(grid_points_per_axis=5)
    with pytest.raises(ValueError):
        SearchConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        SearchConfig(refine_iterations=0)


def test_profile_requires_matching_spaces():
    with pytest.raises(ValueError):
        Profile(StrategyParams.classical(0), StrategyParams.restricted(0, 1))

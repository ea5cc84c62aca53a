"""Best-response oracle, epsilon-Nash verification, and equilibrium search.

A profile is an epsilon-Nash equilibrium when neither player can gain more
than epsilon by a unilateral deviation inside the profile's strategy space.
Gaps are measured against a grid best-response scan (``grid_points_per_axis``
points per free angle on (-pi, pi]) refined by golden-section polish.

``search_ne`` scans a profile grid whose total cell count is at least
``grid_points_per_axis ** 3`` spread evenly over the free profile angles,
bounds every cell's gap from below with coarse best-response tables, verifies
the surviving cells exactly, and additionally polishes a bounded set of
local-minimum seeds with Nelder-Mead so off-grid equilibria (e.g. the interior
classical point) are still reported.  Accepted profiles are clustered by
parameter adjacency (<= 1.5 grid steps per coordinate, wrap-aware).

Classical play is scanned over theta in [0, pi]: theta and -theta realize the
same mixed strategy there, so scanning both signs would double-report every
equilibrium.  Deviation scans still cover (-pi, pi].

Everything here is deterministic: grid order, first-maximum tie-breaks, seed
selection, and the Nelder-Mead polish contain no randomness, so equal configs
produce byte-identical reports.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import game, kernels, scheme
from .game import PayoffMatrix, PayoffPair
from .scheme import StrategyParams, StrategySpace


class Player(enum.Enum):
    ALICE = "alice"
    BOB = "bob"


class Verdict(enum.Enum):
    EQUILIBRIUM = "Equilibrium"
    NOT_EQUILIBRIUM = "NotEquilibrium"


@dataclass(frozen=True)
class Profile:
    alice: StrategyParams
    bob: StrategyParams

    def __post_init__(self):
        if self.alice.space is not self.bob.space:
            raise ValueError("both players of a profile must use the same strategy space")

    @property
    def space(self) -> StrategySpace:
        return self.alice.space

    def free_vector(self) -> np.ndarray:
        d = self.space.free_angles
        return np.concatenate([self.alice.as_array()[:d], self.bob.as_array()[:d]])

    def to_dict(self) -> dict:
        return {"alice": _params_dict(self.alice), "bob": _params_dict(self.bob)}


@dataclass(frozen=True)
class SearchConfig:
    grid_points_per_axis: int = 97
    refine: bool = True
    refine_iterations: int = 200
    epsilon: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.grid_points_per_axis < 9:
            raise ValueError("grid_points_per_axis must be at least 9")
        if self.refine_iterations < 1:
            raise ValueError("refine_iterations must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    def to_dict(self) -> dict:
        return {
            "grid_points_per_axis": self.grid_points_per_axis,
            "refine": self.refine,
            "refine_iterations": self.refine_iterations,
            "epsilon": self.epsilon,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class EquilibriumCertificate:
    profile: Profile
    payoffs: PayoffPair
    gap_alice: float
    gap_bob: float
    epsilon: float
    witness_alice: StrategyParams | None
    witness_bob: StrategyParams | None
    verdict: Verdict

    @property
    def is_equilibrium(self) -> bool:
        return self.verdict is Verdict.EQUILIBRIUM

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.to_dict(),
            "payoffs": {"alice": self.payoffs.alice, "bob": self.payoffs.bob},
            "gap_alice": self.gap_alice,
            "gap_bob": self.gap_bob,
            "epsilon": self.epsilon,
            "witness_alice": None if self.witness_alice is None else _params_dict(self.witness_alice),
            "witness_bob": None if self.witness_bob is None else _params_dict(self.witness_bob),
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class AcceptedProfile:
    """An accepted equilibrium: the grid cell it came from and the verified profile."""

    grid_profile: Profile
    profile: Profile
    certificate: EquilibriumCertificate

    def to_dict(self) -> dict:
        return {
            "grid_profile": self.grid_profile.to_dict(),
            "certificate": self.certificate.to_dict(),
        }


@dataclass(frozen=True)
class EquilibriumCluster:
    members: tuple[AcceptedProfile, ...]
    representative: AcceptedProfile
    payoffs: PayoffPair

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "payoffs": {"alice": self.payoffs.alice, "bob": self.payoffs.bob},
            "representative": self.representative.to_dict(),
            "members": [m.to_dict() for m in self.members],
        }


@dataclass(frozen=True)
class SearchReport:
    delta: float
    space: StrategySpace
    config: SearchConfig
    accepted: tuple[AcceptedProfile, ...]
    clusters: tuple[EquilibriumCluster, ...]
    profile_grid_cells: int
    truncated: bool

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "space": self.space.value,
            "config": self.config.to_dict(),
            "profile_grid_cells": self.profile_grid_cells,
            "truncated": self.truncated,
            "accepted_count": len(self.accepted),
            "clusters": [c.to_dict() for c in self.clusters],
        }


def _params_dict(p: StrategyParams) -> dict:
    return {"theta": p.theta, "phi": p.phi, "psi": p.psi, "space": p.space.value}


def _params_from_triple(triple, space: StrategySpace) -> StrategyParams:
    t, f, q = (scheme.normalize_angle(v) for v in triple)
    if space is StrategySpace.CLASSICAL:
        return StrategyParams.classical(t)
    if space is StrategySpace.RESTRICTED:
        return StrategyParams.restricted(t, f)
    return StrategyParams.full(t, f, q)


def profile_payoffs(delta: float, m: PayoffMatrix, profile: Profile) -> PayoffPair:
    """Payoffs replayed through the explicit circuit evaluator."""
    dist = scheme.distribution_from_params(delta, profile.alice, profile.bob)
    return game.expected_payoffs(dist, m)


def best_response(delta: float, m: PayoffMatrix, opponent: StrategyParams,
                  player: Player, space: StrategySpace,
                  cfg: SearchConfig = SearchConfig()) -> tuple[StrategyParams, float]:
    """Maximize the player's payoff against a fixed opponent inside ``space``.

    Exhaustive grid over the free angles (lowest-lexicographic tie-break),
    then golden-section polish when cfg.refine.  The returned payoff is the
    replayed value of the returned parameters.
    """
    delta = scheme.require_delta(delta)
    entries = m.alice_array() if player is Player.ALICE else m.bob_array()
    triple, value = kernels.best_response(
        delta, entries, opponent.as_array(), player is Player.ALICE,
        space.free_angles, cfg.grid_points_per_axis, cfg.refine, cfg.refine_iterations,
    )
    return _params_from_triple(triple, space), float(value)


def verify_ne(delta: float, m: PayoffMatrix, profile: Profile,
              cfg: SearchConfig = SearchConfig()) -> EquilibriumCertificate:
    """Best-response gaps for both players, clamped at zero, with witnesses."""
    delta = scheme.require_delta(delta)
    pay = profile_payoffs(delta, m, profile)
    wit_a, br_a = best_response(delta, m, profile.bob, Player.ALICE, profile.space, cfg)
    wit_b, br_b = best_response(delta, m, profile.alice, Player.BOB, profile.space, cfg)
    gap_a = max(0.0, br_a - pay.alice)
    gap_b = max(0.0, br_b - pay.bob)
    verdict = Verdict.EQUILIBRIUM if max(gap_a, gap_b) <= cfg.epsilon else Verdict.NOT_EQUILIBRIUM
    return EquilibriumCertificate(
        profile=profile,
        payoffs=pay,
        gap_alice=gap_a,
        gap_bob=gap_b,
        epsilon=cfg.epsilon,
        witness_alice=wit_a if gap_a > 0.0 else None,
        witness_bob=wit_b if gap_b > 0.0 else None,
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# profile-grid search

# coarse best-response tables only reject cells, so their grids can be capped;
# acceptance always goes through an exact polished verify_ne
_TABLE_GRID_CAP = {1: 97, 2: 49, 3: 21}
_NM_BR_GRID = 25          # deviation grid inside the Nelder-Mead objective
_MAX_DIRECT_VERIFY = 4096
_MAX_POLISH_SEEDS = 12
_NM_BAIL_EVALS = 60


class _StopPolish(Exception):
    pass


def _profile_axis_points(n: int, total_free: int) -> int:
    """Per-axis points so the profile grid holds at least n**3 cells."""
    return max(3, math.ceil(n ** (3.0 / total_free) - 1e-9))


def _player_axes(space: StrategySpace, p: int) -> list[np.ndarray]:
    wrap = -math.pi + np.arange(1, p + 1, dtype=float) * (2.0 * math.pi / p)
    if space is StrategySpace.CLASSICAL:
        return [np.linspace(0.0, math.pi, p)]
    return [wrap.copy() for _ in range(space.free_angles)]


def _combos(axes: list[np.ndarray]) -> np.ndarray:
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def _free_to_triples(free: np.ndarray, space: StrategySpace) -> np.ndarray:
    out = np.zeros((free.shape[0], 3))
    out[:, 0] = free[:, 0]
    if space is StrategySpace.RESTRICTED:
        out[:, 1] = free[:, 1]
        out[:, 2] = free[:, 1]
    elif space is StrategySpace.FULL_SU2:
        out[:, 1] = free[:, 1]
        out[:, 2] = free[:, 2]
    return out


def _fold_classical(theta: float) -> float:
    return abs(scheme.normalize_angle(theta))


def _profile_from_free(x: np.ndarray, space: StrategySpace) -> Profile:
    d = space.free_angles
    if space is StrategySpace.CLASSICAL:
        return Profile(
            StrategyParams.classical(_fold_classical(x[0])),
            StrategyParams.classical(_fold_classical(x[d])),
        )
    return Profile(
        _params_from_triple(_triple_of(x[:d], d), space),
        _params_from_triple(_triple_of(x[d:], d), space),
    )


def _triple_of(x, d: int) -> tuple[float, float, float]:
    if d == 1:
        return float(x[0]), 0.0, 0.0
    if d == 2:
        return float(x[0]), float(x[1]), float(x[1])
    return float(x[0]), float(x[1]), float(x[2])


def _local_min_mask(gg: np.ndarray, wrap_axes: list[bool]) -> np.ndarray:
    mask = np.ones_like(gg, dtype=bool)
    for ax, wrap in enumerate(wrap_axes):
        for shift in (1, -1):
            if wrap:
                nb = np.roll(gg, shift, axis=ax)
            else:
                nb = np.full_like(gg, np.inf)
                src = [slice(None)] * gg.ndim
                dst = [slice(None)] * gg.ndim
                if shift == 1:
                    dst[ax], src[ax] = slice(1, None), slice(None, -1)
                else:
                    dst[ax], src[ax] = slice(None, -1), slice(1, None)
                nb[tuple(dst)] = gg[tuple(src)]
            mask &= gg <= nb
    return mask


def _nm_polish(delta: float, m: PayoffMatrix, space: StrategySpace,
               cfg: SearchConfig, x0: np.ndarray, bail_level: float) -> np.ndarray:
    """Nelder-Mead descent on the max best-response gap; returns the best point seen."""
    d = space.free_angles
    ea, eb = m.alice_array(), m.bob_array()
    state = {"x": np.array(x0, dtype=float), "f": np.inf, "evals": 0}

    def objective(x):
        pa3 = _triple_of(x[:d], d)
        pb3 = _triple_of(x[d:], d)
        pay_a = kernels.payoff_one(delta, ea, pa3, pb3)
        pay_b = kernels.payoff_one(delta, eb, pa3, pb3)
        _, br_a = kernels.best_response(delta, ea, pb3, True, d, _NM_BR_GRID,
                                        True, cfg.refine_iterations)
        _, br_b = kernels.best_response(delta, eb, pa3, False, d, _NM_BR_GRID,
                                        True, cfg.refine_iterations)
        f = max(br_a - pay_a, br_b - pay_b, 0.0)
        state["evals"] += 1
        if f < state["f"]:
            state["f"] = f
            state["x"] = np.array(x, dtype=float)
        if state["f"] <= 0.1 * cfg.epsilon:
            raise _StopPolish
        if state["evals"] >= _NM_BAIL_EVALS and state["f"] > bail_level:
            raise _StopPolish
        return f

    try:
        optimize.minimize(
            objective, np.array(x0, dtype=float), method="Nelder-Mead",
            options={"maxiter": cfg.refine_iterations, "xatol": 1e-8, "fatol": 1e-12},
        )
    except _StopPolish:
        pass
    return state["x"]


def search_ne(delta: float, m: PayoffMatrix, space: StrategySpace,
              cfg: SearchConfig = SearchConfig()) -> SearchReport:
    """Scan the profile grid, verify candidate cells, and cluster the equilibria."""
    delta = scheme.require_delta(delta)
    d = space.free_angles
    total_free = 2 * d
    p = _profile_axis_points(cfg.grid_points_per_axis, total_free)
    axes = _player_axes(space, p)
    free = _combos(axes)                      # (k, d) per-player grid
    triples = _free_to_triples(free, space)   # (k, 3)
    k = triples.shape[0]

    n_table = min(cfg.grid_points_per_axis, _TABLE_GRID_CAP[d])
    br_a = kernels.br_table(delta, m.alice_array(), triples, True, d, n_table)
    br_b = kernels.br_table(delta, m.bob_array(), triples, False, d, n_table)

    # payoff fields over (alice combo, bob combo), chunked to bound temporaries
    pay_a = np.empty((k, k))
    pay_b = np.empty((k, k))
    chunk = max(1, 2_000_000 // k)
    for lo in range(0, k, chunk):
        pr = kernels.probs_batch(delta, triples[lo:lo + chunk, None, :],
                                 triples[None, :, :])
        pay_a[lo:lo + chunk] = pr @ m.alice_array()
        pay_b[lo:lo + chunk] = pr @ m.bob_array()
    gap_a = np.clip(br_a[None, :] - pay_a, 0.0, None)
    gap_b = np.clip(br_b[:, None] - pay_b, 0.0, None)
    g = np.maximum(gap_a, gap_b)

    wrap_axes = [space is not StrategySpace.CLASSICAL] * total_free
    step = math.pi / (p - 1) if space is StrategySpace.CLASSICAL else 2.0 * math.pi / p
    steps = [step] * total_free
    gg = g.reshape((p,) * total_free)
    local_min = _local_min_mask(gg, wrap_axes).reshape(-1)
    gflat = g.reshape(-1)

    spread = max(
        float(np.ptp(m.alice_array())),
        float(np.ptp(m.bob_array())),
        1e-30,
    )
    h_max = max(steps)
    tau = max(min(spread * h_max, spread / 20.0), 10.0 * cfg.epsilon)

    def profile_at(flat_idx: int) -> Profile:
        ia, ib = divmod(flat_idx, k)
        return Profile(
            _params_from_triple(triples[ia], space),
            _params_from_triple(triples[ib], space),
        )

    accepted: list[AcceptedProfile] = []

    direct = np.flatnonzero(gflat <= cfg.epsilon)
    truncated = direct.size > _MAX_DIRECT_VERIFY
    if truncated:
        direct = direct[:_MAX_DIRECT_VERIFY]
    for idx in direct:
        prof = profile_at(int(idx))
        cert = verify_ne(delta, m, prof, cfg)
        if cert.is_equilibrium:
            accepted.append(AcceptedProfile(prof, prof, cert))

    # off-grid equilibria are only reachable through the polish stage
    seed_pool = np.flatnonzero(local_min & (gflat > cfg.epsilon) & (gflat <= tau)) \
        if cfg.refine else np.empty(0, dtype=int)
    if seed_pool.size:
        order = np.lexsort((seed_pool, gflat[seed_pool]))
        seed_pool = seed_pool[order][:_MAX_POLISH_SEEDS]
    bail_level = max(1e3 * cfg.epsilon, spread / 20.0)
    for idx in seed_pool:
        ia, ib = divmod(int(idx), k)
        x0 = np.concatenate([free[ia], free[ib]])
        seed_prof = profile_at(int(idx))
        x_best = _nm_polish(delta, m, space, cfg, x0, bail_level)
        prof = _profile_from_free(x_best, space)
        cert = verify_ne(delta, m, prof, cfg)
        if cert.is_equilibrium:
            accepted.append(AcceptedProfile(seed_prof, prof, cert))

    clusters = _cluster(accepted, steps, wrap_axes)
    return SearchReport(
        delta=delta,
        space=space,
        config=cfg,
        accepted=tuple(accepted),
        clusters=clusters,
        profile_grid_cells=k * k,
        truncated=truncated,
    )


def _cluster(accepted: list[AcceptedProfile], steps: list[float],
             wrap_axes: list[bool]) -> tuple[EquilibriumCluster, ...]:
    """Connected components under coordinate-wise adjacency of 1.5 grid steps."""
    n = len(accepted)
    if n == 0:
        return ()
    coords = np.array([ap.profile.free_vector() for ap in accepted])
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    thresholds = np.array([1.5 * h for h in steps])
    for i in range(n):
        diff = np.abs(coords[i + 1 :] - coords[i])
        for ax, wrap in enumerate(wrap_axes):
            if wrap:
                diff[:, ax] = np.minimum(diff[:, ax], 2.0 * math.pi - diff[:, ax])
        near = np.flatnonzero(np.all(diff <= thresholds, axis=1))
        for j in near:
            ri, rj = find(i), find(int(j) + i + 1)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    clusters = []
    for root in groups:
        members = sorted(groups[root], key=lambda i: tuple(coords[i]))
        rep = accepted[members[0]]
        clusters.append(
            EquilibriumCluster(
                members=tuple(accepted[i] for i in members),
                representative=rep,
                payoffs=rep.certificate.payoffs,
            )
        )
    clusters.sort(key=lambda c: tuple(c.representative.profile.free_vector()))
    return tuple(clusters)

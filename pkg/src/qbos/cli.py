"""Command-line front end.

Game files are JSON with a name, an entanglement angle delta (radians,
defaulting to pi/2), and either a Battle-of-Sexes triple or explicit cells:

    {"name": "bos", "delta": 1.5707963267948966,
     "bos": {"alpha": 5, "beta": 3, "gamma": 1}}

    {"name": "custom", "delta": 0.0,
     "payoffs": {"OO": [2, 2], "OT": [0, 0], "TO": [0, 0], "TT": [1, 1]}}

Strategies are given as "theta=<radians>[,phi=<radians>][,psi=<radians>]";
omitted angles are zero, a psi selects the full SU(2) space, a phi alone the
restricted space.  All reports are JSON with round-trip-exact floats; payoff
landscapes are CSV.  Exit codes: 0 success, 1 a reproduction check failed,
2 invalid input, 3 the game fails the no-equilibrium hypothesis.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import fullspace, game, kernels, qlinalg, scheme
from .equilibrium import Profile, SearchConfig, search_ne, verify_ne
from .errors import InvalidMass, InvalidOrdering, NonUnitaryInput, TrivialGame, WrongSpace
from .game import BosParams, PayoffMatrix, bos_matrix, classical_mixed_payoff
from .scheme import StrategyParams, StrategySpace

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_TRIVIAL_GAME = 3

AXIS_NAMES = ("theta_a", "phi_a", "psi_a", "theta_b", "phi_b", "psi_b")

_SPACE_BY_NAME = {
    "classical": StrategySpace.CLASSICAL,
    "restricted": StrategySpace.RESTRICTED,
    "full": StrategySpace.FULL_SU2,
}


@dataclass(frozen=True)
class GameFile:
    name: str
    delta: float
    matrix: PayoffMatrix
    bos: BosParams | None

    def to_json_dict(self) -> dict:
        body: dict = {"name": self.name, "delta": self.delta}
        if self.bos is not None:
            body["bos"] = {"alpha": self.bos.alpha, "beta": self.bos.beta,
                           "gamma": self.bos.gamma}
        else:
            body["payoffs"] = self.matrix.to_outcome_map()
        return body


def load_game_file(path: str) -> GameFile:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("game file must hold a JSON object")
    name = str(raw.get("name", "game"))
    delta = float(raw.get("delta", math.pi / 2))
    delta = scheme.require_delta(delta)
    has_bos = "bos" in raw
    has_payoffs = "payoffs" in raw
    if has_bos == has_payoffs:
        raise ValueError("game file needs exactly one of 'bos' or 'payoffs'")
    if has_bos:
        b = raw["bos"]
        bos = BosParams(float(b["alpha"]), float(b["beta"]), float(b["gamma"]))
        return GameFile(name, delta, bos_matrix(bos), bos)
    matrix = PayoffMatrix.from_outcome_map(raw["payoffs"])
    return GameFile(name, delta, matrix, None)


def dump_game_file(gf: GameFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(gf.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_strategy_arg(text: str) -> StrategyParams:
    """Parse "theta=<x>[,phi=<x>][,psi=<x>]" (radians) into StrategyParams."""
    values: dict[str, float] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad strategy component {part!r}; expected key=value")
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("theta", "phi", "psi"):
            raise ValueError(f"unknown strategy angle {key!r}")
        if key in values:
            raise ValueError(f"duplicate strategy angle {key!r}")
        values[key] = float(val)
    theta = values.get("theta", 0.0)
    if "psi" in values:
        return StrategyParams.full(theta, values.get("phi", 0.0), values["psi"])
    if "phi" in values:
        return StrategyParams.restricted(theta, values["phi"])
    return StrategyParams.classical(theta)


def _common_space(pa: StrategyParams, pb: StrategyParams,
                  requested: str | None) -> StrategySpace:
    widest = max(pa.space, pb.space, key=lambda s: s.free_angles)
    if requested is None:
        return widest
    space = _SPACE_BY_NAME[requested]
    if space.free_angles < widest.free_angles:
        raise ValueError(
            f"--space {requested} cannot hold the given strategies ({widest.value} needed)"
        )
    return space


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _make_config(args) -> SearchConfig:
    return SearchConfig(
        grid_points_per_axis=args.grid,
        epsilon=args.epsilon,
        seed=args.seed,
    )


# ---------------------------------------------------------------------------
# subcommands

def _cmd_payoff(args) -> int:
    gf = load_game_file(args.game)
    pa = parse_strategy_arg(args.alice)
    pb = parse_strategy_arg(args.bob)
    dist = scheme.distribution_from_params(gf.delta, pa, pb)
    pay = game.expected_payoffs(dist, gf.matrix)
    _emit({
        "game": gf.name,
        "delta": gf.delta,
        "alice": {"theta": pa.theta, "phi": pa.phi, "psi": pa.psi},
        "bob": {"theta": pb.theta, "phi": pb.phi, "psi": pb.psi},
        "probabilities": {
            "p_oo": dist.p_oo, "p_ot": dist.p_ot,
            "p_to": dist.p_to, "p_tt": dist.p_tt,
        },
        "payoffs": {"alice": pay.alice, "bob": pay.bob},
    })
    return EXIT_OK


def _cmd_verify_ne(args) -> int:
    gf = load_game_file(args.game)
    pa = parse_strategy_arg(args.alice)
    pb = parse_strategy_arg(args.bob)
    space = _common_space(pa, pb, args.space)
    profile = Profile(pa.promote(space), pb.promote(space))
    cert = verify_ne(gf.delta, gf.matrix, profile, _make_config(args))
    _emit({"game": gf.name, "delta": gf.delta, "certificate": cert.to_dict()})
    return EXIT_OK


def _cmd_search_ne(args) -> int:
    gf = load_game_file(args.game)
    report = search_ne(gf.delta, gf.matrix, _SPACE_BY_NAME[args.space], _make_config(args))
    _emit({"game": gf.name, "report": report.to_dict()})
    return EXIT_OK


def _parse_sweep(spec: str) -> tuple[str, float, float, int]:
    name, _, rest = spec.partition("=")
    name = name.strip()
    if name not in AXIS_NAMES:
        raise ValueError(f"unknown sweep axis {name!r}; expected one of {AXIS_NAMES}")
    parts = rest.split(":")
    if len(parts) != 3:
        raise ValueError(f"sweep spec {spec!r} must be axis=start:stop:points")
    start, stop = float(parts[0]), float(parts[1])
    npoints = int(parts[2])
    if npoints < 2:
        raise ValueError("sweep needs at least 2 points")
    return name, start, stop, npoints


def _parse_fixed(text: str | None) -> dict[str, float]:
    out: dict[str, float] = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in AXIS_NAMES:
            raise ValueError(f"unknown fixed axis {key!r}; expected one of {AXIS_NAMES}")
        out[key] = float(val)
    return out


def _cmd_landscape(args) -> int:
    gf = load_game_file(args.game)
    sweeps = [_parse_sweep(s) for s in args.sweep]
    if not 1 <= len(sweeps) <= 2:
        raise ValueError("landscape sweeps over 1 or 2 angles")
    if len(sweeps) == 2 and sweeps[0][0] == sweeps[1][0]:
        raise ValueError("sweep axes must differ")
    fixed = _parse_fixed(args.fixed)
    for name, *_ in sweeps:
        if name in fixed:
            raise ValueError(f"axis {name!r} is both swept and fixed")

    base = {name: 0.0 for name in AXIS_NAMES}
    base.update(fixed)
    grids = [np.linspace(start, stop, n) for _, start, stop, n in sweeps]
    mesh = np.meshgrid(*grids, indexing="ij")
    cols = {name: np.full(mesh[0].shape, value) for name, value in base.items()}
    for (name, *_), values in zip(sweeps, mesh):
        cols[name] = values

    a_params = np.stack([cols["theta_a"], cols["phi_a"], cols["psi_a"]], axis=-1)
    b_params = np.stack([cols["theta_b"], cols["phi_b"], cols["psi_b"]], axis=-1)
    probs = kernels.probs_batch(gf.delta, a_params, b_params)
    pay_a = probs @ gf.matrix.alice_array()
    pay_b = probs @ gf.matrix.bob_array()

    flat_probs = probs.reshape(-1, 4)
    flat_a = pay_a.reshape(-1)
    flat_b = pay_b.reshape(-1)
    sweep_cols = [cols[name].reshape(-1) for name, *_ in sweeps]

    header = [name for name, *_ in sweeps] + [
        "p_oo", "p_ot", "p_to", "p_tt", "payoff_a", "payoff_b"]
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(flat_probs.shape[0]):
            row = [repr(float(c[i])) for c in sweep_cols]
            row += [repr(float(v)) for v in flat_probs[i]]
            row += [repr(float(flat_a[i])), repr(float(flat_b[i]))]
            fh.write(",".join(row) + "\n")
    return EXIT_OK


def _parse_matrix_or_params(text: str) -> np.ndarray:
    text = text.strip()
    if text.startswith("["):
        raw = json.loads(text)
        m = np.array([[complex(e[0], e[1]) for e in row] for row in raw])
        if m.shape != (2, 2):
            raise ValueError("matrix spec must be 2x2 of [re, im] pairs")
        return m
    return scheme.strategy_matrix(parse_strategy_arg(text))


def _cmd_counter(args) -> int:
    ua = _parse_matrix_or_params(args.alice_op)
    u = fullspace.counter_strategy(ua)
    psi = scheme.initial_state(fullspace.MAX_ENTANGLEMENT)
    lhs = qlinalg.tensor(ua, qlinalg.I2) @ psi
    rhs = qlinalg.tensor(qlinalg.I2, u) @ psi
    _emit({
        "alice_op": fullspace.matrix_entries(ua),
        "counter": fullspace.matrix_entries(u),
        "fidelity": qlinalg.same_up_to_global_phase(lhs, rhs),
    })
    return EXIT_OK


def _cmd_no_ne_cert(args) -> int:
    gf = load_game_file(args.game)
    cfg = SearchConfig(seed=args.seed)
    report = fullspace.no_ne_certificate(gf.matrix, cfg, samples=args.samples)
    _emit({"game": gf.name, "report": report.to_dict()})
    return EXIT_OK


def _check(label: str, ok: bool, detail: str, lines: list[str]) -> bool:
    lines.append(f"  [{'ok' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def _cmd_demo(args) -> int:
    bos = BosParams(args.alpha, args.beta, args.gamma)
    m = bos_matrix(bos)
    a, b, c = bos.alpha, bos.beta, bos.gamma
    cfg = SearchConfig(epsilon=1e-9, seed=args.seed)
    lines: list[str] = []
    ok = True

    lines.append(f"Battle of the Sexes with (alpha, beta, gamma) = ({a}, {b}, {c})")
    lines.append("== unentangled play: delta = 0 ==")
    mixed_a = 2 * math.asin(math.sqrt((b - c) / (a + b - 2 * c)))
    mixed_b = 2 * math.asin(math.sqrt((a - c) / (a + b - 2 * c)))
    mixed_pay = classical_mixed_payoff(bos)
    classical_cases = [
        ("both stay", 0.0, 0.0, (a, b)),
        ("both flip", math.pi, math.pi, (b, a)),
        ("interior mix", mixed_a, mixed_b, (mixed_pay, mixed_pay)),
    ]
    for label, ta, tb, expected in classical_cases:
        prof = Profile(StrategyParams.classical(ta), StrategyParams.classical(tb))
        cert = verify_ne(0.0, m, prof, cfg)
        good = cert.is_equilibrium and \
            abs(cert.payoffs.alice - expected[0]) <= 1e-9 and \
            abs(cert.payoffs.bob - expected[1]) <= 1e-9
        ok &= _check(label, good,
                     f"verdict={cert.verdict.value}, payoffs=({cert.payoffs.alice:.6f}, "
                     f"{cert.payoffs.bob:.6f}), expected ({expected[0]:.6f}, {expected[1]:.6f})",
                     lines)

    lines.append("== maximally entangled play: delta = pi/2 ==")
    identity = Profile(StrategyParams.restricted(0.0, 0.0), StrategyParams.restricted(0.0, 0.0))
    cert = verify_ne(math.pi / 2, m, identity, cfg)
    broken = (not cert.is_equilibrium) and abs(cert.gap_bob - (a - b)) <= 1e-9
    if broken and cert.witness_bob is not None:
        replay = scheme.distribution_from_params(
            math.pi / 2, identity.alice, cert.witness_bob)
        broken = replay.p_tt >= 1 - 1e-12
    else:
        broken = False
    ok &= _check("mutual identity breaks", broken,
                 f"verdict={cert.verdict.value}, gap_bob={cert.gap_bob:.9f} "
                 f"(expected {a - b})", lines)

    t_star = 2 * math.asin(math.sqrt((a - b) / (a - c)))
    table = [
        ("flip/flip", math.pi, math.pi),
        ("tilted pair -/+", -t_star, t_star),
        ("tilted pair +/-", t_star, -t_star),
    ]
    for label, ta, tb in table:
        prof = Profile(
            StrategyParams.restricted(ta, math.pi / 4),
            StrategyParams.restricted(tb, math.pi / 4),
        )
        cert = verify_ne(math.pi / 2, m, prof, cfg)
        good = cert.is_equilibrium and \
            abs(cert.payoffs.alice - b) <= 1e-9 and abs(cert.payoffs.bob - a) <= 1e-9
        ok &= _check(label, good,
                     f"verdict={cert.verdict.value}, payoffs=({cert.payoffs.alice:.6f}, "
                     f"{cert.payoffs.bob:.6f}), expected ({float(b)}, {float(a)})",
                     lines)

    lines.append("== full SU(2) play: delta = pi/2 ==")
    report = fullspace.no_ne_certificate(m, cfg, samples=args.samples)
    ok &= _check("every sampled profile refuted", report.all_refuted,
                 f"{report.refuted_count}/{report.samples} profiles refuted "
                 f"(both forcing deviations reach the per-player maxima)", lines)

    print("\n".join(lines))
    print("RESULT:", "all checks passed" if ok else "some checks FAILED")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser / dispatch

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbos",
        description="Quantum Battle of the Sexes: payoffs, equilibria, certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_search_flags(p):
        p.add_argument("--grid", type=int, default=97,
                       help="grid points per deviation axis (default 97)")
        p.add_argument("--epsilon", type=float, default=1e-6,
                       help="equilibrium tolerance (default 1e-6)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")

    p = sub.add_parser("payoff", help="outcome probabilities and payoffs for a profile")
    p.add_argument("game")
    p.add_argument("--alice", required=True, help='e.g. "theta=0.5,phi=0.1"')
    p.add_argument("--bob", required=True)
    p.set_defaults(func=_cmd_payoff)

    p = sub.add_parser("verify-ne", help="epsilon-Nash certificate for a profile")
    p.add_argument("game")
    p.add_argument("--alice", required=True)
    p.add_argument("--bob", required=True)
    p.add_argument("--space", choices=sorted(_SPACE_BY_NAME), default=None)
    add_search_flags(p)
    p.set_defaults(func=_cmd_verify_ne)

    p = sub.add_parser("search-ne", help="scan a strategy space for equilibria")
    p.add_argument("game")
    p.add_argument("--space", choices=sorted(_SPACE_BY_NAME), required=True)
    add_search_flags(p)
    p.set_defaults(func=_cmd_search_ne)

    p = sub.add_parser("landscape", help="export payoff/probability sweeps as CSV")
    p.add_argument("game")
    p.add_argument("--sweep", action="append", required=True,
                   help="axis=start:stop:points (repeat for a 2D sweep)")
    p.add_argument("--fixed", default=None, help="comma-separated axis=value list")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_landscape)

    p = sub.add_parser("counter", help="Bob-side counter strategy of an Alice move")
    p.add_argument("--alice-op", required=True,
                   help='strategy angles or a JSON 2x2 matrix of [re, im] pairs')
    p.set_defaults(func=_cmd_counter)

    p = sub.add_parser("no-ne-cert", help="no-equilibrium certificate at delta = pi/2")
    p.add_argument("game")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_no_ne_cert)

    p = sub.add_parser("demo", help="reproduce the headline equilibrium structure")
    p.add_argument("--alpha", type=float, default=5.0)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrivialGame as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRIVIAL_GAME
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError,
            InvalidOrdering, InvalidMass, WrongSpace, NonUnitaryInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

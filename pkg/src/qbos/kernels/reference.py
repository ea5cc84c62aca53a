"""NumPy/pure-Python backend for the hot kernels.

Semantics are shared with the compiled backend, operation for operation:

* strategy parameters travel as (theta, phi, psi) triples; a free-angle
  vector of length ``dims`` expands as (t,0,0), (t,f,f) or (t,f,q) for the
  classical / restricted / full spaces;
* deviation grids put n points on (-pi, pi]: -pi + j*(2*pi/n), j = 1..n,
  scanned row-major over (theta, phi, psi) so the first grid maximum is the
  lexicographically lowest one;
* refinement is cyclic per-coordinate golden-section ascent on a bracket of
  one grid step, keeping the best strictly-improving point, stopping when a
  full cycle improves by < 1e-12 or the cycle cap is hit.  Returned values
  are always replays of the returned parameters.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_XTOL = 1e-11
CYCLE_FTOL = 1e-12

# broadcast tensors in br_table are chunked to roughly this many evaluations
_CHUNK_EVALS = 4_000_000


def axis_values(n: int) -> np.ndarray:
    """The n deviation-grid points on (-pi, pi]."""
    return -math.pi + np.arange(1, n + 1, dtype=float) * (2.0 * math.pi / n)


def free_to_triple(x, dims: int) -> tuple[float, float, float]:
    """Expand a free-angle vector to a (theta, phi, psi) triple."""
    if dims == 1:
        return float(x[0]), 0.0, 0.0
    if dims == 2:
        return float(x[0]), float(x[1]), float(x[1])
    return float(x[0]), float(x[1]), float(x[2])


def mesh_triples(values: np.ndarray, dims: int) -> np.ndarray:
    """All grid (theta, phi, psi) triples, row-major over the free axes."""
    grids = np.meshgrid(*([values] * dims), indexing="ij")
    flat = [g.reshape(-1) for g in grids]
    n = flat[0].size
    out = np.zeros((n, 3))
    out[:, 0] = flat[0]
    if dims >= 2:
        out[:, 1] = flat[1]
        out[:, 2] = flat[1] if dims == 2 else flat[2]
    return out


def probs_batch(delta: float, a_params, b_params) -> np.ndarray:
    """Outcome probabilities for (..., 3) angle arrays; broadcasts, returns (..., 4)."""
    a = np.asarray(a_params, dtype=float)
    b = np.asarray(b_params, dtype=float)
    ta, fa, qa = a[..., 0], a[..., 1], a[..., 2]
    tb, fb, qb = b[..., 0], b[..., 1], b[..., 2]

    ca, sa = np.cos(ta / 2), np.sin(ta / 2)
    cb, sb = np.cos(tb / 2), np.sin(tb / 2)
    epa = np.exp(0.5j * (fa + qa))
    ema = np.exp(0.5j * (fa - qa))
    epb = np.exp(0.5j * (fb + qb))
    emb = np.exp(0.5j * (fb - qb))

    # columns of each player's move: a_o = U|O>, a_t = U|T>
    a_o0, a_o1 = epa * ca, 1j * ema.conj() * sa
    a_t0, a_t1 = 1j * ema * sa, epa.conj() * ca
    b_o0, b_o1 = epb * cb, 1j * emb.conj() * sb
    b_t0, b_t1 = 1j * emb * sb, epb.conj() * cb

    cd, sd = math.cos(delta / 2), math.sin(delta / 2)
    m00 = cd * a_o0 * b_o0 + 1j * sd * a_t0 * b_t0
    m01 = cd * a_o0 * b_o1 + 1j * sd * a_t0 * b_t1
    m10 = cd * a_o1 * b_o0 + 1j * sd * a_t1 * b_t0
    m11 = cd * a_o1 * b_o1 + 1j * sd * a_t1 * b_t1

    o00 = cd * m00 - 1j * sd * m11
    o01 = cd * m01 - 1j * sd * m10
    o10 = cd * m10 - 1j * sd * m01
    o11 = cd * m11 - 1j * sd * m00
    return np.stack(
        [np.abs(o00) ** 2, np.abs(o01) ** 2, np.abs(o10) ** 2, np.abs(o11) ** 2],
        axis=-1,
    )


def probs_one(delta: float, a, b) -> tuple[float, float, float, float]:
    """Scalar path of probs_batch (plain math, no array overhead)."""
    ta, fa, qa = float(a[0]), float(a[1]), float(a[2])
    tb, fb, qb = float(b[0]), float(b[1]), float(b[2])

    ca, sa = math.cos(ta / 2), math.sin(ta / 2)
    cb, sb = math.cos(tb / 2), math.sin(tb / 2)
    epa = cmath.exp(0.5j * (fa + qa))
    ema = cmath.exp(0.5j * (fa - qa))
    epb = cmath.exp(0.5j * (fb + qb))
    emb = cmath.exp(0.5j * (fb - qb))

    a_o0, a_o1 = epa * ca, 1j * ema.conjugate() * sa
    a_t0, a_t1 = 1j * ema * sa, epa.conjugate() * ca
    b_o0, b_o1 = epb * cb, 1j * emb.conjugate() * sb
    b_t0, b_t1 = 1j * emb * sb, epb.conjugate() * cb

    cd, sd = math.cos(delta / 2), math.sin(delta / 2)
    m00 = cd * a_o0 * b_o0 + 1j * sd * a_t0 * b_t0
    m01 = cd * a_o0 * b_o1 + 1j * sd * a_t0 * b_t1
    m10 = cd * a_o1 * b_o0 + 1j * sd * a_t1 * b_t0
    m11 = cd * a_o1 * b_o1 + 1j * sd * a_t1 * b_t1

    o00 = cd * m00 - 1j * sd * m11
    o01 = cd * m01 - 1j * sd * m10
    o10 = cd * m10 - 1j * sd * m01
    o11 = cd * m11 - 1j * sd * m00
    return (
        o00.real**2 + o00.imag**2,
        o01.real**2 + o01.imag**2,
        o10.real**2 + o10.imag**2,
        o11.real**2 + o11.imag**2,
    )


def payoff_one(delta: float, entries, a, b) -> float:
    """One player's expected payoff for a single profile."""
    p = probs_one(delta, a, b)
    return (
        float(entries[0]) * p[0]
        + float(entries[1]) * p[1]
        + float(entries[2]) * p[2]
        + float(entries[3]) * p[3]
    )


def br_table(delta, entries, opponents, is_alice, dims, n_grid) -> np.ndarray:
    """Best deviation-grid payoff against each opponent triple (no polish)."""
    entries = np.asarray(entries, dtype=float)
    opp = np.asarray(opponents, dtype=float).reshape(-1, 3)
    own = mesh_triples(axis_values(n_grid), dims)
    out = np.empty(opp.shape[0])
    chunk = max(1, _CHUNK_EVALS // own.shape[0])
    for lo in range(0, opp.shape[0], chunk):
        block = opp[lo : lo + chunk]
        if is_alice:
            pr = probs_batch(delta, own[:, None, :], block[None, :, :])
        else:
            pr = probs_batch(delta, block[None, :, :], own[:, None, :])
        # own-strategy axis broadcasts to axis 0 either way
        out[lo : lo + block.shape[0]] = (pr @ entries).max(axis=0)
    return out


def _eval_free(delta, entries, x, opp, is_alice, dims) -> float:
    own = free_to_triple(x, dims)
    return payoff_one(delta, entries, own, opp) if is_alice else payoff_one(delta, entries, opp, own)


def _golden_axis(fun, x, ax, h, best_val):
    """Golden-section ascent in one coordinate on [x[ax]-h, x[ax]+h]."""
    best_x = x[ax]
    lo, hi = best_x - h, best_x + h
    c = hi - INV_GOLDEN * (hi - lo)
    d = lo + INV_GOLDEN * (hi - lo)
    fc = fun(x[:ax] + [c] + x[ax + 1 :])
    fd = fun(x[:ax] + [d] + x[ax + 1 :])
    if fc > best_val:
        best_val, best_x = fc, c
    if fd > best_val:
        best_val, best_x = fd, d
    while hi - lo > GOLDEN_XTOL:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - INV_GOLDEN * (hi - lo)
            fc = fun(x[:ax] + [c] + x[ax + 1 :])
            if fc > best_val:
                best_val, best_x = fc, c
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_GOLDEN * (hi - lo)
            fd = fun(x[:ax] + [d] + x[ax + 1 :])
            if fd > best_val:
                best_val, best_x = fd, d
    out = list(x)
    out[ax] = best_x
    return out, best_val


def best_response(delta, entries, opponent, is_alice, dims, n_grid,
                  refine=True, max_cycles=200):
    """Grid scan plus optional golden polish; returns ((theta, phi, psi), payoff)."""
    entries = np.asarray(entries, dtype=float)
    opp = tuple(float(v) for v in np.asarray(opponent, dtype=float).reshape(3))
    values = axis_values(n_grid)
    own = mesh_triples(values, dims)
    if is_alice:
        grid_vals = probs_batch(delta, own, np.array(opp)) @ entries
    else:
        grid_vals = probs_batch(delta, np.array(opp), own) @ entries
    k = int(np.argmax(grid_vals))
    idx = np.unravel_index(k, (n_grid,) * dims)
    x = [float(values[i]) for i in idx]

    def fun(xv):
        return _eval_free(delta, entries, xv, opp, is_alice, dims)

    best_val = fun(x)
    if refine:
        h = 2.0 * math.pi / n_grid
        for _ in range(max_cycles):
            before = best_val
            for ax in range(dims):
                x, best_val = _golden_axis(fun, x, ax, h, best_val)
            if best_val - before < CYCLE_FTOL:
                break
    return free_to_triple(x, dims), best_val

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled backend for the hot kernels.

Same contract as qbos.kernels.reference: grid points -pi + j*2pi/n (j=1..n),
row-major (theta, phi, psi) scan order with first-maximum tie-breaking, and
golden-section polish that only accepts strict improvements.

Grid scans hoist the fixed opponent's column amplitudes out of the loop and
factor the scanning player's trigonometry per axis level, so the innermost
iteration is a handful of complex multiplies.
"""

from libc.math cimport cos, sin, pi, INFINITY

import numpy as np

ctypedef double complex dcomplex

cdef double INV_GOLDEN = 0.6180339887498949
cdef double GOLDEN_XTOL = 1e-11
cdef double CYCLE_FTOL = 1e-12
cdef dcomplex J_IMAG = 1j


cdef struct Amps:
    # columns of a move: (o0, o1) = U|O>, (t0, t1) = U|T>
    dcomplex o0
    dcomplex o1
    dcomplex t0
    dcomplex t1


cdef inline void _amps(double t, double f, double q, Amps* A) noexcept nogil:
    cdef double c = cos(0.5 * t), s = sin(0.5 * t)
    cdef double hp = 0.5 * (f + q), hm = 0.5 * (f - q)
    cdef dcomplex ep = cos(hp) + J_IMAG * sin(hp)
    cdef dcomplex em = cos(hm) + J_IMAG * sin(hm)
    A.o0 = ep * c
    A.o1 = J_IMAG * em.conjugate() * s
    A.t0 = J_IMAG * em * s
    A.t1 = ep.conjugate() * c


cdef inline void _probs_amps(double cd, double sd, Amps* A, Amps* B,
                             double* out) noexcept nogil:
    cdef dcomplex m00 = cd * A.o0 * B.o0 + J_IMAG * sd * A.t0 * B.t0
    cdef dcomplex m01 = cd * A.o0 * B.o1 + J_IMAG * sd * A.t0 * B.t1
    cdef dcomplex m10 = cd * A.o1 * B.o0 + J_IMAG * sd * A.t1 * B.t0
    cdef dcomplex m11 = cd * A.o1 * B.o1 + J_IMAG * sd * A.t1 * B.t1

    cdef dcomplex o00 = cd * m00 - J_IMAG * sd * m11
    cdef dcomplex o01 = cd * m01 - J_IMAG * sd * m10
    cdef dcomplex o10 = cd * m10 - J_IMAG * sd * m01
    cdef dcomplex o11 = cd * m11 - J_IMAG * sd * m00

    out[0] = o00.real * o00.real + o00.imag * o00.imag
    out[1] = o01.real * o01.real + o01.imag * o01.imag
    out[2] = o10.real * o10.real + o10.imag * o10.imag
    out[3] = o11.real * o11.real + o11.imag * o11.imag


cdef inline double _payoff_amps(double cd, double sd, double* e, Amps* mine,
                                Amps* opp, bint is_alice) noexcept nogil:
    cdef double p[4]
    if is_alice:
        _probs_amps(cd, sd, mine, opp, p)
    else:
        _probs_amps(cd, sd, opp, mine, p)
    return e[0] * p[0] + e[1] * p[1] + e[2] * p[2] + e[3] * p[3]


cdef inline double _eval_free(double cd, double sd, double* e, double* x,
                              Amps* opp, bint is_alice, int dims) noexcept nogil:
    cdef Amps mine
    if dims == 1:
        _amps(x[0], 0.0, 0.0, &mine)
    elif dims == 2:
        _amps(x[0], x[1], x[1], &mine)
    else:
        _amps(x[0], x[1], x[2], &mine)
    return _payoff_amps(cd, sd, e, &mine, opp, is_alice)


cdef inline double _axis_val(int j, double step) noexcept nogil:
    return -pi + (j + 1) * step


cdef void _grid_best(double cd, double sd, double* e, Amps* opp,
                     bint is_alice, int dims, int n, double step,
                     double* xout, double* vout) noexcept nogil:
    cdef int i0, i1, i2
    cdef double t, f, q, v, c, s
    cdef double best = -INFINITY
    cdef double b0 = 0.0, b1 = 0.0, b2 = 0.0
    cdef Amps mine
    cdef dcomplex ep, half_f, half_q
    for i0 in range(n):
        t = _axis_val(i0, step)
        c = cos(0.5 * t)
        s = sin(0.5 * t)
        if dims == 1:
            # phi = psi = 0: real cosine column, purely imaginary sine column
            mine.o0 = c
            mine.o1 = J_IMAG * s
            mine.t0 = J_IMAG * s
            mine.t1 = c
            v = _payoff_amps(cd, sd, e, &mine, opp, is_alice)
            if v > best:
                best = v
                b0 = t
        elif dims == 2:
            for i1 in range(n):
                f = _axis_val(i1, step)
                # psi = phi: ep = e^{i phi}, em = 1
                ep = cos(f) + J_IMAG * sin(f)
                mine.o0 = ep * c
                mine.o1 = J_IMAG * s
                mine.t0 = J_IMAG * s
                mine.t1 = ep.conjugate() * c
                v = _payoff_amps(cd, sd, e, &mine, opp, is_alice)
                if v > best:
                    best = v
                    b0 = t
                    b1 = f
        else:
            for i1 in range(n):
                f = _axis_val(i1, step)
                half_f = cos(0.5 * f) + J_IMAG * sin(0.5 * f)
                for i2 in range(n):
                    q = _axis_val(i2, step)
                    half_q = cos(0.5 * q) + J_IMAG * sin(0.5 * q)
                    ep = half_f * half_q
                    mine.o0 = ep * c
                    mine.t1 = ep.conjugate() * c
                    ep = half_f * half_q.conjugate()   # em = e^{i(phi-psi)/2}
                    mine.o1 = J_IMAG * ep.conjugate() * s
                    mine.t0 = J_IMAG * ep * s
                    v = _payoff_amps(cd, sd, e, &mine, opp, is_alice)
                    if v > best:
                        best = v
                        b0 = t
                        b1 = f
                        b2 = q
    xout[0] = b0
    xout[1] = b1
    xout[2] = b2
    vout[0] = best


cdef void _golden_axis(double cd, double sd, double* e, Amps* opp,
                       bint is_alice, int dims, int ax, double h,
                       double* x, double* fbest) noexcept nogil:
    cdef double saved = x[ax]
    cdef double best_x = saved
    cdef double best_v = fbest[0]
    cdef double lo = saved - h
    cdef double hi = saved + h
    cdef double c = hi - INV_GOLDEN * (hi - lo)
    cdef double d = lo + INV_GOLDEN * (hi - lo)
    cdef double fc, fd

    x[ax] = c
    fc = _eval_free(cd, sd, e, x, opp, is_alice, dims)
    x[ax] = d
    fd = _eval_free(cd, sd, e, x, opp, is_alice, dims)
    if fc > best_v:
        best_v = fc
        best_x = c
    if fd > best_v:
        best_v = fd
        best_x = d
    while hi - lo > GOLDEN_XTOL:
        if fc > fd:
            hi = d
            d = c
            fd = fc
            c = hi - INV_GOLDEN * (hi - lo)
            x[ax] = c
            fc = _eval_free(cd, sd, e, x, opp, is_alice, dims)
            if fc > best_v:
                best_v = fc
                best_x = c
        else:
            lo = c
            c = d
            fc = fd
            d = lo + INV_GOLDEN * (hi - lo)
            x[ax] = d
            fd = _eval_free(cd, sd, e, x, opp, is_alice, dims)
            if fd > best_v:
                best_v = fd
                best_x = d
    x[ax] = best_x
    fbest[0] = best_v


def probs_batch(double delta, a_params, b_params):
    """Outcome probabilities for (..., 3) angle arrays; broadcasts, returns (..., 4)."""
    a, b = np.broadcast_arrays(np.asarray(a_params, dtype=float),
                               np.asarray(b_params, dtype=float))
    shape = a.shape[:-1]
    af = np.ascontiguousarray(a.reshape(-1, 3))
    bf = np.ascontiguousarray(b.reshape(-1, 3))
    out = np.empty((af.shape[0], 4))
    cdef double[:, ::1] av = af
    cdef double[:, ::1] bv = bf
    cdef double[:, ::1] ov = out
    cdef double cd = cos(0.5 * delta), sd = sin(0.5 * delta)
    cdef Amps A, B
    cdef Py_ssize_t i, n = av.shape[0]
    with nogil:
        for i in range(n):
            _amps(av[i, 0], av[i, 1], av[i, 2], &A)
            _amps(bv[i, 0], bv[i, 1], bv[i, 2], &B)
            _probs_amps(cd, sd, &A, &B, &ov[i, 0])
    return out.reshape(shape + (4,))


def probs_one(double delta, a, b):
    cdef double p[4]
    cdef double cd = cos(0.5 * delta), sd = sin(0.5 * delta)
    cdef Amps A, B
    _amps(float(a[0]), float(a[1]), float(a[2]), &A)
    _amps(float(b[0]), float(b[1]), float(b[2]), &B)
    _probs_amps(cd, sd, &A, &B, p)
    return (p[0], p[1], p[2], p[3])


def payoff_one(double delta, entries, a, b):
    cdef double p[4]
    cdef double cd = cos(0.5 * delta), sd = sin(0.5 * delta)
    cdef Amps A, B
    _amps(float(a[0]), float(a[1]), float(a[2]), &A)
    _amps(float(b[0]), float(b[1]), float(b[2]), &B)
    _probs_amps(cd, sd, &A, &B, p)
    return (float(entries[0]) * p[0] + float(entries[1]) * p[1]
            + float(entries[2]) * p[2] + float(entries[3]) * p[3])


def br_table(double delta, entries, opponents, bint is_alice, int dims, int n_grid):
    """Best deviation-grid payoff against each opponent triple (no polish)."""
    e_arr = np.ascontiguousarray(np.asarray(entries, dtype=float).reshape(4))
    opp = np.ascontiguousarray(np.asarray(opponents, dtype=float).reshape(-1, 3))
    out = np.empty(opp.shape[0])
    cdef double[::1] ev = e_arr
    cdef double[:, ::1] ov = opp
    cdef double[::1] res = out
    cdef double cd = cos(0.5 * delta), sd = sin(0.5 * delta)
    cdef double step = 2.0 * pi / n_grid
    cdef double x[3]
    cdef double v
    cdef Amps O
    cdef Py_ssize_t j, m = ov.shape[0]
    with nogil:
        for j in range(m):
            _amps(ov[j, 0], ov[j, 1], ov[j, 2], &O)
            _grid_best(cd, sd, &ev[0], &O, is_alice, dims, n_grid, step, x, &v)
            res[j] = v
    return out


def best_response(double delta, entries, opponent, bint is_alice, int dims,
                  int n_grid, bint refine=True, int max_cycles=200):
    """Grid scan plus optional golden polish; returns ((theta, phi, psi), payoff)."""
    e_arr = np.ascontiguousarray(np.asarray(entries, dtype=float).reshape(4))
    o_arr = np.asarray(opponent, dtype=float).reshape(3)
    cdef double[::1] ev = e_arr
    cdef double cd = cos(0.5 * delta), sd = sin(0.5 * delta)
    cdef double step = 2.0 * pi / n_grid
    cdef double x[3]
    cdef double best_v, before
    cdef int ax, cycle
    cdef Amps O
    _amps(o_arr[0], o_arr[1], o_arr[2], &O)
    with nogil:
        _grid_best(cd, sd, &ev[0], &O, is_alice, dims, n_grid, step, x, &best_v)
        if refine:
            for cycle in range(max_cycles):
                before = best_v
                for ax in range(dims):
                    _golden_axis(cd, sd, &ev[0], &O, is_alice, dims, ax, step, x, &best_v)
                if best_v - before < CYCLE_FTOL:
                    break
    if dims == 1:
        triple = (x[0], 0.0, 0.0)
    elif dims == 2:
        triple = (x[0], x[1], x[1])
    else:
        triple = (x[0], x[1], x[2])
    return triple, best_v

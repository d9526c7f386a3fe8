# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; arithmetic matches ``_pyref`` bit for bit.

Keep every floating-point expression in the same shape as the reference
implementation (and compile with FP contraction off) so backend choice
never changes results.
"""

import numpy as np

from libc.math cimport INFINITY


def smo_solve(kernel, y, double c, double tol, long max_iter):
    """See ``moodwear._kernels._pyref.smo_solve``."""
    cdef double[:, ::1] K = np.ascontiguousarray(kernel, dtype=np.float64)
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[::1] yv = y_arr
    cdef Py_ssize_t n = yv.shape[0]
    alpha_arr = np.zeros(n, dtype=np.float64)
    grad_arr = np.full(n, -1.0, dtype=np.float64)
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] grad = grad_arr

    cdef Py_ssize_t iteration = 0, i, j, t
    cdef bint converged = False
    cdef double best_up, best_low, v
    cdef double quad, delta, diff, pair_sum, ai, aj, old_i, old_j, ci, cj

    while iteration < max_iter:
        i = -1
        j = -1
        best_up = -INFINITY
        best_low = INFINITY
        for t in range(n):
            v = -(yv[t] * grad[t])
            if (yv[t] > 0 and alpha[t] < c) or (yv[t] < 0 and alpha[t] > 0):
                if v > best_up:
                    best_up = v
                    i = t
            if (yv[t] > 0 and alpha[t] > 0) or (yv[t] < 0 and alpha[t] < c):
                if v < best_low:
                    best_low = v
                    j = t
        if i < 0 or j < 0:
            converged = True
            break
        if best_up - best_low < tol:
            converged = True
            break

        quad = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if quad <= 0.0:
            quad = 1e-12
        old_i = alpha[i]
        old_j = alpha[j]
        if yv[i] != yv[j]:
            delta = (-grad[i] - grad[j]) / quad
            diff = old_i - old_j
            ai = old_i + delta
            aj = old_j + delta
            if diff > 0.0:
                if aj < 0.0:
                    aj = 0.0
                    ai = diff
            else:
                if ai < 0.0:
                    ai = 0.0
                    aj = -diff
            if diff > 0.0:
                if ai > c:
                    ai = c
                    aj = c - diff
            else:
                if aj > c:
                    aj = c
                    ai = c + diff
        else:
            delta = (grad[i] - grad[j]) / quad
            pair_sum = old_i + old_j
            ai = old_i - delta
            aj = old_j + delta
            if pair_sum > c:
                if ai > c:
                    ai = c
                    aj = pair_sum - c
            else:
                if aj < 0.0:
                    aj = 0.0
                    ai = pair_sum
            if pair_sum > c:
                if aj > c:
                    aj = c
                    ai = pair_sum - c
            else:
                if ai < 0.0:
                    ai = 0.0
                    aj = pair_sum
        alpha[i] = ai
        alpha[j] = aj

        ci = yv[i] * (ai - old_i)
        cj = yv[j] * (aj - old_j)
        for t in range(n):
            grad[t] = grad[t] + yv[t] * (ci * K[i, t] + cj * K[j, t])
        iteration += 1

    cdef double upper = INFINITY
    cdef double lower = -INFINITY
    cdef double free_sum = 0.0
    cdef long free_count = 0
    cdef double yg, rho
    for t in range(n):
        yg = yv[t] * grad[t]
        if alpha[t] >= c:
            if yv[t] < 0:
                if yg < upper:
                    upper = yg
            else:
                if yg > lower:
                    lower = yg
        elif alpha[t] <= 0.0:
            if yv[t] > 0:
                if yg < upper:
                    upper = yg
            else:
                if yg > lower:
                    lower = yg
        else:
            free_sum += yg
            free_count += 1
    if free_count > 0:
        rho = free_sum / free_count
    else:
        rho = (upper + lower) / 2.0
    return alpha_arr, rho, iteration, converged


def temp_hold_scan(x, double threshold):
    """See ``moodwear._kernels._pyref.temp_hold_scan``."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] xs = x_arr
    cdef Py_ssize_t n = xs.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    if n == 0:
        return out_arr, 0
    cdef double held = xs[0]
    cdef double value, jump
    cdef long discarded = 0
    cdef Py_ssize_t idx
    out[0] = held
    for idx in range(1, n):
        value = xs[idx]
        jump = value - held
        if jump > threshold or -jump > threshold:
            out[idx] = held
            discarded += 1
        else:
            out[idx] = value
            held = value
    return out_arr, discarded

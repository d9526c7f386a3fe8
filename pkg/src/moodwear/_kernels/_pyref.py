"""Reference implementations of the hot kernels.

Numpy-vectorized where possible, scalar Python elsewhere. The compiled
backend mirrors this arithmetic expression for expression (compiled with
FP contraction off), so both produce bit-identical outputs.
"""

from __future__ import annotations

import numpy as np

_TAU = 1e-12


def smo_solve(
    kernel: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, int, bool]:
    """Solve the soft-margin SVM dual on a precomputed kernel matrix.

    Two-variable working-set descent on 0.5 aᵀQa − eᵀa with Q_ij =
    y_i y_j K_ij, box 0 ≤ a ≤ c and yᵀa = 0. The working pair is the
    maximal violating pair; iteration stops when the violation drops
    below ``tol``. Returns (alpha, rho, iterations, converged) with the
    decision function f(x) = Σ a_i y_i K(x_i, x) − rho.
    """
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.size
    alpha = np.zeros(n)
    grad = np.full(n, -1.0)

    iteration = 0
    converged = False
    while iteration < max_iter:
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
        violation = -(y * grad)
        if not up.any() or not low.any():
            converged = True
            break
        i = int(np.argmax(np.where(up, violation, -np.inf)))
        j = int(np.argmin(np.where(low, violation, np.inf)))
        if violation[i] - violation[j] < tol:
            converged = True
            break

        quad = kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j]
        if quad <= 0.0:
            quad = _TAU
        old_i = alpha[i]
        old_j = alpha[j]
        if y[i] != y[j]:
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
            total = old_i + old_j
            ai = old_i - delta
            aj = old_j + delta
            if total > c:
                if ai > c:
                    ai = c
                    aj = total - c
            else:
                if aj < 0.0:
                    aj = 0.0
                    ai = total
            if total > c:
                if aj > c:
                    aj = c
                    ai = total - c
            else:
                if ai < 0.0:
                    ai = 0.0
                    aj = total
        alpha[i] = ai
        alpha[j] = aj

        ci = y[i] * (ai - old_i)
        cj = y[j] * (aj - old_j)
        grad += y * (ci * kernel[i] + cj * kernel[j])
        iteration += 1

    rho = _calculate_rho(alpha, y, grad, c)
    return alpha, rho, iteration, converged


def _calculate_rho(alpha: np.ndarray, y: np.ndarray, grad: np.ndarray, c: float) -> float:
    upper = np.inf
    lower = -np.inf
    free_sum = 0.0
    free_count = 0
    for t in range(y.size):
        yg = y[t] * grad[t]
        if alpha[t] >= c:
            if y[t] < 0:
                upper = min(upper, yg)
            else:
                lower = max(lower, yg)
        elif alpha[t] <= 0.0:
            if y[t] > 0:
                upper = min(upper, yg)
            else:
                lower = max(lower, yg)
        else:
            free_sum += yg
            free_count += 1
    if free_count > 0:
        return free_sum / free_count
    return (upper + lower) / 2.0


def temp_hold_scan(x: np.ndarray, threshold: float) -> tuple[np.ndarray, int]:
    """Hold-last-valid scan: jumps beyond ``threshold`` repeat the held value."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    if x.size == 0:
        return out, 0
    held = x[0]
    out[0] = held
    discarded = 0
    for idx in range(1, x.size):
        value = x[idx]
        jump = value - held
        if jump > threshold or -jump > threshold:
            out[idx] = held
            discarded += 1
        else:
            out[idx] = value
            held = value
    return out, discarded

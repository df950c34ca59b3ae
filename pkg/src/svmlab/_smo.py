"""Compiled inner loop for the pairwise dual solver.

Kept free of any Python object traffic so numba can cache the compilation
to disk; the wrapper in :mod:`svmlab.qp` owns validation and result types.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _next_u64(state: np.uint64) -> np.uint64:
    # xorshift64: cheap, stateless between calls, good enough for shuffles.
    state ^= state << np.uint64(13)
    state ^= state >> np.uint64(7)
    state ^= state << np.uint64(17)
    return state


@njit(cache=True, nogil=True)
def smo_pairs(h, y, box, tol, max_steps, seed, trace):
    """Maximal-violating-pair descent on the box-and-equality dual.

    Minimises ``0.5 a'Ha - sum(a)`` subject to ``0 <= a_i <= box`` and
    ``sum(y_i a_i) = 0``, starting from 0. Returns
    ``(alpha, steps, gap_hi, gap_lo, converged)`` where the optimal bias
    lies in ``[gap_lo, gap_hi]``.

    Candidates are scanned in a permuted order so that exact ties among
    equally violating indices break deterministically: first epoch in index
    order, later epochs in a seeded reshuffle.
    """
    n = y.size
    alpha = np.zeros(n)
    g = -np.ones(n)  # gradient of the objective at alpha
    perm = np.arange(n)
    state = np.uint64(seed * np.uint64(2654435769) + np.uint64(0x9E3779B97F4A7C15))
    if state == np.uint64(0):
        state = np.uint64(1)
    record = trace.size > 0
    objective = 0.0
    steps = 0
    converged = False
    up_val = 0.0
    lo_val = 0.0

    while True:
        # Reshuffle the scan order once per epoch (n accepted updates).
        if steps > 0 and steps % n == 0:
            for i in range(n - 1, 0, -1):
                state = _next_u64(state)
                j = int(state % np.uint64(i + 1))
                perm[i], perm[j] = perm[j], perm[i]

        # Select the maximal violating pair. f_i = -y_i g_i equals the bias
        # each sample "votes" for; optimality closes the spread of votes.
        up_val = -1e300
        lo_val = 1e300
        up_idx = -1
        lo_idx = -1
        for k in range(n):
            i = perm[k]
            fi = -y[i] * g[i]
            if (y[i] > 0.0 and alpha[i] < box) or (y[i] < 0.0 and alpha[i] > 0.0):
                if fi > up_val:
                    up_val = fi
                    up_idx = i
            if (y[i] < 0.0 and alpha[i] < box) or (y[i] > 0.0 and alpha[i] > 0.0):
                if fi < lo_val:
                    lo_val = fi
                    lo_idx = i
        if up_idx < 0 or lo_idx < 0 or up_val - lo_val <= tol:
            converged = True
            break
        if steps >= max_steps:
            break

        i = up_idx
        j = lo_idx
        # Step along d = y_i e_i - y_j e_j, which keeps sum(y a) fixed.
        quad = h[i, i] + h[j, j] - 2.0 * y[i] * y[j] * h[i, j]
        quad_step = quad if quad > 1e-12 else 1e-12
        t = (up_val - lo_val) / quad_step
        room_i = box - alpha[i] if y[i] > 0.0 else alpha[i]
        room_j = alpha[j] if y[j] > 0.0 else box - alpha[j]
        if t > room_i:
            t = room_i
        if t > room_j:
            t = room_j
        hit_i = t == room_i
        hit_j = t == room_j

        alpha[i] += y[i] * t
        alpha[j] -= y[j] * t
        if hit_i:  # land exactly on the bound, no float drift
            alpha[i] = box if y[i] > 0.0 else 0.0
        if hit_j:
            alpha[j] = 0.0 if y[j] > 0.0 else box
        yi_t = y[i] * t
        yj_t = y[j] * t
        for k in range(n):
            g[k] += yi_t * h[k, i] - yj_t * h[k, j]
        if record:
            objective += -t * (up_val - lo_val) + 0.5 * t * t * quad
            trace[steps] = objective
        steps += 1

    return alpha, steps, up_val, lo_val, converged

"""Compiled point stencils, relaxation sweeps and the fused iteration loop.

All arrays are indexed ``a[i, j]`` with ``i`` along x and ``j`` along y.
Wall layout: ``j = 0`` bottom, ``j = n-1`` top, ``i = 0`` left, ``i = n-1``
right.  Every expression below is written in the same left-to-right order
as the pure-Python point functions in :mod:`drivencavity.fields`, so the
compiled and interpreted paths agree bit-for-bit (no fastmath).
"""

import numpy as np
from numba import njit

LEXICOGRAPHIC = 0
RED_BLACK = 1

CORNER_AVERAGE = 0
CORNER_LID = 1

# walls, in the order used by the ``speeds`` arrays
BOTTOM, TOP, LEFT, RIGHT = 0, 1, 2, 3

RES3_GUARD = 1e-12

STATUS_RUNNING = 0
STATUS_CONVERGED = 1
STATUS_DIVERGED = 2

_INF = np.inf


@njit(cache=True, inline="always")
def psi_residual(psi, omega, i, j, h2):
    return (psi[i + 1, j] + psi[i - 1, j] + psi[i, j + 1] + psi[i, j - 1]
            - 4.0 * psi[i, j]) / h2 + omega[i, j]


@njit(cache=True, inline="always")
def omega_residual(psi, omega, i, j, h, h2, re):
    two_h = 2.0 * h
    return ((1.0 / re) * (omega[i + 1, j] + omega[i - 1, j] + omega[i, j + 1]
                          + omega[i, j - 1] - 4.0 * omega[i, j]) / h2
            - ((psi[i, j + 1] - psi[i, j - 1]) / two_h)
            * ((omega[i + 1, j] - omega[i - 1, j]) / two_h)
            + ((psi[i + 1, j] - psi[i - 1, j]) / two_h)
            * ((omega[i, j + 1] - omega[i, j - 1]) / two_h))


@njit(cache=True, inline="always")
def jensen(psi1, psi2, speed, h, h2, sign):
    # sign = +1 bottom/right, -1 top/left (tangential speed along +x / +y)
    return (-4.0 * psi1 + 0.5 * psi2) / h2 + sign * (3.0 * speed / h)


_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


@njit(cache=True)
def refresh_walls(psi, omega, h, speeds, corner_policy):
    """Zero the wall streamfunction and recompute wall vorticity in place."""
    n = psi.shape[0]
    h2 = h * h
    m = n - 1
    for k in range(n):
        psi[k, 0] = 0.0
        psi[k, m] = 0.0
        psi[0, k] = 0.0
        psi[m, k] = 0.0
    for k in range(1, m):
        omega[k, 0] = jensen(psi[k, 1], psi[k, 2], speeds[BOTTOM], h, h2, 1.0)
        omega[k, m] = jensen(psi[k, m - 1], psi[k, m - 2], speeds[TOP], h, h2, -1.0)
        omega[0, k] = jensen(psi[1, k], psi[2, k], speeds[LEFT], h, h2, -1.0)
        omega[m, k] = jensen(psi[m - 1, k], psi[m - 2, k], speeds[RIGHT], h, h2, 1.0)

    # stationary-corner closures, one per adjacent wall
    bl_b = jensen(psi[0, 1], psi[0, 2], 0.0, h, h2, 1.0)
    bl_l = jensen(psi[1, 0], psi[2, 0], 0.0, h, h2, -1.0)
    br_b = jensen(psi[m, 1], psi[m, 2], 0.0, h, h2, 1.0)
    br_r = jensen(psi[m - 1, 0], psi[m - 2, 0], 0.0, h, h2, 1.0)
    tl_t = jensen(psi[0, m - 1], psi[0, m - 2], 0.0, h, h2, -1.0)
    tl_l = jensen(psi[1, m], psi[2, m], 0.0, h, h2, -1.0)
    tr_t = jensen(psi[m, m - 1], psi[m, m - 2], 0.0, h, h2, -1.0)
    tr_r = jensen(psi[m - 1, m], psi[m - 2, m], 0.0, h, h2, 1.0)
    omega[0, 0] = 0.5 * (bl_b + bl_l)
    omega[m, 0] = 0.5 * (br_b + br_r)
    if corner_policy == CORNER_LID:
        omega[0, m] = jensen(psi[0, m - 1], psi[0, m - 2], speeds[TOP], h, h2, -1.0)
        omega[m, m] = jensen(psi[m, m - 1], psi[m, m - 2], speeds[TOP], h, h2, -1.0)
    else:
        omega[0, m] = 0.5 * (tl_t + tl_l)
        omega[m, m] = 0.5 * (tr_t + tr_r)


@njit(cache=True, inline="always")
def _relax_psi_node(psi, omega, i, j, h2, factor, acc):
    old = psi[i, j]
    new = old + factor * psi_residual(psi, omega, i, j, h2)
    psi[i, j] = new
    d = new - old
    ad = abs(d)
    if not ad < _INF:
        acc[2] = 1.0
    if ad > acc[0]:
        acc[0] = ad
    if abs(old) >= RES3_GUARD:
        rel = abs(d / old)
        if rel > acc[1]:
            acc[1] = rel


@njit(cache=True, inline="always")
def _relax_omega_node(psi, omega, i, j, h, h2, re, factor, acc):
    old = omega[i, j]
    new = old + factor * omega_residual(psi, omega, i, j, h, h2, re)
    omega[i, j] = new
    d = new - old
    ad = abs(d)
    if not ad < _INF:
        acc[2] = 1.0
    if ad > acc[0]:
        acc[0] = ad
    if abs(old) >= RES3_GUARD:
        rel = abs(d / old)
        if rel > acc[1]:
            acc[1] = rel


@njit(cache=True)
def sweep_psi(psi, omega, h, relax, ordering):
    """One in-place SOR pass over interior psi.

    Returns ``[max |change|, max |change/old|, nonfinite flag]``.
    """
    n = psi.shape[0]
    h2 = h * h
    factor = relax * (h2 / 4.0)
    acc = np.zeros(3)
    if ordering == LEXICOGRAPHIC:
        for i in range(1, n - 1):
            for j in range(1, n - 1):
                _relax_psi_node(psi, omega, i, j, h2, factor, acc)
    else:
        for colour in range(2):
            for i in range(1, n - 1):
                start = 1 + (i + 1 + colour) % 2
                for j in range(start, n - 1, 2):
                    _relax_psi_node(psi, omega, i, j, h2, factor, acc)
    return acc


@njit(cache=True)
def sweep_omega(psi, omega, h, re, relax, ordering):
    """One in-place SOR pass over interior omega; same return as sweep_psi."""
    n = psi.shape[0]
    h2 = h * h
    factor = relax * (h2 * re / 4.0)
    acc = np.zeros(3)
    if ordering == LEXICOGRAPHIC:
        for i in range(1, n - 1):
            for j in range(1, n - 1):
                _relax_omega_node(psi, omega, i, j, h, h2, re, factor, acc)
    else:
        for colour in range(2):
            for i in range(1, n - 1):
                start = 1 + (i + 1 + colour) % 2
                for j in range(start, n - 1, 2):
                    _relax_omega_node(psi, omega, i, j, h, h2, re, factor, acc)
    return acc


@njit(cache=True)
def max_residuals(psi, omega, h, re):
    n = psi.shape[0]
    h2 = h * h
    rp = 0.0
    ro = 0.0
    for i in range(1, n - 1):
        for j in range(1, n - 1):
            a = abs(psi_residual(psi, omega, i, j, h2))
            if a > rp:
                rp = a
            b = abs(omega_residual(psi, omega, i, j, h, h2, re))
            if b > ro:
                ro = b
    return rp, ro


@njit(cache=True)
def advance(psi, omega, h, re, relax_psi, relax_omega, speeds, corner_policy,
            ordering, tol, steps):
    """Run up to ``steps`` outer iterations in place.

    Each iteration is: psi sweep, wall refresh, omega sweep, residual pass.
    Stops early on convergence (both RES1 <= tol) or a non-finite update.
    Returns ``(iterations_done, status, triad)`` where ``triad`` holds the
    six residuals of the last completed iteration.
    """
    triad = np.zeros(6)
    status = STATUS_RUNNING
    done = 0
    for _ in range(steps):
        acc_p = sweep_psi(psi, omega, h, relax_psi, ordering)
        refresh_walls(psi, omega, h, speeds, corner_policy)
        acc_o = sweep_omega(psi, omega, h, re, relax_omega, ordering)
        done += 1
        if acc_p[2] != 0.0 or acc_o[2] != 0.0:
            status = STATUS_DIVERGED
            break
        rp, ro = max_residuals(psi, omega, h, re)
        triad[0] = rp
        triad[1] = ro
        triad[2] = acc_p[0]
        triad[3] = acc_o[0]
        triad[4] = acc_p[1]
        triad[5] = acc_o[1]
        if not (rp < _INF and ro < _INF):
            status = STATUS_DIVERGED
            break
        if rp <= tol and ro <= tol:
            status = STATUS_CONVERGED
            break
    return done, status, triad

# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled implementations of the hot numerical kernels.

Same contracts as ``_kernels_py``; selected automatically at import when
built (see ``_kernels``).
"""

import numpy as np

cimport cython
from libc.math cimport fabs, sqrt

DEF MAX_SWEEPS = 100


def jacobi_eigh(matrix):
    """Diagonalize a complex Hermitian matrix with cyclic Jacobi rotations.

    Returns (ascending eigenvalues, eigenvector columns); raises
    ArithmeticError when the sweep limit is hit before convergence.
    """
    h_arr = np.array(matrix, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = h_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    if n == 1:
        return h_arr.real.reshape(1).copy(), v_arr

    cdef double complex[:, ::1] h = h_arr
    cdef double complex[:, ::1] v = v_arr
    cdef double scale = np.linalg.norm(h_arr)
    if scale == 0.0:
        return np.zeros(n), v_arr
    cdef double thresh = 1e-13 * scale / n

    cdef Py_ssize_t sweep, p, q, i
    cdef int rotated, converged = 0
    cdef double apq, tau, t, c, s
    cdef double complex hpq, phase, sp, spc, xp, xq

    for sweep in range(MAX_SWEEPS):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                hpq = h[p, q]
                apq = sqrt(hpq.real * hpq.real + hpq.imag * hpq.imag)
                if apq <= thresh:
                    continue
                rotated += 1
                phase = hpq / apq
                tau = (h[q, q].real - h[p, p].real) / (2.0 * apq)
                t = 1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                if tau < 0.0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = s * phase.conjugate()
                for i in range(n):
                    xp = h[i, p]
                    xq = h[i, q]
                    h[i, p] = c * xp - spc * xq
                    h[i, q] = sp * xp + c * xq
                for i in range(n):
                    xp = h[p, i]
                    xq = h[q, i]
                    h[p, i] = c * xp - sp * xq
                    h[q, i] = spc * xp + c * xq
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                for i in range(n):
                    xp = v[i, p]
                    xq = v[i, q]
                    v[i, p] = c * xp - spc * xq
                    v[i, q] = sp * xp + c * xq
        if rotated == 0:
            converged = 1
            break
    if not converged:
        off = np.linalg.norm(h_arr - np.diag(np.diag(h_arr)))
        raise ArithmeticError(
            f"jacobi_eigh: no convergence after {MAX_SWEEPS} sweeps, "
            f"off-diagonal norm {off:.3e}"
        )
    w = h_arr.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v_arr[:, order])


def pivot_inplace(tableau, Py_ssize_t row, Py_ssize_t col):
    """Gauss-Jordan pivot of a dense simplex tableau, in place."""
    cdef double[:, ::1] t = tableau
    cdef Py_ssize_t m = t.shape[0]
    cdef Py_ssize_t n = t.shape[1]
    cdef Py_ssize_t i, j
    cdef double piv = t[row, col]
    cdef double factor
    for j in range(n):
        t[row, j] /= piv
    for i in range(m):
        if i == row:
            continue
        factor = t[i, col]
        if factor == 0.0:
            continue
        for j in range(n):
            t[i, j] -= factor * t[row, j]
    for i in range(m):
        t[i, col] = 0.0
    t[row, col] = 1.0

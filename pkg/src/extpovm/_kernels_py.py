"""Pure numpy implementations of the hot numerical kernels.

These are the fallback used when the compiled extension ``_kernels_cy`` is
not available (or is disabled via ``EXTPOVM_BACKEND=python``).  Both
implementations perform the same arithmetic; see ``benchmarks/`` for a
speed comparison.
"""

import math

import numpy as np

MAX_SWEEPS = 100


def jacobi_eigh(matrix):
    """Diagonalize a complex Hermitian matrix with cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : ndarray
        Hermitian matrix, shape (n, n).  Not modified.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order, shape (n,).
    eigenvectors : ndarray
        Unitary matrix whose k-th column is the eigenvector for the k-th
        eigenvalue, shape (n, n).

    Raises
    ------
    ArithmeticError
        If the off-diagonal mass has not converged after MAX_SWEEPS sweeps.
    """
    h = np.array(matrix, dtype=np.complex128, order="C")
    n = h.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return h.real.reshape(1).copy(), v
    scale = np.linalg.norm(h)
    if scale == 0.0:
        return np.zeros(n), v
    # When every |h_pq| is below this, the off-diagonal Frobenius mass is
    # at most 1e-13 * ||H||_F, so skipping all pairs means converged.
    thresh = 1e-13 * scale / n
    for _ in range(MAX_SWEEPS):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = abs(h[p, q])
                if apq <= thresh:
                    continue
                rotated += 1
                phase = h[p, q] / apq
                tau = (h[q, q].real - h[p, p].real) / (2.0 * apq)
                t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
                if tau < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = s * phase.conjugate()
                col_p = h[:, p].copy()
                col_q = h[:, q].copy()
                h[:, p] = c * col_p - spc * col_q
                h[:, q] = sp * col_p + c * col_q
                row_p = h[p, :].copy()
                row_q = h[q, :].copy()
                h[p, :] = c * row_p - sp * row_q
                h[q, :] = spc * row_p + c * row_q
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p - spc * vcol_q
                v[:, q] = sp * vcol_p + c * vcol_q
        if rotated == 0:
            break
    else:
        off = np.linalg.norm(h - np.diag(np.diag(h)))
        raise ArithmeticError(
            f"jacobi_eigh: no convergence after {MAX_SWEEPS} sweeps, "
            f"off-diagonal norm {off:.3e}"
        )
    w = h.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def pivot_inplace(tableau, row, col):
    """Gauss-Jordan pivot of a dense simplex tableau, in place.

    Scales ``row`` so the pivot becomes 1 and eliminates ``col`` from every
    other row.  The pivot column is set to an exact unit vector.
    """
    tableau[row, :] /= tableau[row, col]
    column = tableau[:, col].copy()
    column[row] = 0.0
    tableau -= np.outer(column, tableau[row, :])
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0

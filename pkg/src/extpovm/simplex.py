"""Self-contained phase-1 simplex for finding a basic feasible solution.

The only linear programs in this package are feasibility problems
``find x subject to Ax = b, x >= 0`` whose systems are tiny (at most a few
hundred variables), so a dense tableau with Bland's entering rule is
plenty: it is deterministic, cannot cycle in practice, and its solution is
a vertex by construction.  Long pivot chains on strongly correlated
columns can degrade a dense tableau, so the basic values are refactorized
against the original system on exit, and a run whose final basis turns
out infeasible is retried with a deterministically rotated column order
(which takes a different pivot path).
"""

import numpy as np

from ._kernels import pivot_inplace
from .errors import NumericalError

LP_TOL = 1e-9


def basic_feasible_solution(a_mat, b_vec, tol=LP_TOL, max_pivots=100_000):
    """A vertex of {x >= 0 : Ax = b}, found by phase-1 simplex.

    Parameters
    ----------
    a_mat : ndarray, shape (m, n)
    b_vec : ndarray, shape (m,)
    tol : float
        Pivot and feasibility tolerance.
    max_pivots : int
        Safety bound per attempt; Bland's rule terminates long before this.

    Returns
    -------
    x : ndarray, shape (n,)
        Basic feasible solution: nonnegative, satisfies Ax = b, and has at
        most rank(A) nonzero entries.

    Raises
    ------
    NumericalError
        If the artificial objective cannot be driven to zero (infeasible
        system), the pivot bound is hit, or every retry produced a
        degraded basis.
    """
    a_mat = np.asarray(a_mat, dtype=float)
    b_vec = np.asarray(b_vec, dtype=float)
    m, n = a_mat.shape
    last_error = None
    for attempt in range(3):
        if attempt == 0:
            order = np.arange(n)
        else:
            order = np.roll(np.arange(n), attempt * (n // 3 + 1))
        try:
            x_ordered = _phase1(a_mat[:, order], b_vec, tol, max_pivots)
        except NumericalError as exc:
            last_error = exc
            continue
        x = np.empty(n)
        x[order] = x_ordered
        return x
    raise last_error


def _phase1(a_mat, b_vec, tol, max_pivots):
    m, n = a_mat.shape
    b_vec = b_vec.copy()
    flip = b_vec < 0
    a_work = a_mat.copy()
    a_work[flip] *= -1
    b_vec[flip] *= -1

    # Tableau [A | I | b] plus the phase-1 objective row (minimize the sum
    # of the artificial variables, written in reduced-cost form).
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a_work
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b_vec
    tableau[m, :n] = -a_work.sum(axis=0)
    tableau[m, -1] = -b_vec.sum()
    basis = list(range(n, n + m))

    scale = max(1.0, np.abs(b_vec).max(), np.abs(a_work).max())
    for _ in range(max_pivots):
        # Entering variable: lowest index with negative reduced cost (Bland),
        # skipping columns that offer no numerically safe pivot.
        costs = tableau[m, : n + m]
        candidates = np.nonzero(costs < -tol)[0]
        pivot = None
        for entering in candidates:
            col = tableau[:m, entering]
            rows = np.nonzero(col > tol)[0]
            if rows.size == 0:
                continue
            ratios = tableau[rows, -1] / col[rows]
            best = ratios.min()
            # Two-pass ratio test: rows within a whisker of the minimum
            # ratio count as tied, and the largest pivot element among them
            # wins (a pure minimum-ratio rule can force pivots of size
            # ~1e-9 that destroy the tableau); exact ties go to the
            # smallest basic-variable index, keeping the choice
            # deterministic.
            tied = rows[ratios <= best + 1e-7 * max(1.0, abs(best)) + tol]
            strongest = col[tied].max()
            if strongest <= 1e-7 * max(1.0, col[rows].max()):
                continue
            safe = tied[col[tied] >= 0.5 * strongest]
            leave_row = min(safe, key=lambda i: basis[i])
            pivot = (leave_row, int(entering))
            break
        if pivot is None:
            break
        pivot_inplace(tableau, pivot[0], pivot[1])
        basis[pivot[0]] = pivot[1]
    else:
        raise NumericalError(f"phase-1 simplex: more than {max_pivots} pivots")

    objective = -tableau[m, -1]
    if objective > tol * scale:
        raise NumericalError(
            f"phase-1 simplex: infeasible, residual objective {objective:.3e}"
        )

    # Drive leftover artificial variables out of the basis when a stable
    # pivot exists; rows where none does are redundant and stay at zero.
    for i in range(m):
        if basis[i] < n:
            continue
        row = tableau[i, :n]
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) > 1e-7:
            pivot_inplace(tableau, i, j)
            basis[i] = j

    # The basis selection is combinatorial and survives tableau round-off,
    # but the tabulated values degrade over long pivot chains; refactorize
    # by solving for the basic values against the original system.
    columns = sorted({basis[i] for i in range(m) if basis[i] < n})
    x = np.zeros(n)
    if columns:
        values, _, _, _ = np.linalg.lstsq(a_work[:, columns], b_vec, rcond=None)
        x[columns] = values
    residual = np.abs(a_work @ x - b_vec).max()
    if x.min() < -1e-7 or residual > tol * scale * 100:
        raise NumericalError(
            f"phase-1 simplex: degraded basis (residual {residual:.3e}, "
            f"min coordinate {x.min():.3e})"
        )
    return np.clip(x, 0.0, None)

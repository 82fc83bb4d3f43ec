"""Dense complex linear algebra: Hermitian eigendecomposition, unitary
sampling from the Gaussian unitary ensemble, and the generalized Gell-Mann
operator basis.

All matrices are plain ``numpy.ndarray`` of complex128.  Random sampling
takes an explicit ``numpy.random.Generator`` owned by the caller, so every
function here is a pure value mapping.
"""

import numpy as np

from ._kernels import jacobi_eigh
from .errors import NumericalError, PreconditionError

HERM_TOL = 1e-10
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-10
ORTH_TOL = 1e-10
PSD_TOL = 1e-9
EIG_TOL = 1e-11


def hermiticity_residual(matrix):
    """Max entrywise deviation of a matrix from its conjugate transpose."""
    m = np.asarray(matrix)
    return float(np.abs(m - m.conj().T).max())


def hermitian_eig(matrix, check=True):
    """Eigenvalues and eigenvectors of a complex Hermitian matrix.

    Parameters
    ----------
    matrix : ndarray
        Square Hermitian matrix.
    check : bool
        Verify Hermiticity before decomposing (skip for matrices that are
        Hermitian by construction).

    Returns
    -------
    eigenvalues : ndarray
        Real, in ascending order.
    eigenvectors : ndarray
        Unitary matrix with eigenvectors as columns, in matching order.
        Each column's largest-magnitude entry is made real and positive,
        which pins the otherwise free phases.
    """
    h = np.asarray(matrix, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {h.shape}")
    if check:
        res = hermiticity_residual(h)
        bound = HERM_TOL * max(1.0, float(np.abs(h).max()))
        if res > bound:
            raise PreconditionError(
                f"matrix is not Hermitian: residual {res:.3e} > {bound:.3e}"
            )
    try:
        w, v = jacobi_eigh(h)
    except ArithmeticError as exc:
        raise NumericalError(str(exc)) from exc
    # Phase convention: largest-|entry| of each column real-positive.
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    mags = np.abs(lead)
    mags[mags == 0.0] = 1.0
    v = v * (lead.conj() / mags)[np.newaxis, :]
    return w, v


def sample_haar_unitary(dim, rng):
    """Draw a random unitary as the eigenvector matrix of a GUE matrix.

    A matrix ``A`` with independent standard complex Gaussian entries is
    drawn from ``rng``; the returned unitary diagonalizes ``A + A†``.
    Deterministic for a given generator state.
    """
    if dim < 1:
        raise PreconditionError(f"dim must be >= 1, got {dim}")
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = a + a.conj().T
    _, u = hermitian_eig(h, check=False)
    res = float(np.abs(u.conj().T @ u - np.eye(dim)).max())
    if res > UNITARY_TOL:
        raise NumericalError(f"sampled matrix not unitary: residual {res:.3e}")
    return u


def gell_mann_basis(dim):
    """Orthonormal traceless Hermitian basis in dimension ``dim``.

    Returns a stack of dim**2 - 1 matrices G_k with Tr(G_j G_k) = delta_jk
    and Tr(G_k) = 0: the generalized Gell-Mann matrices scaled to unit
    Hilbert-Schmidt norm.  Order: for each pair j < k the symmetric then
    the antisymmetric element, followed by the diagonal ladder.
    """
    if dim < 1:
        raise PreconditionError(f"dim must be >= 1, got {dim}")
    out = np.zeros((dim * dim - 1, dim, dim), dtype=np.complex128)
    pos = 0
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for k in range(dim):
        for j in range(k):
            out[pos, j, k] = inv_sqrt2
            out[pos, k, j] = inv_sqrt2
            pos += 1
            out[pos, j, k] = -1j * inv_sqrt2
            out[pos, k, j] = 1j * inv_sqrt2
            pos += 1
    for level in range(1, dim):
        norm = 1.0 / np.sqrt(level * (level + 1.0))
        for n in range(level):
            out[pos, n, n] = norm
        out[pos, level, level] = -level * norm
        pos += 1
    return out

"""Shared test oracles, independent of the library code paths they check."""

from itertools import combinations

import numpy as np


def random_hermitian(dim, rng, scale=1.0):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (a + a.conj().T)


def qr_haar_unitary(dim, rng):
    """Haar-random unitary via QR of a Ginibre matrix (Mezzadri recipe)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def qubit_ket(theta, eta):
    """Two-level superposition with relative phase theta and weight angle eta."""
    return np.array(
        [np.exp(-1j * theta / 2) * np.cos(eta / 2),
         np.exp(1j * theta / 2) * np.sin(eta / 2)]
    )


def enumerate_vertices(a_mat, b_vec, tol=1e-9):
    """All vertices of {x >= 0 : Ax = b} by brute force over column subsets.

    Solves the square-ish subsystem for every support of size rank(A) and
    keeps nonnegative consistent solutions.  Only viable for small n.
    """
    m, n = a_mat.shape
    rank = np.linalg.matrix_rank(a_mat, tol=1e-10)
    vertices = []
    for support in combinations(range(n), min(rank, n)):
        sub = a_mat[:, support]
        x_s, _, _, _ = np.linalg.lstsq(sub, b_vec, rcond=None)
        if np.abs(sub @ x_s - b_vec).max() > tol:
            continue
        if x_s.min() < -tol:
            continue
        x = np.zeros(n)
        x[list(support)] = np.clip(x_s, 0.0, None)
        if not any(np.abs(x - v).max() < 1e-7 for v in vertices):
            vertices.append(x)
    return vertices


def finite_difference_fisher(povm_elements, state_fn, theta, h=1e-5, floor=1e-12):
    """Fisher information with numerically differentiated probabilities."""
    def probs(t):
        rho = state_fn(t)
        return np.einsum("ij,mji->m", rho, povm_elements).real

    q = probs(theta)
    dq = (probs(theta + h) - probs(theta - h)) / (2 * h)
    mask = q > floor
    return float(np.sum(dq[mask] ** 2 / q[mask]))


def mix_povms(p1, p2, mu):
    """Outcome-wise convex mixture of two POVMs, zero-padding the shorter."""
    n = max(p1.shape[0], p2.shape[0])
    d = p1.shape[1]
    out = np.zeros((n, d, d), dtype=np.complex128)
    out[: p1.shape[0]] += mu * p1
    out[: p2.shape[0]] += (1 - mu) * p2
    return out

"""Decomposition of rank-1 POVMs into convex combinations of extremal POVMs.

Writing the completeness condition of a rank-1 POVM in an orthonormal
traceless operator basis turns it into a small linear system over the
element traces a_i = Tr Q_i.  A phase-1 simplex solve returns a vertex of
{x >= 0 : Ax = b}; rescaling the elements by x/a gives an extremal POVM,
and peeling it off with the largest feasible probability leaves a POVM
with strictly fewer outcomes.  Iterating yields the full decomposition.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DecompositionError, NumericalError, PreconditionError
from .linalg import gell_mann_basis
from .povm import RANK_DROP_TOL, Rank1Povm
from .simplex import LP_TOL, basic_feasible_solution

RECONSTRUCT_TOL = 1e-8
WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class ConstraintSystem:
    """The linear system Ax = b encoding POVM completeness in trace space.

    Rows 1..d^2-1 of A hold the traceless-basis components of the
    unit-trace element directions; the last row is all ones, so b ends
    with the dimension d.
    """

    a_mat: np.ndarray  # (d*d, n)
    b_vec: np.ndarray  # (d*d,)


@dataclass(frozen=True)
class ExtremalDecomposition:
    """Convex combination of extremal POVMs reconstructing ``parent``."""

    parent: Rank1Povm
    terms: tuple  # of (weight, Rank1Povm with parents indexing into parent)

    @property
    def weights(self):
        return np.array([w for w, _ in self.terms])

    def reconstruct(self):
        """Sum of weighted members, elements placed at their parent index."""
        out = np.zeros_like(self.parent.elements)
        for weight, member in self.terms:
            for j, parent_idx in enumerate(member.parents):
                out[parent_idx] += weight * member.elements[j]
        return out

    def reconstruction_residual(self):
        return float(np.abs(self.reconstruct() - self.parent.elements).max())

    def to_json_dict(self):
        from .povm import to_json_dict

        return [
            {"weight": float(w), "povm": to_json_dict(member)}
            for w, member in self.terms
        ]


def build_constraints(povm, basis=None):
    """Constraint system and trace vector for a rank-1 POVM.

    A[i, j] = Tr(Q_j G_i) / a_j for the traceless basis rows, A[-1, :] = 1,
    and b = (0, ..., 0, d).  The trace vector itself solves A a = b.
    """
    d = povm.dim
    if basis is None:
        basis = gell_mann_basis(d)
    if basis.shape != (d * d - 1, d, d):
        raise PreconditionError(
            f"basis shape {basis.shape} does not match dimension {d}"
        )
    traces = np.einsum("mii->m", povm.elements).real
    if traces.min() <= RANK_DROP_TOL:
        raise PreconditionError(
            f"element with negligible trace {traces.min():.3e}; "
            "drop it before building constraints"
        )
    directions = povm.elements / traces[:, np.newaxis, np.newaxis]
    a_mat = np.empty((d * d, povm.n_outcomes))
    a_mat[:-1] = np.einsum("bij,mji->bm", basis, directions).real
    a_mat[-1] = 1.0
    b_vec = np.zeros(d * d)
    b_vec[-1] = d
    return ConstraintSystem(a_mat, b_vec), traces


def solve_vertex(system):
    """A vertex of the completeness polytope {x >= 0 : Ax = b}."""
    x = basic_feasible_solution(system.a_mat, system.b_vec)
    residual = np.abs(system.a_mat @ x - system.b_vec).max()
    if residual > 1e-7:
        raise NumericalError(f"vertex violates constraints: residual {residual:.3e}")
    return x


def extract_step(trace_vec, x_ext):
    """Largest probability p with trace_vec = p*x_ext + (1-p)*x', x' >= 0.

    Returns (p, x_prime); x_prime is None when p is within LP_TOL of 1,
    which means trace_vec is itself the vertex and the recursion stops.
    """
    support = x_ext > LP_TOL
    if not support.any():
        raise NumericalError("vertex is identically zero")
    p = float((trace_vec[support] / x_ext[support]).min())
    if p <= 0.0:
        raise NumericalError(
            f"extraction probability {p:.3e} <= 0: vertex support outside "
            "the trace vector's support"
        )
    if p >= 1.0 - LP_TOL:
        return 1.0, None
    x_prime = (trace_vec - p * x_ext) / (1.0 - p)
    if x_prime.min() < -LP_TOL:
        raise NumericalError(f"negative remainder {x_prime.min():.3e}")
    x_prime = np.clip(x_prime, 0.0, None)
    if x_prime.min() > LP_TOL:
        raise NumericalError("extraction removed no coordinate")
    return p, x_prime


def _member(povm, directions, indices, trace_values):
    elements = trace_values[:, np.newaxis, np.newaxis] * directions[indices]
    member = Rank1Povm(elements, parents=indices.copy())
    residual = member.completeness_residual()
    if residual > RECONSTRUCT_TOL:
        raise NumericalError(
            f"decomposition member violates completeness: {residual:.3e}"
        )
    return member


def decompose(povm, basis=None, max_iter=None):
    """Decompose a rank-1 POVM into weighted extremal POVMs.

    Parameters
    ----------
    povm : Rank1Povm
        POVM to decompose; every element must have positive trace.
    basis : ndarray, optional
        Orthonormal traceless basis (defaults to the Gell-Mann basis).
    max_iter : int, optional
        Iteration bound; each iteration removes at least one outcome, so
        the default (n_outcomes + 1) can only be hit on numerical failure.

    Returns
    -------
    ExtremalDecomposition
        Terms (w_k, member_k) with weights summing to one; every member
        has at most dim^2 outcomes and reconstructs the parent when
        recombined.  Members index their elements into the parent's
        outcome list via ``parents``.
    """
    n = povm.n_outcomes
    if n < 1:
        raise PreconditionError("cannot decompose an empty POVM")
    system, traces = build_constraints(povm, basis)
    directions = povm.elements / traces[:, np.newaxis, np.newaxis]

    if max_iter is None:
        max_iter = n + 1
    active = np.arange(n)
    current = traces.copy()
    remaining = 1.0
    terms = []
    for _ in range(max_iter):
        vertex = solve_vertex(
            ConstraintSystem(system.a_mat[:, active], system.b_vec)
        )
        p, x_prime = extract_step(current, vertex)
        if x_prime is None:
            terms.append((remaining, _member(povm, directions, active, current)))
            return ExtremalDecomposition(parent=povm, terms=tuple(terms))
        support = vertex > LP_TOL
        terms.append(
            (remaining * p, _member(povm, directions, active[support], vertex[support]))
        )
        keep = x_prime > LP_TOL
        active = active[keep]
        current = x_prime[keep]
        remaining *= 1.0 - p
        # The recursion divides by (1 - p), amplifying rounding drift when p
        # is close to 1; project back onto the constraint manifold so the
        # drift cannot compound across iterations.
        sub = system.a_mat[:, active]
        residual = sub @ current - system.b_vec
        if np.abs(residual).max() > 1e-12:
            correction, *_ = np.linalg.lstsq(sub, residual, rcond=None)
            current = np.clip(current - correction, 0.0, None)
    raise DecompositionError(
        f"decomposition did not terminate in {max_iter} iterations",
        partial=terms,
        residual=remaining,
    )

"""POVM construction, validation, random generation, rank-1 refinement,
and outcome statistics.

A POVM is stored as a stack of Hermitian matrices ``elements`` with shape
(n_outcomes, dim, dim) whose sum is the identity.  ``Rank1Povm`` adds a
``parents`` vector recording, for each element, the index of the element
it was derived from (by spectral refinement or by decomposition).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, PreconditionError
from .linalg import PSD_TOL, hermitian_eig, hermiticity_residual, sample_haar_unitary

COMPLETE_TOL = 1e-10
RANK_TOL = 1e-10
RANK_DROP_TOL = 1e-12


@dataclass(frozen=True)
class Povm:
    """A positive operator-valued measure over a finite outcome set."""

    elements: np.ndarray  # (n_outcomes, dim, dim) complex128

    @property
    def dim(self):
        return self.elements.shape[1]

    @property
    def n_outcomes(self):
        return self.elements.shape[0]

    def completeness_residual(self):
        """Max entrywise deviation of the element sum from the identity."""
        s = self.elements.sum(axis=0)
        return float(np.abs(s - np.eye(self.dim)).max())


@dataclass(frozen=True)
class Rank1Povm(Povm):
    """POVM whose elements are all rank-1, with per-element provenance."""

    parents: np.ndarray = field(default=None)  # (n_outcomes,) int


@dataclass(frozen=True)
class PovmReport:
    """Validation summary for a POVM."""

    completeness_residual: float
    hermiticity_residual: float
    min_eigenvalue: float
    element_min_eigenvalues: np.ndarray
    ok: bool
    failures: tuple


def projective_povm(dim):
    """The computational-basis projective measurement in dimension d."""
    e = np.zeros((dim, dim, dim), dtype=np.complex128)
    for k in range(dim):
        e[k, k, k] = 1.0
    return Povm(e)


def random_povm(dim, n_outcomes, rng):
    """Draw a random POVM with ``n_outcomes`` outcomes on dimension ``dim``.

    A random unitary U on the system-ancilla space (ancilla dimension =
    number of outcomes) is drawn from the Gaussian unitary ensemble; the
    outcome blocks V_m with entries (V_m)_ij = U[(i,m), (j,0)] define the
    elements Q_m = V_m^dagger V_m, i.e. the measurement obtained by running
    the projective dilation backwards with the ancilla in its first basis
    state.  Completeness is asserted, not assumed: a wrong index
    convention would break it.
    """
    if dim < 1 or n_outcomes < 1:
        raise PreconditionError(
            f"dim and n_outcomes must be >= 1, got {dim}, {n_outcomes}"
        )
    u = sample_haar_unitary(dim * n_outcomes, rng)
    blocks = u.reshape(dim, n_outcomes, dim, n_outcomes)[:, :, :, 0]
    elements = np.einsum("imj,imk->mjk", blocks.conj(), blocks)
    p = Povm(elements)
    res = p.completeness_residual()
    if res > COMPLETE_TOL:
        raise NumericalError(
            f"random POVM violates completeness: residual {res:.3e} "
            "(index-convention bug?)"
        )
    return p


def to_rank1(povm):
    """Refine a POVM into rank-1 pieces via spectral decomposition.

    Every element is split into its eigenpieces lam_k |v_k><v_k| with
    lam_k above RANK_DROP_TOL; negligible pieces are dropped.  Pieces are
    emitted largest eigenvalue first and labeled with the index of the
    element they came from.  The number of outcomes can change.
    """
    pieces = []
    parents = []
    for m in range(povm.n_outcomes):
        w, v = hermitian_eig(povm.elements[m])
        for k in range(len(w) - 1, -1, -1):
            if w[k] <= RANK_DROP_TOL:
                break
            vec = v[:, k]
            pieces.append(w[k] * np.outer(vec, vec.conj()))
            parents.append(m)
    return Rank1Povm(np.array(pieces), parents=np.array(parents, dtype=int))


def outcome_distribution(povm, rho):
    """Outcome probabilities Tr(rho Q_m) for a state rho, clamped to [0, 1]."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (povm.dim, povm.dim):
        raise PreconditionError(
            f"state shape {rho.shape} does not match POVM dimension {povm.dim}"
        )
    q = np.einsum("ij,mji->m", rho, povm.elements).real
    if q.min() < -PSD_TOL:
        raise NumericalError(f"outcome probability {q.min():.3e} < -{PSD_TOL}")
    return np.clip(q, 0.0, 1.0)


def validate(povm):
    """Check the POVM invariants and report residuals.

    Verifies hermiticity of every element, positive semidefiniteness
    (minimum eigenvalue >= -PSD_TOL), and completeness of the sum.
    """
    herm = max(hermiticity_residual(e) for e in povm.elements)
    failures = []
    if herm > 1e-10:
        failures.append(f"hermiticity residual {herm:.3e}")
    mins = []
    for e in povm.elements:
        sym = 0.5 * (e + e.conj().T)
        w, _ = hermitian_eig(sym, check=False)
        mins.append(w[0])
    mins = np.array(mins)
    if mins.min() < -PSD_TOL:
        failures.append(f"negative eigenvalue {mins.min():.3e}")
    comp = povm.completeness_residual()
    if comp > COMPLETE_TOL:
        failures.append(f"completeness residual {comp:.3e}")
    return PovmReport(
        completeness_residual=comp,
        hermiticity_residual=herm,
        min_eigenvalue=float(mins.min()),
        element_min_eigenvalues=mins,
        ok=not failures,
        failures=tuple(failures),
    )


def to_json_dict(povm):
    """JSON-ready dict: {"dim": d, "elements": [[[re, im], ...], ...]}.

    Each element is a flat row-major list of [re, im] pairs of length d*d.
    """
    d = povm.dim
    elements = []
    for e in povm.elements:
        flat = e.reshape(d * d)
        elements.append([[float(z.real), float(z.imag)] for z in flat])
    return {"dim": d, "elements": elements}


def from_json_dict(doc):
    """Rebuild a POVM from its JSON dict, validating the invariants."""
    d = int(doc["dim"])
    elements = []
    for entry in doc["elements"]:
        flat = np.array([complex(re, im) for re, im in entry])
        if flat.size != d * d:
            raise PreconditionError(
                f"element has {flat.size} entries, expected {d * d}"
            )
        elements.append(flat.reshape(d, d))
    p = Povm(np.array(elements))
    report = validate(p)
    if not report.ok:
        raise PreconditionError(
            "stored POVM violates invariants: " + "; ".join(report.failures)
        )
    return p


def save_povm(povm, path):
    with open(path, "w") as fh:
        json.dump(to_json_dict(povm), fh)


def load_povm(path):
    with open(path) as fh:
        return from_json_dict(json.load(fh))

"""Convex cost functionals over POVMs.

Two cost kinds are supported: the Fisher information of the outcome
distribution at a fixed parameter value, and the Bayesian (Van Trees)
information under a prior, which adds the prior-averaged Fisher
information to the prior's own.  Both are convex over POVMs, which is
what makes searching only extremal measurements sufficient.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .models import CoherentPhaseModel, qubit_state
from .povm import Povm

PROB_FLOOR = 1e-12
DERIV_FLOOR = 1e-9


@dataclass(frozen=True)
class CostResult:
    """Evaluation record: total value and its two addends.

    ``n_capped`` counts outcome/parameter pairs where the probability fell
    below PROB_FLOOR while its derivative did not, i.e. directions where
    the Fisher information is formally unbounded; their contribution is
    capped at derivative^2 / PROB_FLOOR so the search stays finite and the
    record auditable.
    """

    value: float
    fisher_term: float
    prior_term: float
    n_capped: int

    @property
    def flagged(self):
        return self.n_capped > 0


class CostFunction:
    """Cost functional POVM -> real, reusable across many evaluations.

    State and derivative stacks over the evaluation grid are computed once
    per instance, so evaluating thousands of candidate POVMs only costs
    two matrix products each.
    """

    def __init__(self, model, theta0=None, prior=None):
        if (theta0 is None) == (prior is None):
            raise PreconditionError("specify exactly one of theta0 and prior")
        self.model = model
        self.theta0 = theta0
        self.prior = prior
        self._cache = None

    @classmethod
    def fisher_at(cls, model, theta0):
        return cls(model, theta0=float(theta0))

    @classmethod
    def van_trees(cls, model, prior):
        return cls(model, prior=prior)

    @property
    def kind(self):
        return "fisher_at" if self.prior is None else "van_trees"

    def descriptor(self):
        doc = {"cost": self.kind, **self.model.descriptor()}
        if self.prior is None:
            doc["theta0"] = self.theta0
        else:
            doc.update(self.prior.descriptor())
        return doc

    def _stacks(self):
        if self._cache is None:
            if self.prior is None:
                thetas = np.array([self.theta0])
                weighted = np.array([1.0])
                prior_term = 0.0
            else:
                thetas, quad_w = self.prior.grid()
                weighted = quad_w * self.prior.pdf(thetas)
                prior_term = self.prior.fisher()
            dim = self.model.dim
            rho = np.array([self.model.state(t) for t in thetas])
            drho = np.array([self.model.derivative(t) for t in thetas])
            self._cache = (
                rho.reshape(len(thetas), dim * dim),
                drho.reshape(len(thetas), dim * dim),
                weighted,
                prior_term,
            )
        return self._cache

    def record(self, povm):
        """Evaluation as a flat dict row (descriptors, value, terms, flags)."""
        result = self.evaluate(povm)
        row = {
            "cost": self.kind,
            "value": result.value,
            "fisher_term": result.fisher_term,
            "prior_term": result.prior_term,
            "flags": {"n_capped": result.n_capped},
        }
        row.update(self.model.descriptor())
        if self.prior is not None:
            row.update(self.prior.descriptor())
        else:
            row["theta0"] = self.theta0
        return row

    def evaluate(self, povm):
        """Full evaluation record for one POVM."""
        elements = povm.elements if isinstance(povm, Povm) else np.asarray(povm)
        if elements.ndim != 3 or elements.shape[1] != self.model.dim:
            raise PreconditionError(
                f"POVM shape {elements.shape} does not match model dimension "
                f"{self.model.dim}"
            )
        rho_flat, drho_flat, weighted, prior_term = self._stacks()
        # Tr(rho Q) for every grid point x outcome in one product
        flat = elements.transpose(0, 2, 1).reshape(elements.shape[0], -1)
        probs = (rho_flat @ flat.T).real
        dprobs = (drho_flat @ flat.T).real
        ok = probs > PROB_FLOOR
        contrib = np.where(ok, dprobs**2 / np.where(ok, probs, 1.0), 0.0)
        capped = ~ok & (np.abs(dprobs) > DERIV_FLOOR)
        n_capped = int(capped.sum())
        if n_capped:
            contrib = contrib + np.where(capped, dprobs**2 / PROB_FLOOR, 0.0)
        fisher_term = float(weighted @ contrib.sum(axis=1))
        return CostResult(
            value=fisher_term + prior_term,
            fisher_term=fisher_term,
            prior_term=prior_term,
            n_capped=n_capped,
        )

    def __call__(self, povm):
        return self.evaluate(povm).value


def fisher_information(povm, model, theta):
    """Fisher information of the outcome distribution of ``povm`` on
    ``model.state(theta)``: sum over outcomes of Tr(rho' Q)^2 / Tr(rho Q)."""
    return CostFunction.fisher_at(model, theta).evaluate(povm).value


def van_trees_information(povm, model, prior):
    """Prior-averaged Fisher information plus the prior's own Fisher
    information.  The two addends are reported separately by
    ``CostFunction.van_trees(model, prior).evaluate(povm)``."""
    return CostFunction.van_trees(model, prior).evaluate(povm).value


@dataclass(frozen=True)
class AnsatzFamily:
    """Two-outcome measurement family {rho(xi), 1 - rho(xi)} generated by a
    rank-1 state function."""

    generator: object  # callable xi -> density matrix
    dim: int

    def povm(self, xi):
        proj = self.generator(xi)
        return Povm(np.array([proj, np.eye(self.dim) - proj]))


class _QubitGenerator:
    def __init__(self, eta):
        self.eta = eta

    def __call__(self, xi):
        return qubit_state(xi, self.eta)


def qubit_ansatz(eta):
    """Family of two-outcome qubit measurements along |psi(xi, eta)>."""
    return AnsatzFamily(generator=_QubitGenerator(eta), dim=2)


def coherent_ansatz(alpha, dim):
    """Family of two-outcome projections onto rotated coherent states."""
    return AnsatzFamily(generator=CoherentPhaseModel(alpha, dim).state, dim=dim)


def ansatz_scan(family, cost, xi_grid=None):
    """Maximize ``cost`` over the two-outcome family on a grid of xi.

    Returns (best xi, best value); values within 1e-9 relative of the
    maximum count as tied and the smallest xi among them wins, so a flat
    scan reports the first grid point rather than quadrature noise.
    """
    if xi_grid is None:
        xi_grid = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)
    xi_grid = np.asarray(xi_grid, dtype=float)
    if xi_grid.size == 0:
        raise PreconditionError("empty xi grid")
    values = np.array([cost(family.povm(xi)) for xi in xi_grid])
    best = values.max()
    tie = values >= best - 1e-9 * max(1.0, abs(best))
    index = int(np.nonzero(tie)[0][0])
    return float(xi_grid[index]), float(values[index])

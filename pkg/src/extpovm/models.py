"""Parameterized quantum statistical models and prior distributions.

Three single-parameter families, each exposing ``state(theta)`` and its
analytic derivative ``derivative(theta)``:

* ``QubitPhaseModel`` - a two-level superposition with relative phase
  theta and a known weight angle eta,
* ``CoherentPhaseModel`` - a phase-rotated coherent state on a truncated
  Fock space,
* ``CoherentThermalModel`` - a phase-rotated mixture of a coherent and a
  thermal state.

Priors over the parameter provide a pdf, its log-derivative, and a
composite Gauss-Legendre quadrature grid used for Bayesian information
functionals.
"""

import math
import warnings

import numpy as np

from .errors import PreconditionError

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# states and derivatives


def qubit_ket(theta, eta):
    return np.array(
        [
            np.exp(-0.5j * theta) * np.cos(eta / 2),
            np.exp(0.5j * theta) * np.sin(eta / 2),
        ],
        dtype=np.complex128,
    )


def qubit_state(theta, eta):
    """Pure qubit state with amplitudes (e^{-i theta/2} cos(eta/2),
    e^{+i theta/2} sin(eta/2))."""
    k = qubit_ket(theta, eta)
    return np.outer(k, k.conj())


def phase_derivative(rho, n_op):
    """Derivative of e^{i theta n} rho e^{-i theta n} in theta: i[n, rho]."""
    rho = np.asarray(rho, dtype=np.complex128)
    n_op = np.asarray(n_op, dtype=np.complex128)
    if rho.shape != n_op.shape:
        raise PreconditionError(
            f"shape mismatch: state {rho.shape}, generator {n_op.shape}"
        )
    out = 1j * (n_op @ rho - rho @ n_op)
    herm = np.abs(out - out.conj().T).max()
    if herm > 1e-12 * max(1.0, np.abs(out).max()):
        raise PreconditionError(f"commutator not Hermitian: residual {herm:.3e}")
    return out


def coherent_amplitudes(alpha, dim):
    """Unnormalized Fock amplitudes alpha^n / sqrt(n!) for n < dim."""
    amps = np.empty(dim, dtype=np.complex128)
    amps[0] = 1.0
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def coherent_truncated_weight(alpha, dim):
    """Probability mass of the coherent state outside the first dim levels."""
    amps = coherent_amplitudes(alpha, dim)
    kept = float((np.abs(amps) ** 2).sum()) * math.exp(-abs(alpha) ** 2)
    return max(0.0, 1.0 - kept)


def coherent_state(alpha, dim):
    """Truncated, renormalized coherent state |alpha><alpha| on dim levels."""
    if dim < 1:
        raise PreconditionError(f"dim must be >= 1, got {dim}")
    amps = coherent_amplitudes(alpha, dim)
    amps = amps / np.linalg.norm(amps)
    return np.outer(amps, amps.conj())


def thermal_weights(nbar, dim):
    """Truncated, renormalized geometric photon distribution."""
    n = np.arange(dim)
    w = nbar**n / (1.0 + nbar) ** (n + 1)
    return w / w.sum()


def coherent_thermal_state(theta, model):
    """State of a CoherentThermalModel at parameter value theta."""
    return model.state(theta)


# ---------------------------------------------------------------------------
# models


class QubitPhaseModel:
    """Two-level phase model; eta in [0, pi] fixes the superposition weights."""

    def __init__(self, eta):
        if not 0.0 <= eta <= np.pi:
            raise PreconditionError(f"eta must lie in [0, pi], got {eta}")
        self.eta = float(eta)
        self.dim = 2

    def state(self, theta):
        return qubit_state(theta, self.eta)

    def derivative(self, theta):
        k = qubit_ket(theta, self.eta)
        dk = np.array([-0.5j * k[0], 0.5j * k[1]])
        return np.outer(dk, k.conj()) + np.outer(k, dk.conj())

    def descriptor(self):
        return {"model": "qubit_phase", "eta": self.eta, "dim": self.dim}


class CoherentPhaseModel:
    """Phase-rotated coherent state e^{i n theta}|alpha> on a truncated
    Fock space, renormalized after truncation."""

    def __init__(self, alpha, dim):
        if dim < 1:
            raise PreconditionError(f"dim must be >= 1, got {dim}")
        self.alpha = complex(alpha)
        self.dim = int(dim)
        self.truncated_weight = coherent_truncated_weight(self.alpha, self.dim)
        amps = coherent_amplitudes(self.alpha, self.dim)
        self._amps = amps / np.linalg.norm(amps)
        self._levels = np.arange(self.dim)
        self._n_op = np.diag(self._levels).astype(np.complex128)

    def state(self, theta):
        amps = self._amps * np.exp(1j * theta * self._levels)
        return np.outer(amps, amps.conj())

    def derivative(self, theta):
        return phase_derivative(self.state(theta), self._n_op)

    def descriptor(self):
        return {
            "model": "coherent_phase",
            "alpha": [self.alpha.real, self.alpha.imag],
            "dim": self.dim,
            "truncated_weight": self.truncated_weight,
            "truncation_warning": self.truncated_weight > 0.1,
        }


class CoherentThermalModel:
    """Phase-rotated mixture of a coherent state (weight ``mix``) and a
    thermal state (weight 1 - mix) with mean occupation nbar.

    nbar defaults to |alpha|^2, tying the thermal occupation to the
    coherent amplitude.
    """

    def __init__(self, alpha, mix, dim, nbar=None):
        if not 0.0 <= mix <= 1.0:
            raise PreconditionError(f"mix must lie in [0, 1], got {mix}")
        if dim < 1:
            raise PreconditionError(f"dim must be >= 1, got {dim}")
        self.alpha = complex(alpha)
        self.mix = float(mix)
        self.dim = int(dim)
        self.nbar = abs(self.alpha) ** 2 if nbar is None else float(nbar)
        self.truncated_weight = coherent_truncated_weight(self.alpha, self.dim)
        base = self.mix * coherent_state(self.alpha, self.dim)
        base += (1.0 - self.mix) * np.diag(thermal_weights(self.nbar, self.dim))
        self._base = base
        self._levels = np.arange(self.dim)
        self._n_op = np.diag(self._levels).astype(np.complex128)

    def state(self, theta):
        phases = np.exp(1j * theta * self._levels)
        return self._base * np.outer(phases, phases.conj())

    def derivative(self, theta):
        return phase_derivative(self.state(theta), self._n_op)

    def descriptor(self):
        return {
            "model": "coherent_thermal",
            "alpha": [self.alpha.real, self.alpha.imag],
            "mix": self.mix,
            "nbar": self.nbar,
            "dim": self.dim,
            "truncated_weight": self.truncated_weight,
            "truncation_warning": self.truncated_weight > 0.1,
        }


# ---------------------------------------------------------------------------
# priors


class Prior:
    """Probability density on [lo, hi] with a composite Gauss-Legendre grid.

    Subclasses define pdf(theta) and log_derivative(theta) (both accept
    arrays).  ``n_nodes`` Gauss-Legendre nodes are placed on each of
    ``n_panels`` equal panels.
    """

    def __init__(self, lo, hi, n_nodes=64, n_panels=1):
        if hi <= lo:
            raise PreconditionError(f"empty support [{lo}, {hi}]")
        if n_nodes < 2 or n_panels < 1:
            raise PreconditionError("need n_nodes >= 2 and n_panels >= 1")
        self.lo = float(lo)
        self.hi = float(hi)
        self.n_nodes = int(n_nodes)
        self.n_panels = int(n_panels)
        self._grid = None

    def grid(self):
        """Quadrature nodes and weights covering the support."""
        if self._grid is None:
            base_x, base_w = np.polynomial.legendre.leggauss(self.n_nodes)
            edges = np.linspace(self.lo, self.hi, self.n_panels + 1)
            nodes, weights = [], []
            for left, right in zip(edges[:-1], edges[1:]):
                half = 0.5 * (right - left)
                nodes.append(half * (base_x + 1.0) + left)
                weights.append(half * base_w)
            self._grid = (np.concatenate(nodes), np.concatenate(weights))
        return self._grid

    def normalization(self):
        nodes, weights = self.grid()
        return float(weights @ self.pdf(nodes))

    def fisher(self):
        """Fisher information of the prior itself: E[(d log pdf / d theta)^2]."""
        nodes, weights = self.grid()
        lam = self.pdf(nodes)
        positive = lam > 0
        if not positive.all():
            warnings.warn(
                "prior density vanishes on interior grid points; skipped",
                stacklevel=2,
            )
        score = self.log_derivative(nodes[positive])
        return float((weights[positive] * lam[positive]) @ score**2)


def prior_fisher(prior):
    """Quadrature of (d log pdf / d theta)^2 over the prior."""
    return prior.fisher()


class UniformPrior(Prior):
    def __init__(self, lo=0.0, hi=TWO_PI, n_nodes=64, n_panels=1):
        super().__init__(lo, hi, n_nodes, n_panels)

    def pdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        inside = (theta >= self.lo) & (theta <= self.hi)
        return inside / (self.hi - self.lo)

    def log_derivative(self, theta):
        return np.zeros_like(np.asarray(theta, dtype=float))

    def descriptor(self):
        return {"prior": "uniform", "lo": self.lo, "hi": self.hi}


class TrimmedGaussianPrior(Prior):
    """Gaussian restricted to [lo, hi] and renormalized."""

    def __init__(self, mean=np.pi, sigma=np.pi / 4, lo=0.0, hi=TWO_PI,
                 n_nodes=64, n_panels=1):
        super().__init__(lo, hi, n_nodes, n_panels)
        if sigma <= 0:
            raise PreconditionError(f"sigma must be positive, got {sigma}")
        self.mean = float(mean)
        self.sigma = float(sigma)
        root2 = math.sqrt(2.0)
        self._mass = 0.5 * (
            math.erf((self.hi - self.mean) / (root2 * self.sigma))
            - math.erf((self.lo - self.mean) / (root2 * self.sigma))
        )

    def pdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        gauss = np.exp(-0.5 * ((theta - self.mean) / self.sigma) ** 2) / (
            self.sigma * math.sqrt(TWO_PI)
        )
        inside = (theta >= self.lo) & (theta <= self.hi)
        return inside * gauss / self._mass

    def log_derivative(self, theta):
        return -(np.asarray(theta, dtype=float) - self.mean) / self.sigma**2

    def descriptor(self):
        return {
            "prior": "trimmed_gaussian",
            "mean": self.mean,
            "sigma": self.sigma,
            "lo": self.lo,
            "hi": self.hi,
        }


def _erlang_survival(x, shape, scale):
    # closed form for integer shape: P(X > x)
    z = x / scale
    total = 0.0
    term = 1.0
    for k in range(shape):
        if k > 0:
            term *= z / k
        total += term
    return math.exp(-z) * total


class GammaPrior(Prior):
    """Gamma distribution truncated where its tail mass drops below
    ``tail_mass`` and renormalized.  The parameter is treated on the
    distribution's natural support; values beyond 2*pi are not wrapped."""

    def __init__(self, shape=4, scale=1.5, tail_mass=1e-6, hi=None,
                 n_nodes=32, n_panels=None):
        if shape < 1 or int(shape) != shape:
            raise PreconditionError(
                f"integer shape >= 1 required for the closed-form tail, got {shape}"
            )
        if scale <= 0:
            raise PreconditionError(f"scale must be positive, got {scale}")
        self.shape = int(shape)
        self.scale = float(scale)
        if hi is None:
            lo_x, hi_x = 0.0, self.scale * (self.shape + 1.0)
            while _erlang_survival(hi_x, self.shape, self.scale) > tail_mass:
                hi_x *= 2.0
            for _ in range(200):
                mid = 0.5 * (lo_x + hi_x)
                if _erlang_survival(mid, self.shape, self.scale) > tail_mass:
                    lo_x = mid
                else:
                    hi_x = mid
            hi = hi_x
        if n_panels is None:
            n_panels = max(1, math.ceil(hi / TWO_PI))
        super().__init__(0.0, hi, n_nodes, n_panels)
        self._mass = 1.0 - _erlang_survival(self.hi, self.shape, self.scale)
        self._log_norm = (
            math.lgamma(self.shape) + self.shape * math.log(self.scale)
        )

    def pdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pdf = (
                (self.shape - 1) * np.log(theta)
                - theta / self.scale
                - self._log_norm
            )
            out = np.where(theta > 0, np.exp(log_pdf), 0.0)
        inside = (theta >= self.lo) & (theta <= self.hi)
        return inside * out / self._mass

    def log_derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (self.shape - 1) / theta - 1.0 / self.scale

    def descriptor(self):
        return {
            "prior": "gamma",
            "shape": self.shape,
            "scale": self.scale,
            "hi": self.hi,
        }


# ---------------------------------------------------------------------------
# closed-form qubit references


def analytic_qubit_fisher(xi, eta, theta):
    """Fisher information of the two-outcome qubit measurement at offset xi.

    Equals sin^2(eta) / (1 + cos^2(eta) tan^2((xi - theta)/2)), evaluated
    through an equivalent cos^2 form that stays finite at the tangent
    pole: there the value is 0, except for eta = pi/2 where the Fisher
    information is xi-independent and equals sin^2(eta).
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    half = (xi - theta) / 2.0
    c2 = np.cos(half) ** 2
    s2 = np.sin(half) ** 2
    k2 = np.cos(eta) ** 2
    num = np.sin(eta) ** 2 * c2
    den = c2 + k2 * s2
    at_pole = den < 1e-30
    safe_den = np.where(at_pole, 1.0, den)
    value = np.where(at_pole, np.where(k2 < 1e-30, np.sin(eta) ** 2, 0.0),
                     num / safe_den)
    return value if value.ndim else float(value)


def analytic_zqp(eta):
    """Best Bayesian information over the two-outcome family with a flat
    phase prior: 1 - |cos(eta)|."""
    value = 1.0 - np.abs(np.cos(np.asarray(eta, dtype=float)))
    return value if value.ndim else float(value)

"""Pointer families and the matrices that enter the conditional readout.

Three families are supported:

* ``gaussian``: G_i(x) proportional to exp(-(x - eta*alpha_i)^2 / 4 sigma^2),
  read out with chi = x and mu = 2 sigma^2 (-i d/dx).
* ``pulse``: a few-cycle pulse, Gaussian envelope times
  cos(omega (tau - eta*alpha_i) + cep), read out with chi = tau and
  mu = kappa (-i d/dtau), kappa calibrated numerically at small eta.
* ``qubit``: |Q_i> = cos(eta alpha_i)|1> + sin(eta alpha_i)|0>, read out
  with chi = sigma_x and mu = -sigma_y.

Qubit pointer states are stored as length-2 arrays in the (|0>, |1>) basis.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractViolation, UnsupportedFamily
from .grid import DEFAULT_POINTS, Grid, GridFunction, derivative
from .hilbert import MeasuredObservable

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Strength used for the small-eta calibration of the pulse's mu scale.
CALIBRATION_ETA = 1e-3
#: Envelope widths kept between a shifted pointer centre and the grid edge.
ENVELOPE_MARGIN = 10.0


class Kind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    PULSE = "pulse"
    QUBIT = "qubit"


@dataclass(frozen=True)
class PointerFamily:
    kind: Kind
    sigma: float = 1.0
    omega: float = 4.0
    cep: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.continuous and not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.kind is Kind.PULSE and not self.omega > 0:
            raise ValueError("omega must be positive")

    @classmethod
    def gaussian(cls, sigma=1.0):
        return cls(Kind.GAUSSIAN, sigma=sigma)

    @classmethod
    def pulse(cls, sigma=1.0, omega=4.0, cep=0.0):
        return cls(Kind.PULSE, sigma=sigma, omega=omega, cep=cep)

    @classmethod
    def qubit(cls):
        return cls(Kind.QUBIT)

    @property
    def continuous(self) -> bool:
        return self.kind is not Kind.QUBIT

    @property
    def name(self) -> str:
        return self.kind.value

    def eta_eff(self, eta: float) -> float:
        """Unit constant relating pointer shifts to eigenvalues.

        For the qubit this is twice the reduced strength, the distance from
        ``eta`` to the nearest multiple of pi.
        """
        if self.kind is Kind.QUBIT:
            return 2.0 * (eta - np.pi * np.round(eta / np.pi))
        return float(eta)


def default_grid(family: PointerFamily, eta: float, alphas,
                 n_points: int = DEFAULT_POINTS, halfwidth: float | None = None) -> Grid:
    """Symmetric grid wide enough for every shifted pointer state."""
    if halfwidth is None:
        shift = abs(eta) * float(np.max(np.abs(alphas)))
        halfwidth = ENVELOPE_MARGIN * family.sigma + shift
    return Grid.symmetric(halfwidth, n_points)


def make_pointer_state(family: PointerFamily, eta: float, alpha: float,
                       grid: Grid | None = None):
    """Unit-normalized pointer state shifted by ``eta * alpha``.

    Returns a :class:`GridFunction` for continuous families and a length-2
    complex array for the qubit.  Raises :class:`DomainTooSmall` if the grid
    does not contain the shifted state.
    """
    shift = eta * alpha
    if family.kind is Kind.QUBIT:
        return np.array([np.sin(shift), np.cos(shift)], dtype=complex)
    if grid is None:
        grid = default_grid(family, eta, [alpha])
    u = grid.x - shift
    envelope = np.exp(-u ** 2 / (4 * family.sigma ** 2))
    if family.kind is Kind.GAUSSIAN:
        values = (2 * np.pi * family.sigma ** 2) ** -0.25 * envelope
    else:
        values = envelope * np.cos(family.omega * u + family.cep)
        values = values / np.sqrt(grid.weights @ (values * values))
    return GridFunction(grid, values).require_decay()


@lru_cache(maxsize=64)
def pulse_mu_scale(sigma: float, omega: float, cep: float = 0.0,
                   n_points: int = DEFAULT_POINTS) -> float:
    """Calibration constant kappa for the pulse's conjugate readout.

    Chosen so that mu_10 = i eta/2 for a pair of pulses separated by a small
    ``CALIBRATION_ETA``.
    """
    family = PointerFamily.pulse(sigma, omega, cep)
    grid = default_grid(family, CALIBRATION_ETA, [1.0], n_points)
    e0 = make_pointer_state(family, 0.0, 0.0, grid)
    e1 = make_pointer_state(family, CALIBRATION_ETA, 1.0, grid)
    raw = grid.weights @ (e1.values.conj() * -1j * derivative(e0.values, grid.spacing))
    return (CALIBRATION_ETA / 2) / abs(raw)


def mu_scale(family: PointerFamily, n_points: int = DEFAULT_POINTS) -> float:
    """Factor multiplying -i d/dx in the conjugate readout observable."""
    if family.kind is Kind.GAUSSIAN:
        return 2 * family.sigma ** 2
    if family.kind is Kind.PULSE:
        return pulse_mu_scale(family.sigma, family.omega, family.cep, n_points)
    raise UnsupportedFamily("the qubit readout is a Pauli matrix, not a derivative")


def qubit_readout(which: str) -> np.ndarray:
    if which == "chi":
        return SIGMA_X
    if which == "mu":
        return -SIGMA_Y
    raise ValueError(f"unknown readout {which!r}")


@dataclass(frozen=True)
class PointerMatrices:
    """Gram matrix D_mn = <xi_m|xi_n> and readout matrices chi_mn, mu_mn."""

    D: np.ndarray
    chi: np.ndarray
    mu: np.ndarray
    eta: float
    alphas: np.ndarray
    eta_eff: float

    @property
    def D10(self) -> complex:
        return complex(self.D[1, 0])


def _stack(xis) -> np.ndarray:
    return np.array([xi.values if isinstance(xi, GridFunction) else xi for xi in xis])


def matrices_from_states(xis, family: PointerFamily):
    """(D, chi, mu) for an explicit list of pointer states.

    All states must be of the same kind (grid functions on one grid, or
    qubit vectors).
    """
    V = _stack(xis)
    if isinstance(xis[0], GridFunction):
        grid = xis[0].grid
        if any(xi.grid != grid for xi in xis):
            raise ValueError("pointer states live on different grids")
        if not family.continuous:
            raise ValueError("grid pointer states need a continuous family")
        Vw = V.conj() * grid.weights
        D = Vw @ V.T
        chi = Vw @ (grid.x * V).T
        mu = mu_scale(family, grid.n_points) * (Vw @ (-1j * derivative(V, grid.spacing)).T)
    else:
        if family.kind is not Kind.QUBIT or V.shape[1] != 2:
            raise UnsupportedFamily("discrete pointer states need the qubit family")
        D = V.conj() @ V.T
        chi = V.conj() @ (qubit_readout("chi") @ V.T)
        mu = V.conj() @ (qubit_readout("mu") @ V.T)
    return D, chi, mu


def pointer_matrices(family: PointerFamily, eta: float, A: MeasuredObservable,
                     grid: Grid | None = None) -> PointerMatrices:
    """Numerically evaluated pointer matrices for the von Neumann pointer
    states of ``family`` at strength ``eta``."""
    alphas = A.eigenvalues
    if family.continuous and grid is None:
        grid = default_grid(family, eta, alphas)
    xis = [make_pointer_state(family, eta, a, grid) for a in alphas]
    D, chi, mu = matrices_from_states(xis, family)
    return PointerMatrices(D, chi, mu, float(eta), alphas, family.eta_eff(eta))


def closed_form_matrices(family: PointerFamily, eta: float,
                         A: MeasuredObservable) -> PointerMatrices:
    """Analytic pointer matrices (Gaussian and qubit only)."""
    a = A.eigenvalues
    diff = a[:, None] - a[None, :]
    tot = a[:, None] + a[None, :]
    if family.kind is Kind.GAUSSIAN:
        D = np.exp(-(eta * diff) ** 2 / (8 * family.sigma ** 2)).astype(complex)
        chi = eta * tot / 2 * D
        mu = 1j * eta * diff / 2 * D
    elif family.kind is Kind.QUBIT:
        D = np.cos(eta * diff).astype(complex)
        chi = np.sin(eta * tot).astype(complex)
        mu = 1j * np.sin(eta * diff)
    else:
        raise UnsupportedFamily("no closed form for the optical pulse; use pointer_matrices")
    return PointerMatrices(D, chi, mu, float(eta), a, family.eta_eff(eta))


def condition_residuals(M: PointerMatrices) -> tuple[float, float, float]:
    """Deviation of the pointer matrices from the three weak value conditions.

    The readout residuals are taken against the conditions scaled by D_mn,
    which separates them from the indistinguishability condition.
    """
    a = M.alphas
    diff = a[:, None] - a[None, :]
    tot = a[:, None] + a[None, :]
    r_D = np.max(np.abs(M.D - 1))
    r_chi = np.max(np.abs(M.chi - M.eta_eff * tot / 2 * M.D))
    r_mu = np.max(np.abs(M.mu - 1j * M.eta_eff * diff / 2 * M.D))
    return float(r_D), float(r_chi), float(r_mu)


def check_hermitian(M: np.ndarray, name: str, tol: float = 1e-9):
    err = np.max(np.abs(M - M.conj().T))
    if err > tol:
        raise ContractViolation(f"{name} is not Hermitian (residue {err:.2e})")

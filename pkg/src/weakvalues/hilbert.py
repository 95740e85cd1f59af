"""Small discrete Hilbert spaces: system states, diagonal observables and
weak values.

Everything here is expressed in the eigenbasis of the measured observable,
so an observable is just its list of eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroPostSelection

NORM_TOL = 1e-12
#: |<f|psi>| below this is treated as a failed post-selection.
ZERO_OVERLAP_TOL = 1e-12


@dataclass(frozen=True)
class SystemState:
    """Normalized pure state of the measured system."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).ravel()
        if amps.size < 2:
            raise ValueError("system dimension must be at least 2")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state amplitudes must be finite")
        norm = np.sum(np.abs(amps) ** 2)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, amps) -> "SystemState":
        """Build a state from unnormalized amplitudes."""
        amps = np.asarray(amps, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> "SystemState":
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def phased(self, gamma: float) -> "SystemState":
        """The same ray with an extra global phase exp(i*gamma)."""
        return SystemState(self.amps * np.exp(1j * gamma))

    def __len__(self):
        return self.dim


@dataclass(frozen=True)
class MeasuredObservable:
    """Observable diagonal in the system basis, A = sum_n alpha_n |a_n><a_n|."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        vals = np.array(self.eigenvalues, dtype=float).ravel()
        if vals.size < 2:
            raise ValueError("observable needs at least two eigenvalues")
        if not np.all(np.isfinite(vals)):
            raise ValueError("eigenvalues must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)

    @classmethod
    def projector(cls, dim: int = 2, index: int = 1) -> "MeasuredObservable":
        """The projector onto one basis state; ``projector(2, 1)`` is |1><1|
        on a qubit, with eigenvalues (0, 1)."""
        vals = np.zeros(dim)
        vals[index] = 1.0
        return cls(vals)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def _check(self, state: SystemState):
        if state.dim != self.dim:
            raise ValueError(
                f"observable has dimension {self.dim}, state has {state.dim}")


def _amps(u):
    return u.amps if isinstance(u, SystemState) else np.asarray(u, dtype=complex)


def inner(u, v) -> complex:
    """<u|v>, conjugating the first argument."""
    a, b = _amps(u), _amps(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def expectation(psi: SystemState, A: MeasuredObservable) -> float:
    A._check(psi)
    return float(np.sum(A.eigenvalues * np.abs(psi.amps) ** 2))


def weak_value(psi: SystemState, f: SystemState, A: MeasuredObservable) -> complex:
    """<f|A|psi> / <f|psi>.

    Raises
    ------
    ZeroPostSelection
        If ``|<f|psi>|`` is below :data:`ZERO_OVERLAP_TOL`.
    """
    A._check(psi)
    overlap = inner(f, psi)
    if abs(overlap) < ZERO_OVERLAP_TOL:
        raise ZeroPostSelection(f"|<f|psi>| = {abs(overlap):.3e}")
    return complex(np.vdot(f.amps, A.eigenvalues * psi.amps)) / overlap


def flip(f: SystemState) -> SystemState:
    """sigma_z |f> for a two-level system."""
    if f.dim != 2:
        raise ValueError("the sigma_z flip is only defined for two-level systems")
    return SystemState(f.amps * np.array([1.0, -1.0]))


def random_state(dim: int, rng: np.random.Generator) -> SystemState:
    """Haar-random pure state."""
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return SystemState.normalized(z)

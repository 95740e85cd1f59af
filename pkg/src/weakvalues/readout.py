"""Conditional pointer expectations after post-selecting the system.

Two independent routes are provided.  :func:`conditional_expectation` works
from the branch weights and the pointer matrices D_mn, O_mn;
:func:`brute_force_oracle` projects the explicit joint state onto <f| and
takes the Rayleigh quotient of the resulting pointer state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grid as g
from .entangler import EntangledState
from .errors import ContractViolation, ZeroPostSelection
from .hilbert import ZERO_OVERLAP_TOL, MeasuredObservable, SystemState, weak_value
from .pointers import PointerFamily, mu_scale, qubit_readout

#: Largest tolerated imaginary part of a Hermitian expectation value.
IMAG_TOL = 1e-9


def _check_f(state: EntangledState, f: SystemState):
    if f.dim != state.dim:
        raise ValueError(f"post-selection has dimension {f.dim}, state has {state.dim}")


def _family(state: EntangledState) -> PointerFamily:
    if state.family is None:
        raise ValueError("state has no pointer family; pass an explicit readout matrix")
    return state.family


def _apply(state: EntangledState, O, V: np.ndarray) -> np.ndarray:
    """Apply readout ``O`` to each row of pointer samples ``V``."""
    grid = state.grid
    if isinstance(O, str):
        if grid is None:
            return V @ qubit_readout(O).T
        if O == "chi":
            return grid.x * V
        if O == "mu":
            scale = mu_scale(_family(state), grid.n_points)
            return scale * -1j * g.derivative(V, grid.spacing)
        raise ValueError(f"unknown readout {O!r}")
    if grid is not None:
        raise ValueError("explicit readout matrices only apply to discrete pointers")
    return V @ np.asarray(O, dtype=complex).T


def branch_weights(state: EntangledState, f: SystemState) -> np.ndarray:
    """w[n, m] = <f|Pi_n rho Pi_m|f> = conj(f_n) c_n conj(c_m) f_m."""
    a = f.amps.conj() * state.c
    return np.outer(a, a.conj())


def _branch_rows(state: EntangledState):
    idx = state.branches
    V = np.array([np.asarray(getattr(state.xis[n], "values", state.xis[n])) for n in idx])
    grid = state.grid
    Vw = V.conj() * grid.weights if grid is not None else V.conj()
    return idx, V, Vw


def gram(state: EntangledState) -> np.ndarray:
    """D_mn = <xi_m|xi_n> over the branches of ``state``; absent branches
    give zero rows and columns."""
    idx, V, Vw = _branch_rows(state)
    D = np.zeros((state.dim, state.dim), dtype=complex)
    D[np.ix_(idx, idx)] = Vw @ V.T
    return D


def readout_matrix(state: EntangledState, O) -> np.ndarray:
    """O_mn = <xi_m|O|xi_n> over the branches of ``state``."""
    idx, V, Vw = _branch_rows(state)
    Om = np.zeros((state.dim, state.dim), dtype=complex)
    Om[np.ix_(idx, idx)] = Vw @ _apply(state, O, V).T
    return Om


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise ContractViolation(
            f"{what} has imaginary residue {value.imag:.2e}; readout is not Hermitian")
    return float(value.real)


def post_selection_probability(state: EntangledState, f: SystemState) -> float:
    """<phi|phi> with |phi> = <f|Psi>."""
    _check_f(state, f)
    den = complex(np.sum(branch_weights(state, f) * gram(state).T))
    return _real(den, "post-selection probability")


def conditional_expectation(state: EntangledState, f: SystemState, O) -> float:
    """<O> conditioned on post-selecting ``f``:

        sum_nm w_nm O_mn / sum_nm w_nm D_mn

    ``O`` is ``"chi"``, ``"mu"`` or, for discrete pointers, an explicit
    Hermitian matrix.
    """
    _check_f(state, f)
    w = branch_weights(state, f)
    D, Om = gram(state), readout_matrix(state, O)
    den = complex(np.sum(w * D.T))
    if abs(den) < ZERO_OVERLAP_TOL:
        raise ZeroPostSelection(f"post-selection probability {abs(den):.3e}")
    return _real(complex(np.sum(w * Om.T)) / den, f"<{O}>")


def brute_force_oracle(state: EntangledState, f: SystemState, O) -> float:
    """Same quantity as :func:`conditional_expectation`, from the explicit
    projected pointer state."""
    _check_f(state, f)
    phi = f.amps.conj() @ state.joint_array()
    grid = state.grid
    if grid is not None:
        phi_f = g.GridFunction(grid, phi)
        norm = g.overlap(phi_f, phi_f)
        if O == "chi":
            o_phi = g.apply_multiplication(phi_f)
        elif O == "mu":
            o_phi = mu_scale(_family(state), grid.n_points) * g.apply_derivative(phi_f)
        else:
            raise ValueError(f"unknown readout {O!r}")
        num = g.overlap(phi_f, o_phi)
    else:
        norm = complex(np.vdot(phi, phi))
        if isinstance(O, str):
            if len(phi) != 2:
                raise ValueError("named readouts need a qubit pointer")
            if O == "chi":
                o_phi = np.array([phi[1], phi[0]])
            elif O == "mu":
                o_phi = np.array([1j * phi[1], -1j * phi[0]])
            else:
                raise ValueError(f"unknown readout {O!r}")
        else:
            o_phi = np.asarray(O, dtype=complex) @ phi
        num = complex(np.vdot(phi, o_phi))
    if abs(norm) < ZERO_OVERLAP_TOL:
        raise ZeroPostSelection(f"post-selection probability {abs(norm):.3e}")
    return _real(num / norm, f"<{O}>")


def unconditioned_expectation(state: EntangledState, O) -> float:
    """<Psi| 1 (x) O |Psi> without post-selection."""
    Om = readout_matrix(state, O)
    return _real(complex(np.sum(np.abs(state.c) ** 2 * np.diag(Om))), f"<{O}>")


@dataclass(frozen=True)
class ConditionalReadout:
    f: SystemState
    prob: float
    chi_val: float
    mu_val: float
    complex_shift: complex | None
    reference_weak_value: complex | None
    eta_eff: float


def full_readout(state: EntangledState, f: SystemState, A: MeasuredObservable | None = None,
                 psi: SystemState | None = None, eta_eff: float | None = None) -> ConditionalReadout:
    """Both conditional readouts, the complex shift (chi + i mu)/eta_eff and
    the weak value it approximates.

    ``psi`` defaults to the branch coefficients of ``state``; ``eta_eff``
    defaults to the family's effective unit constant at ``state.eta``.
    The reference weak value is ``None`` when <f|psi> = 0 or no observable
    is given; the complex shift is ``None`` when eta_eff vanishes.
    """
    _check_f(state, f)
    if eta_eff is None:
        if state.eta is None:
            raise ValueError("ingested state: eta_eff must be given explicitly")
        eta_eff = _family(state).eta_eff(state.eta)
    w = branch_weights(state, f)
    D = gram(state)
    chi, mu = readout_matrix(state, "chi"), readout_matrix(state, "mu")
    den = complex(np.sum(w * D.T))
    if abs(den) < ZERO_OVERLAP_TOL:
        raise ZeroPostSelection(f"post-selection probability {abs(den):.3e}")
    prob = _real(den, "post-selection probability")
    chi_val = _real(complex(np.sum(w * chi.T)) / den, "<chi>")
    mu_val = _real(complex(np.sum(w * mu.T)) / den, "<mu>")
    if psi is None:
        psi = SystemState.normalized(state.c)
    reference = None
    if A is not None:
        try:
            reference = weak_value(psi, f, A)
        except ZeroPostSelection:
            pass
    shift = complex(chi_val, mu_val) / eta_eff if eta_eff != 0 else None
    return ConditionalReadout(f, prob, chi_val, mu_val, shift, reference, float(eta_eff))

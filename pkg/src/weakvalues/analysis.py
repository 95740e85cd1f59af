"""Sweeps and scans built on the exact readout: pointer distinguishability
curves, weak echo location, state sweeps of the conditional shifts and the
approach of the complex shift to the weak value as eta -> 0."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .entangler import von_neumann_entangle
from .errors import ZeroPostSelection
from .grid import DEFAULT_POINTS
from .hilbert import MeasuredObservable, SystemState, expectation, flip, weak_value
from .pointers import PointerFamily, default_grid, pointer_matrices
from .readout import full_readout

ECHO_THRESHOLD = 0.5
SCAN_STEP = 0.01


@dataclass(frozen=True)
class GridOptions:
    """Overrides for the pointer grid used at each strength."""

    n_points: int = DEFAULT_POINTS
    halfwidth: float | None = None

    def grid(self, family: PointerFamily, eta: float, A: MeasuredObservable):
        if not family.continuous:
            return None
        return default_grid(family, eta, A.eigenvalues, self.n_points, self.halfwidth)


def D10(family: PointerFamily, A: MeasuredObservable, eta: float,
        opts: GridOptions = GridOptions()) -> complex:
    return pointer_matrices(family, eta, A, opts.grid(family, eta, A)).D10


@dataclass(frozen=True)
class DistinguishabilityRow:
    family: str
    eta: float
    D10: complex


def distinguishability_sweep(family: PointerFamily, A: MeasuredObservable, etas,
                             opts: GridOptions = GridOptions()) -> list[DistinguishabilityRow]:
    return [DistinguishabilityRow(family.name, float(eta), D10(family, A, eta, opts))
            for eta in etas]


def zero_crossings(family: PointerFamily, A: MeasuredObservable, lo: float, hi: float,
                   step: float = SCAN_STEP, opts: GridOptions = GridOptions()) -> list[float]:
    """Strengths in [lo, hi] where Re D_10 changes sign."""
    etas = np.arange(lo, hi + step / 2, step)
    vals = np.array([D10(family, A, e, opts).real for e in etas])
    roots = []
    for i in range(len(etas) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            roots.append(float(etas[i]))
        elif a * b < 0:
            roots.append(brentq(lambda e: D10(family, A, e, opts).real,
                                etas[i], etas[i + 1], xtol=1e-14))
    if vals[-1] == 0:
        roots.append(float(etas[-1]))
    return roots


def nearest_zero_crossing(family: PointerFamily, A: MeasuredObservable, eta: float,
                          search: float = np.pi, opts: GridOptions = GridOptions()) -> float | None:
    """The D_10 zero crossing closest to ``eta`` within ``search`` of it."""
    roots = zero_crossings(family, A, max(0.0, eta - search), eta + search, opts=opts)
    if not roots:
        return None
    return min(roots, key=lambda r: abs(r - eta))


@dataclass(frozen=True)
class EchoPoint:
    eta_star: float
    D_value: complex
    eta_bar: float
    flipped: bool


def echo_scan(family: PointerFamily, A: MeasuredObservable, eta_range: tuple[float, float],
              exclude_origin_radius: float = 0.1, threshold: float = ECHO_THRESHOLD,
              step: float = SCAN_STEP, opts: GridOptions = GridOptions()) -> list[EchoPoint]:
    """Interior local maxima of |D_10| with |D_10| >= ``threshold``.

    Maxima are bracketed on a uniform scan and refined by golden-section
    search.  ``eta_bar`` is the distance from the echo to the nearest zero
    crossing of D_10 (the distance to the origin if there is none).
    """
    lo, hi = eta_range
    lo = max(lo, exclude_origin_radius)
    if not hi > lo:
        return []
    n = max(3, int(np.ceil((hi - lo) / step)) + 1)
    etas = np.linspace(lo, hi, n)
    mags = np.array([abs(D10(family, A, e, opts)) for e in etas])
    points = []
    for i in range(1, n - 1):
        if not (mags[i] > mags[i - 1] and mags[i] >= mags[i + 1]):
            continue
        res = minimize_scalar(lambda e: -abs(D10(family, A, e, opts)),
                              bracket=(etas[i - 1], etas[i], etas[i + 1]),
                              method="golden", options={"xtol": 1e-10})
        eta_star = float(res.x)
        d = D10(family, A, eta_star, opts)
        if abs(d) < threshold:
            continue
        zero = nearest_zero_crossing(family, A, eta_star, opts=opts)
        eta_bar = eta_star - (zero if zero is not None else 0.0)
        points.append(EchoPoint(eta_star, d, eta_bar, bool(d.real < 0)))
    return points


def echo_weak_value(psi: SystemState, f: SystemState, A: MeasuredObservable,
                    flipped: bool) -> complex:
    """Weak value read at a weak echo: for ``flipped`` echoes (D_10 near -1)
    the post-selection is replaced by sigma_z |f>."""
    if flipped:
        if f.dim != 2:
            raise ValueError("flipped echoes are only defined for two-level systems")
        f = flip(f)
    return weak_value(psi, f, A)


def theta_state(theta: float) -> SystemState:
    """cos(theta)|0> + sin(theta)|1>."""
    return SystemState([np.cos(theta), np.sin(theta)])


def phi_state(phi: float) -> SystemState:
    """(|0> + exp(i phi)|1>) / sqrt(2)."""
    return SystemState(np.array([1, np.exp(1j * phi)]) / np.sqrt(2))


PARAMETRIZATIONS = {"theta": theta_state, "phi": phi_state}


@dataclass(frozen=True)
class SweepRow:
    """One input state of a shift sweep.  Numeric fields are ``None`` and
    ``status`` names the failure when the post-selection is singular."""

    param: float
    prob: float | None = None
    chi_shift: float | None = None
    mu_shift: float | None = None
    norm_chi: float | None = None
    norm_mu: float | None = None
    reference: complex | None = None
    status: str = "ok"


@dataclass(frozen=True)
class Regime:
    """How a strength is classified for picking the reference curve."""

    name: str  # "weak", "strong" or "echo"
    D10: complex
    flipped: bool = False


def classify_strength(family: PointerFamily, A: MeasuredObservable, eta: float,
                      threshold: float = ECHO_THRESHOLD,
                      opts: GridOptions = GridOptions()) -> Regime:
    """Weak if D_10 has not crossed zero between 0 and eta; otherwise echo
    when |D_10| >= threshold and strong below it."""
    d = D10(family, A, eta, opts)
    if abs(d) < threshold:
        return Regime("strong", d)
    crossed = zero_crossings(family, A, 0.0, abs(eta), opts=opts) if abs(eta) > 0 else []
    if not crossed and d.real > 0:
        return Regime("weak", d)
    return Regime("echo", d, flipped=bool(d.real < 0))


def shift_sweep(family: PointerFamily, A: MeasuredObservable, eta: float, params,
                f: SystemState, parametrization: str = "theta",
                eta_bar: float | None = None, threshold: float = ECHO_THRESHOLD,
                opts: GridOptions = GridOptions()) -> list[SweepRow]:
    """Conditional shifts for a family of input states at fixed strength.

    Shifts are normalized by ``eta_bar`` when given, else by the family's
    effective unit constant.  The reference is the weak value (weak regime),
    the expectation value (strong) or the echo weak value (echo).
    """
    make_state = PARAMETRIZATIONS[parametrization]
    regime = classify_strength(family, A, eta, threshold, opts)
    grid = opts.grid(family, eta, A)
    rows = []
    for p in params:
        psi = make_state(p)
        state = von_neumann_entangle(psi, A, family, eta, grid)
        try:
            r = full_readout(state, f, A, psi, eta_eff=eta_bar)
        except ZeroPostSelection:
            rows.append(SweepRow(float(p), status="zero_post_selection"))
            continue
        status = "ok"
        try:
            if regime.name == "strong":
                ref = complex(expectation(psi, A))
            elif regime.name == "echo":
                ref = echo_weak_value(psi, f, A, regime.flipped)
            else:
                ref = r.reference_weak_value
                if ref is None:
                    raise ZeroPostSelection
        except ZeroPostSelection:
            ref, status = None, "undefined_reference"
        if r.complex_shift is None:
            norm_chi = norm_mu = None
            status = "zero_eta_eff"
        else:
            norm_chi, norm_mu = r.complex_shift.real, r.complex_shift.imag
        rows.append(SweepRow(float(p), r.prob, r.chi_val, r.mu_val, norm_chi, norm_mu, ref, status))
    return rows


@dataclass(frozen=True)
class ConvergenceRow:
    eta: float
    shift: complex
    weak_value: complex
    error: float


def aav_convergence(family: PointerFamily, A: MeasuredObservable, psi: SystemState,
                    f: SystemState, etas, opts: GridOptions = GridOptions()) -> list[ConvergenceRow]:
    """|complex shift - weak value| along a decreasing sequence of strengths."""
    wv = weak_value(psi, f, A)
    rows = []
    for eta in etas:
        state = von_neumann_entangle(psi, A, family, eta, opts.grid(family, eta, A))
        shift = full_readout(state, f, A, psi).complex_shift
        rows.append(ConvergenceRow(float(eta), shift, wv, abs(shift - wv)))
    return rows


def convergence_orders(rows: list[ConvergenceRow]) -> list[float]:
    """Observed order log(e_k / e_{k+1}) / log(eta_k / eta_{k+1}) between
    consecutive rows."""
    return [float(np.log(a.error / b.error) / np.log(a.eta / b.eta))
            for a, b in zip(rows, rows[1:])]

"""Entangled system-pointer states sum_n c_n |a_n> (x) |xi_n>."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .grid import Grid, GridFunction
from .hilbert import MeasuredObservable, SystemState
from .pointers import PointerFamily, default_grid, make_pointer_state

NORM_TOL = 1e-10
GAMMA_NORM_TOL = 1e-8
#: Branches with |c_n| below this are treated as absent.
EMPTY_BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class EntangledState:
    """Branch coefficients ``c`` and one pointer state per system basis state.

    ``xis[n]`` is ``None`` for a branch with c_n = 0 (no pointer state is
    defined there); such branches contribute nothing to any readout.
    ``eta`` is the measurement parameter when the state came from a
    von Neumann interaction and ``None`` for ingested states.
    """

    c: np.ndarray
    xis: tuple
    family: PointerFamily | None = None
    eta: float | None = None

    def __post_init__(self):
        c = np.array(self.c, dtype=complex).ravel()
        xis = tuple(self.xis)
        if len(xis) != c.size:
            raise ValueError("need exactly one pointer state per branch")
        if abs(np.sum(np.abs(c) ** 2) - 1) > NORM_TOL:
            raise ValueError("branch coefficients are not normalized")
        for n, xi in enumerate(xis):
            if xi is None:
                if abs(c[n]) > EMPTY_BRANCH_TOL:
                    raise ValueError(f"branch {n} has weight but no pointer state")
                continue
            norm = _norm2(xi)
            if abs(norm - 1) > NORM_TOL:
                raise ValueError(f"pointer state {n} is not normalized ({norm!r})")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "xis", xis)

    @property
    def dim(self) -> int:
        return self.c.size

    @property
    def branches(self) -> list[int]:
        """Indices of branches that carry a pointer state."""
        return [n for n, xi in enumerate(self.xis) if xi is not None]

    @property
    def grid(self) -> Grid | None:
        xi = self.xis[self.branches[0]]
        return xi.grid if isinstance(xi, GridFunction) else None

    def joint_array(self) -> np.ndarray:
        """Joint amplitudes Psi[n, k] = c_n xi_n[k] (grid samples or pointer
        basis components); absent branches are rows of zeros."""
        ref = self.xis[self.branches[0]]
        width = ref.grid.n_points if isinstance(ref, GridFunction) else len(ref)
        out = np.zeros((self.dim, width), dtype=complex)
        for n in self.branches:
            out[n] = self.c[n] * _values(self.xis[n])
        return out

    def norm2(self) -> float:
        """<Psi|Psi>; the system labels are orthonormal, so only the diagonal
        branch terms survive."""
        return float(sum(abs(self.c[n]) ** 2 * _norm2(self.xis[n]) for n in self.branches))

    def to_gamma(self) -> np.ndarray:
        """Amplitudes in an orthonormal pointer basis.

        Grid states are expanded in the quadrature-weighted node basis, whose
        inner product reproduces Simpson overlaps exactly.
        """
        psi = self.joint_array()
        grid = self.grid
        if grid is not None:
            psi = psi * np.sqrt(grid.weights)
        return psi


def _values(xi) -> np.ndarray:
    return xi.values if isinstance(xi, GridFunction) else np.asarray(xi)


def _norm2(xi) -> float:
    if isinstance(xi, GridFunction):
        return float(xi.grid.weights @ np.abs(xi.values) ** 2)
    return float(np.sum(np.abs(xi) ** 2))


def von_neumann_entangle(psi: SystemState, A: MeasuredObservable, family: PointerFamily,
                         eta: float, grid: Grid | None = None) -> EntangledState:
    """Apply sum_n Pi_n (x) exp(-i eta alpha_n mu) to psi (x) xi_0 exactly.

    The unitary only shifts the pointer, so the result is built directly from
    the shifted pointer states; no expansion in eta is made.
    """
    A._check(psi)
    if family.continuous and grid is None:
        grid = default_grid(family, eta, A.eigenvalues)
    xis = tuple(make_pointer_state(family, eta, a, grid) for a in A.eigenvalues)
    return EntangledState(psi.amps, xis, family, float(eta))


def ingest_joint_amplitudes(gamma, pointer_basis_dim: int | None = None,
                            family: PointerFamily | None = None) -> EntangledState:
    """Factor arbitrary joint amplitudes gamma[n, m] into branches.

    c_n = ||gamma[n]|| up to phase and xi_n = gamma[n] / c_n.  The phase of
    each xi_n is fixed by making its largest-magnitude component real and
    positive; the remaining phase goes into c_n.
    """
    gamma = np.atleast_2d(np.asarray(gamma, dtype=complex))
    if pointer_basis_dim is not None and gamma.shape[1] != pointer_basis_dim:
        raise ValueError(
            f"gamma has {gamma.shape[1]} pointer columns, expected {pointer_basis_dim}")
    total = np.sum(np.abs(gamma) ** 2)
    if abs(total - 1) > GAMMA_NORM_TOL:
        raise ValueError(f"joint amplitudes are not normalized (sum |gamma|^2 = {total!r})")
    gamma = gamma / np.sqrt(total)
    c = np.zeros(gamma.shape[0], dtype=complex)
    xis = []
    for n, row in enumerate(gamma):
        size = np.linalg.norm(row)
        if size < EMPTY_BRANCH_TOL:
            xis.append(None)
            continue
        k = int(np.argmax(np.abs(row)))
        phase = row[k] / abs(row[k])
        c[n] = size * phase
        xis.append(row / c[n])
    if family is None and gamma.shape[1] == 2:
        family = PointerFamily.qubit()
    return EntangledState(c, xis, family, None)


def read_gamma_csv(path) -> np.ndarray:
    """Load joint amplitudes from a CSV with columns n, m, re, im.

    Missing (n, m) entries are zero.
    """
    entries = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"n", "m", "re", "im"} - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                n, m = int(row["n"]), int(row["m"])
                value = complex(float(row["re"]), float(row["im"]))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if n < 0 or m < 0:
                raise ValueError(f"{path}:{lineno}: negative index")
            if (n, m) in entries:
                raise ValueError(f"{path}:{lineno}: duplicate entry ({n}, {m})")
            entries[n, m] = value
    if not entries:
        raise ValueError(f"{path}: no amplitudes")
    dim_s = 1 + max(n for n, _ in entries)
    dim_p = 1 + max(m for _, m in entries)
    gamma = np.zeros((dim_s, dim_p), dtype=complex)
    for (n, m), value in entries.items():
        gamma[n, m] = value
    return gamma


def write_gamma_csv(path, gamma) -> None:
    gamma = np.asarray(gamma, dtype=complex)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "m", "re", "im"])
        for (n, m), value in np.ndenumerate(gamma):
            writer.writerow([n, m, f"{value.real:.17g}", f"{value.imag:.17g}"])

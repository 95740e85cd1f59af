"""Uniform grids for continuous pointer wavefunctions.

Overlaps use composite Simpson quadrature; the momentum-like generator
-i d/dx uses 4th-order finite differences with one-sided stencils at the
two outermost nodes on each side.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import simpson

from .errors import DomainTooSmall

MIN_POINTS = 256
DEFAULT_POINTS = 4097
EDGE_DECAY = 1e-8


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.n_points < MIN_POINTS or self.n_points % 2 == 0:
            raise ValueError(
                f"n_points must be odd and >= {MIN_POINTS}, got {self.n_points}")

    @classmethod
    def symmetric(cls, halfwidth: float, n_points: int = DEFAULT_POINTS) -> "Grid":
        return cls(-float(halfwidth), float(halfwidth), int(n_points))

    @cached_property
    def x(self) -> np.ndarray:
        x = np.linspace(self.x_min, self.x_max, self.n_points)
        x.flags.writeable = False
        return x

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @cached_property
    def weights(self) -> np.ndarray:
        """Composite Simpson weights, so that integrate(f) == weights @ f."""
        w = np.full(self.n_points, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        w *= self.spacing / 3.0
        w.flags.writeable = False
        return w


@dataclass(frozen=True)
class GridFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).ravel()
        if vals.size != self.grid.n_points:
            raise ValueError(
                f"{vals.size} samples for a grid of {self.grid.n_points} points")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid: Grid, func) -> "GridFunction":
        return cls(grid, func(grid.x))

    def edge_ratio(self) -> float:
        """Largest edge magnitude relative to the peak magnitude."""
        mag = np.abs(self.values)
        peak = mag.max()
        if peak == 0:
            return 0.0
        return float(max(mag[0], mag[-1]) / peak)

    def require_decay(self, tol: float = EDGE_DECAY) -> "GridFunction":
        ratio = self.edge_ratio()
        if ratio >= tol:
            raise DomainTooSmall(
                f"edge/peak magnitude {ratio:.2e} exceeds {tol:.0e} on "
                f"[{self.grid.x_min:g}, {self.grid.x_max:g}]")
        return self

    def __add__(self, other):
        _same_grid(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __mul__(self, scalar):
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def conj(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.conj())


def _same_grid(f: GridFunction, g: GridFunction):
    if f.grid != g.grid:
        raise ValueError("grid functions live on different grids")


def integrate(f: GridFunction, check_edges: bool = True) -> complex:
    """Composite Simpson approximation of the integral of ``f``.

    With ``check_edges`` the integrand must have decayed at both ends of the
    grid, otherwise :class:`DomainTooSmall` is raised.
    """
    if check_edges:
        f.require_decay()
    return complex(simpson(f.values, x=f.grid.x))


def overlap(f: GridFunction, g: GridFunction) -> complex:
    """<f|g> = integral of conj(f) g."""
    _same_grid(f, g)
    return integrate(GridFunction(f.grid, f.values.conj() * g.values))


def apply_multiplication(f: GridFunction) -> GridFunction:
    """x f(x)."""
    return GridFunction(f.grid, f.grid.x * f.values)


def derivative(values: np.ndarray, h: float) -> np.ndarray:
    """4th-order finite-difference first derivative of uniformly sampled data."""
    v = np.asarray(values)
    if v.shape[-1] < 5:
        raise ValueError("need at least 5 samples")
    d = np.empty_like(v, dtype=np.result_type(v, float))
    d[..., 2:-2] = (v[..., :-4] - 8 * v[..., 1:-3] + 8 * v[..., 3:-1] - v[..., 4:])
    d[..., 0] = -25 * v[..., 0] + 48 * v[..., 1] - 36 * v[..., 2] + 16 * v[..., 3] - 3 * v[..., 4]
    d[..., 1] = -3 * v[..., 0] - 10 * v[..., 1] + 18 * v[..., 2] - 6 * v[..., 3] + v[..., 4]
    d[..., -1] = 25 * v[..., -1] - 48 * v[..., -2] + 36 * v[..., -3] - 16 * v[..., -4] + 3 * v[..., -5]
    d[..., -2] = 3 * v[..., -1] + 10 * v[..., -2] - 18 * v[..., -3] + 6 * v[..., -4] - v[..., -5]
    return d / (12 * h)


def apply_derivative(f: GridFunction) -> GridFunction:
    """-i df/dx (hbar = 1)."""
    return GridFunction(f.grid, -1j * derivative(f.values, f.grid.spacing))

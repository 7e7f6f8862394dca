"""Uniform grids on the base cell [-pi, pi)^n, quadrature norms, and the exact
DFT pair between lattice samples and trigonometric-polynomial spectra.

Conventions
-----------
The Fourier transform is ``f^(xi) = (2 pi)^(-n/2) int f(x) exp(-i <x, xi>) dx``.
Grid nodes are ``xi_m = -pi + 2 pi m / N`` on each axis; the right endpoint
``+pi`` is excluded, so the discrete exponentials ``exp(i j xi_m)`` are exactly
orthogonal for ``|j| < N``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ParameterError

__all__ = [
    "FrequencyGrid",
    "GridFunction",
    "SampleArray",
    "make_grid",
    "lattice_points",
    "cube_indices",
    "lp_norm",
    "synthesize",
    "analyze_samples",
]

TWO_PI = 2.0 * np.pi


def lattice_points(radius: int, n: int, *, exclude_origin: bool = False) -> np.ndarray:
    """Integer vectors with ``||j||_inf <= radius``, ordered by increasing
    ``l_inf`` shell and lexicographically inside each shell.

    This is the summation order used for every lattice sum in the package.
    """
    cube = cube_indices(radius, n)
    shell = np.abs(cube).max(axis=1) if n else np.zeros(len(cube), int)
    order = np.lexsort(tuple(cube[:, a] for a in range(n - 1, -1, -1)) + (shell,))
    pts = cube[order]
    if exclude_origin:
        pts = pts[np.abs(pts).max(axis=1) > 0]
    return pts


def cube_indices(radius: int, n: int) -> np.ndarray:
    """All ``j`` in ``{-radius..radius}^n`` in lexicographic order, shape (M, n)."""
    axis = np.arange(-radius, radius + 1)
    return np.array(list(itertools.product(axis, repeat=n)), dtype=np.int64).reshape(-1, n)


@dataclass(frozen=True)
class FrequencyGrid:
    """Tensor-product uniform grid on ``[-pi, pi)^n`` with ``N`` points per axis."""

    dimension: int
    points_per_axis: int

    def __post_init__(self):
        n, N = self.dimension, self.points_per_axis
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ParameterError(f"dimension must be a positive integer, got {n!r}")
        if not isinstance(N, (int, np.integer)) or N < 2 or N % 2:
            raise ParameterError(f"points_per_axis must be an even integer >= 2, got {N!r}")

    @property
    def n(self) -> int:
        return self.dimension

    @property
    def N(self) -> int:
        return self.points_per_axis

    @property
    def size(self) -> int:
        return self.N ** self.n

    @property
    def spacing(self) -> float:
        return TWO_PI / self.N

    @property
    def cell_weight(self) -> float:
        """Quadrature weight ``(2 pi / N)^n`` of a single node."""
        return self.spacing ** self.n

    @cached_property
    def axis(self) -> np.ndarray:
        return -np.pi + self.spacing * np.arange(self.N)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Node coordinates, shape (N^n, n), lexicographic in the axis index."""
        mesh = np.meshgrid(*([self.axis] * self.n), indexing="ij")
        out = np.stack([m.ravel() for m in mesh], axis=-1)
        out.setflags(write=False)
        return out

    @cached_property
    def origin_index(self) -> int:
        """Flat index of the node ``xi = 0``."""
        m = self.N // 2
        return int(sum(m * self.N ** (self.n - 1 - a) for a in range(self.n)))

    def interior_mask(self) -> np.ndarray:
        """Nodes with ``||xi||_inf <= pi - 2 pi / N`` (boundary faces removed)."""
        return np.abs(self.nodes).max(axis=1) <= np.pi - self.spacing * (1 - 1e-9)

    def zeros(self) -> "GridFunction":
        return GridFunction(self, np.zeros(self.size, dtype=complex))

    def function(self, func) -> "GridFunction":
        """Sample ``func(nodes)`` (vectorized over rows) on the grid."""
        return GridFunction(self, np.asarray(func(self.nodes), dtype=complex))


def make_grid(n: int, N: int) -> FrequencyGrid:
    return FrequencyGrid(n, N)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex values of a function at the nodes of a :class:`FrequencyGrid`."""

    grid: FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.size != self.grid.size:
            raise ParameterError(
                f"expected {self.grid.size} values for {self.grid}, got {vals.size}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def _check(self, other: "GridFunction"):
        if other.grid != self.grid:
            raise ParameterError("grid functions live on different grids")

    def __add__(self, other):
        self._check(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class SampleArray:
    """Lattice samples ``s(j)`` for ``j`` in ``{-J_s..J_s}^n`` (lexicographic)."""

    dimension: int
    window_radius: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.window_radius < 0:
            raise ParameterError("window_radius must be nonnegative")
        want = (2 * self.window_radius + 1) ** self.dimension
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.size != want:
            raise ParameterError(f"expected {want} samples, got {vals.size}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @cached_property
    def indices(self) -> np.ndarray:
        return cube_indices(self.window_radius, self.dimension)

    def __getitem__(self, j) -> complex:
        j = np.atleast_1d(np.asarray(j, dtype=np.int64))
        J = self.window_radius
        if np.any(np.abs(j) > J):
            return 0j
        flat = 0
        for c in j:
            flat = flat * (2 * J + 1) + int(c) + J
        return complex(self.values[flat])

    @classmethod
    def zeros(cls, dimension: int, window_radius: int) -> "SampleArray":
        return cls(dimension, window_radius, np.zeros((2 * window_radius + 1) ** dimension))


def lp_norm(g: GridFunction, p: float) -> float:
    """Discrete ``L_p([-pi, pi]^n)`` norm, ``((2pi/N)^n sum |g|^p)^(1/p)``."""
    p = float(p)
    if not p >= 1.0:
        raise ParameterError(f"p must lie in [1, inf], got {p}")
    mag = np.abs(g.values)
    if np.isinf(p):
        return float(mag.max(initial=0.0))
    if p == 1.0:
        return float(g.grid.cell_weight * mag.sum())
    if p == 2.0:
        return float(np.sqrt(g.grid.cell_weight * np.dot(mag, mag)))
    return float((g.grid.cell_weight * np.sum(mag ** p)) ** (1.0 / p))


def _as_points(x, n: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    scalar = x.ndim <= 1 and (x.size == n)
    pts = x.reshape(-1, n)
    return pts, scalar


def synthesize(g: GridFunction, x):
    """Trapezoid value of ``(2pi)^(-n/2) int_cell g(xi) exp(i <x, xi>) dxi``.

    ``x`` is one point of length ``n`` (returns a complex number) or an array
    of shape (M, n) (returns shape (M,)). Exact on the integer lattice for
    trigonometric polynomials of per-axis degree below ``N/2``.
    """
    grid = g.grid
    pts, scalar = _as_points(x, grid.n)
    phase = np.exp(1j * (pts @ grid.nodes.T))
    out = (2 * np.pi) ** (-grid.n / 2) * grid.cell_weight * (phase @ g.values)
    return complex(out[0]) if scalar else out


def analyze_samples(s: SampleArray, grid: FrequencyGrid) -> GridFunction:
    """``(2pi)^(-n/2) sum_j s(j) exp(-i <j, xi>)`` at every grid node."""
    if s.dimension != grid.n:
        raise ParameterError("sample dimension does not match grid dimension")
    phase = np.exp(-1j * (grid.nodes @ s.indices.T))
    return GridFunction(grid, (2 * np.pi) ** (-grid.n / 2) * (phase @ s.values))

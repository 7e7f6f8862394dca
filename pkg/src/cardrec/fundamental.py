"""Fundamental functions of a cardinal interpolator.

For a spectrum ``phi^`` the fundamental function ``L`` has transform
``(2pi)^(-n/2) phi^(xi) / sum_j phi^(xi + 2 pi j)``. On shifted cells this is
stored in the dimensionless form

    weight_k(xi) = phi^(xi + 2 pi k) / sum_j phi^(xi + 2 pi j),   xi in [-pi, pi)^n,

so the weights of one node form a convex combination over ``k``. The
``(2pi)^(-n/2)`` normalization is reattached only when ``L`` is synthesized in
space.
"""
from __future__ import annotations

import warnings

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy import integrate

from .errors import NumericalFailure, ParameterError, SingularityError
from .families import (
    InterpolatorFamily,
    log_spectrum,
    power_tail_correction,
    tail_bound,
    tail_radius,
    _cell_min_log,
)
from .spectral import FrequencyGrid, GridFunction, lattice_points, lp_norm

__all__ = [
    "FundamentalSpectrum",
    "periodized_denominator",
    "fundamental_spectrum",
    "fundamental_spatial",
    "leakage",
]

TWO_PI = 2.0 * np.pi
_BLOCK_ELEMENTS = 1 << 22
IMAG_TOLERANCE = 1e-10


def _shift_ratios(fam: InterpolatorFamily, pts: np.ndarray, lp0: np.ndarray, J: int):
    """Sum of ``phi^(xi + 2 pi j) / phi^(xi)`` over ``0 < ||j||_inf <= J`` and the
    per-shift maximum over the points, accumulated in shell order."""
    shifts = lattice_points(J, pts.shape[1], exclude_origin=True)
    total = np.zeros(len(pts))
    peaks = np.empty(len(shifts))
    step = max(1, _BLOCK_ELEMENTS // max(len(pts), 1))
    with np.errstate(invalid="ignore", over="ignore"):
        for start in range(0, len(shifts), step):
            chunk = shifts[start:start + step]
            lg = log_spectrum(fam, pts[None, :, :] + TWO_PI * chunk[:, None, :])
            ratio = np.exp(lg - lp0[None, :])
            ratio[:, np.isposinf(lp0)] = 0.0
            for row in ratio:
                total += row
            peaks[start:start + len(chunk)] = ratio.max(axis=1)
    return total, shifts, peaks


def _normalized_denominator(fam, pts, lp0, J, corrected):
    """``sum_j phi^(xi + 2 pi j) / phi^(xi)``, optionally with the power-tail correction."""
    total, shifts, peaks = _shift_ratios(fam, pts, lp0, J)
    dn = 1.0 + total
    if corrected and fam.kind == "polyharmonic":
        corr = fam.scale * power_tail_correction(fam.parameter, fam.dimension, pts, J)
        with np.errstate(over="ignore", invalid="ignore"):
            rel = corr * np.exp(-lp0)
        rel[np.isposinf(lp0)] = 0.0
        dn = dn + rel
    return dn, shifts, peaks


def periodized_denominator(fam: InterpolatorFamily, xi, J: int, *, corrected: bool = True):
    """``sum_{||j||_inf <= J} phi^(xi + 2 pi j)`` plus, for polyharmonic
    families with ``corrected``, the integral estimate of the omitted tail.

    Raises :class:`SingularityError` at the origin of a singular family.
    """
    if J < 1:
        raise ParameterError("truncation radius J must be >= 1")
    n = fam.dimension
    xi = np.asarray(xi, dtype=float)
    pts = xi.reshape(-1, n)
    lp0 = log_spectrum(fam, pts)
    if fam.origin_singular and np.isposinf(lp0).any():
        raise SingularityError("periodized denominator diverges at the origin")
    dn, _, _ = _normalized_denominator(fam, pts, lp0, J, corrected)
    out = dn * np.exp(lp0)
    if xi.ndim == 0 or (xi.ndim == 1 and (n > 1 or xi.size == 1)):
        return float(out[0])
    return out


@dataclass(eq=False)
class FundamentalSpectrum:
    """Convex block weights of ``L`` for ``||k||_inf <= block_window``.

    ``weights`` has one row per entry of ``block_indices`` (shell order) and
    one column per grid node. ``tail_certificate`` bounds, uniformly over the
    nodes, the total weight of every block that is not carried.
    """

    family: InterpolatorFamily
    grid: FrequencyGrid
    block_window: int
    truncation_radius: int
    block_indices: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    tail_certificate: float
    corrected: bool
    log_base: np.ndarray = field(repr=False)
    normalized_denominator: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.weights.setflags(write=False)
        self._row = {tuple(int(v) for v in k): i for i, k in enumerate(self.block_indices)}

    def weight_values(self, k) -> np.ndarray:
        """Weight array of block ``k``; zeros for blocks outside the window."""
        key = tuple(int(v) for v in np.atleast_1d(k))
        row = self._row.get(key)
        if row is None:
            return np.zeros(self.grid.size)
        return self.weights[row]

    def weight(self, k) -> GridFunction:
        return GridFunction(self.grid, self.weight_values(k))

    @property
    def blocks(self) -> dict:
        return {k: GridFunction(self.grid, self.weights[i]) for k, i in self._row.items()}

    def row_sums(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    def max_shift_weight_sum(self) -> float:
        """``sum_{k != 0} max_xi weight_k(xi)`` over the carried blocks."""
        return float(self.weights[1:].max(axis=1).sum())

    # spatial quadrature on the closed window [-Omega, Omega]^n
    @cached_property
    def _window_axis(self):
        N, W = self.grid.N, self.block_window
        count = N * (2 * W + 1) + 1
        omega = -(2 * W + 1) * np.pi + self.grid.spacing * np.arange(count)
        trap = np.full(count, self.grid.spacing)
        trap[[0, -1]] *= 0.5
        return omega, trap, np.arange(count) % N

    @cached_property
    def _window_values(self) -> np.ndarray:
        """Weights on the closed-window tensor grid, shape (P,)*n."""
        n, N = self.grid.n, self.grid.N
        omega, _, wrap = self._window_axis
        P = len(omega)
        mesh = np.meshgrid(*([omega] * n), indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        idx_mesh = np.meshgrid(*([wrap] * n), indexing="ij")
        flat = np.zeros(P ** n, dtype=np.int64)
        for a in range(n):
            flat = flat * N + idx_mesh[a].ravel()
        lp0 = self.log_base[flat]
        with np.errstate(invalid="ignore", over="ignore"):
            vals = np.exp(log_spectrum(self.family, pts) - lp0) / self.normalized_denominator[flat]
        sing = np.isposinf(lp0)
        if sing.any():
            at_zero = np.all(pts[sing] == 0.0, axis=1)
            vals[sing] = np.where(at_zero, 1.0, 0.0)
        return vals.reshape((P,) * n)

    @cached_property
    def _tail_coefficients(self):
        """Fourier coefficients ``d_m`` of ``1 / periodization`` (unit scale)."""
        k = self.family.parameter
        xi = self.grid.axis
        with np.errstate(divide="ignore", invalid="ignore"):
            per = np.abs(xi) ** (2 * k) / self.normalized_denominator
        per[self.grid.origin_index] = 0.0
        m = np.arange(-(self.grid.N // 2) + 1, self.grid.N // 2)
        d = (np.exp(1j * np.outer(m, xi)) @ per).real / self.grid.N
        keep = np.abs(d) > 1e-18 * np.abs(d).max()
        return m[keep], d[keep]


def fundamental_spectrum(fam: InterpolatorFamily, grid: FrequencyGrid, W: int = 3,
                         tol: float = 1e-12, *, corrected: bool = True) -> FundamentalSpectrum:
    """Build the block weights of the fundamental function of ``fam`` on ``grid``.

    The periodization is truncated at ``J = max(tail_radius(fam, tol), W + 1)``;
    polyharmonic families use the integral tail correction unless
    ``corrected`` is false.
    """
    if W < 1:
        raise ParameterError("block window W must be >= 1")
    if fam.dimension != grid.n:
        raise ParameterError("family and grid dimensions differ")
    use_corr = corrected and fam.kind == "polyharmonic"
    J = max(tail_radius(fam, tol, corrected=use_corr), W + 1)
    pts = grid.nodes
    lp0 = log_spectrum(fam, pts)
    dn, shifts, peaks = _normalized_denominator(fam, pts, lp0, J, use_corr)
    blocks = lattice_points(W, grid.n)
    with np.errstate(invalid="ignore", over="ignore"):
        lg = log_spectrum(fam, pts[None, :, :] + TWO_PI * blocks[:, None, :])
        weights = np.exp(lg - lp0[None, :]) / dn[None, :]
    sing = np.isposinf(lp0)
    weights[:, sing] = 0.0
    weights[0, sing] = 1.0
    outside = np.abs(shifts).max(axis=1) > W
    cert = float(peaks[outside].sum())
    cert += tail_bound(fam, J) / np.exp(_cell_min_log(fam))
    return FundamentalSpectrum(fam, grid, W, J, blocks, weights, cert, use_corr, lp0, dn)


@lru_cache(maxsize=1 << 16)
def _cosine_tail(s: int, edge: float, y: float) -> float:
    """``int_edge^inf w^(-s) cos(y w) dw``."""
    if y == 0.0:
        return edge ** (1 - s) / (s - 1)
    with warnings.catch_warnings():
        # QAWF flags slow cycles for tiny |y|; the result is still accurate
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda w: w ** (-s), edge, np.inf, weight="cos",
                                wvar=abs(y), epsabs=1e-15, limlst=200)
    return val


def _power_tail_spatial(F: FundamentalSpectrum, x: np.ndarray) -> np.ndarray:
    """Contribution of the spectrum beyond the carried window (1-D polyharmonic).

    Outside the window the weight equals ``|w|^(-2k) P(w)`` with ``P`` the
    2 pi-periodic reciprocal of the periodization; expanding ``P`` in its
    Fourier series turns the omitted integral into cosine tails.
    """
    s = 2 * F.family.parameter
    edge = (2 * F.block_window + 1) * np.pi
    ms, ds = F._tail_coefficients
    out = np.zeros(len(x))
    for i, xv in enumerate(x):
        acc = 0.0
        for m, d in zip(ms, ds):
            acc += d * _cosine_tail(s, edge, round(float(xv - m), 13))
        out[i] = acc / np.pi
    return out


def fundamental_spatial(F: FundamentalSpectrum, x):
    """Evaluate ``L(x) = (2pi)^(-n) int weight(w) exp(i <x, w>) dw``.

    The integral is taken by the trapezoid rule over the closed window of
    carried blocks. For one-dimensional polyharmonic families the spectrum
    beyond the window is added in closed form; otherwise it is bounded by
    ``F.tail_certificate``. ``x`` is one point (returns a float) or shape (M, n).
    """
    grid = F.grid
    n = grid.n
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0 or (arr.ndim == 1 and (n > 1 or arr.size == 1))
    pts = arr.reshape(-1, n)
    omega, trap, _ = F._window_axis
    vals = F._window_values
    out = np.empty(len(pts), dtype=complex)
    step = max(1, _BLOCK_ELEMENTS // len(omega) ** max(n - 1, 1))
    for start in range(0, len(pts), step):
        chunk = pts[start:start + step]
        phases = [np.exp(1j * np.outer(chunk[:, a], omega)) * trap for a in range(n)]
        if n == 1:
            res = phases[0] @ vals
        else:
            # contract one axis at a time: sum_i e_a(i) acc[m, i, ...]
            res = np.einsum("mi,i...->m...", phases[0], vals)
            for a in range(1, n):
                res = np.einsum("mi,mi...->m...", phases[a], res)
        out[start:start + step] = res
    out *= TWO_PI ** (-n)
    if np.abs(out.imag).max(initial=0.0) > IMAG_TOLERANCE:
        raise NumericalFailure(
            f"imaginary residue {np.abs(out.imag).max():.3g} in fundamental function")
    real = out.real
    if n == 1 and F.family.kind == "polyharmonic":
        real = real + _power_tail_spatial(F, pts[:, 0])
    return float(real[0]) if scalar else real


def leakage(F: FundamentalSpectrum) -> tuple[GridFunction, float]:
    """Out-of-cell weight ``sum_{k != 0} weight_k`` per node and its ``L_1`` norm."""
    g = GridFunction(F.grid, F.weights[1:].sum(axis=0))
    return g, lp_norm(g, 1)

"""Finite-block model of the spaces FW_p and PW.

A function ``f`` is represented by its spectral blocks
``f^_k(xi) = f^(xi + 2 pi k)`` restricted to the base cell, for finitely many
``k``. Then

    ||f||_{FW_p} = sum_k ||f^_k||_{L_p(cell)},
    f(x)         = sum_k exp(2 pi i <k, x>) f_k(x),

where ``f_k`` is the band-limited function whose transform is ``f^_k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError
from .spectral import (
    FrequencyGrid,
    GridFunction,
    SampleArray,
    cube_indices,
    lp_norm,
    synthesize,
)

__all__ = [
    "BlockSpectrum",
    "Profile",
    "TestFunctionSpec",
    "STANDARD_TEST_FUNCTION",
    "make_test_function",
    "fw_norm",
    "fl_norm",
    "pw_norm",
    "sample_block",
    "evaluate",
]

PROFILES = ("constant", "cosine", "hat", "gauss")


def _key(k, n):
    k = tuple(int(v) for v in np.atleast_1d(k))
    if len(k) != n:
        raise ParameterError(f"block index {k} does not have dimension {n}")
    return k


class BlockSpectrum:
    """Finitely supported map from block index ``k`` to a :class:`GridFunction`."""

    def __init__(self, grid: FrequencyGrid, blocks: dict | None = None):
        self.grid = grid
        clean = {}
        for k, g in (blocks or {}).items():
            key = _key(k, grid.n)
            if not isinstance(g, GridFunction):
                g = GridFunction(grid, g)
            if g.grid != grid:
                raise ParameterError("all blocks must share the grid")
            clean[key] = g
        # shell order, then lexicographic
        self.blocks = dict(sorted(clean.items(), key=lambda kv: (max(map(abs, kv[0])), kv[0])))

    def __repr__(self):
        return f"BlockSpectrum({self.grid}, support={list(self.blocks)})"

    @property
    def support(self) -> list:
        return list(self.blocks)

    @property
    def support_radius(self) -> int:
        return max((max(map(abs, k)) for k in self.blocks), default=0)

    def block(self, k) -> GridFunction:
        return self.blocks.get(_key(k, self.grid.n)) or self.grid.zeros()

    def _combine(self, other: "BlockSpectrum", sign: float) -> "BlockSpectrum":
        if other.grid != self.grid:
            raise ParameterError("block spectra live on different grids")
        keys = set(self.blocks) | set(other.blocks)
        zero = np.zeros(self.grid.size, dtype=complex)
        out = {}
        for k in keys:
            a = self.blocks[k].values if k in self.blocks else zero
            b = other.blocks[k].values if k in other.blocks else zero
            out[k] = a + sign * b
        return BlockSpectrum(self.grid, out)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, a):
        return BlockSpectrum(self.grid, {k: g * a for k, g in self.blocks.items()})

    __rmul__ = __mul__


@dataclass(frozen=True)
class Profile:
    """One block of a test function.

    ``kind`` is ``constant`` (value ``a``), ``cosine`` (``sum_d c_d prod_axes
    cos(d xi_i)``), ``hat`` (``1 - ||xi||_1 / pi``) or ``gauss``
    (``exp(-beta ||xi||^2)``).
    """

    k: tuple
    kind: str
    a: float = 1.0
    coeffs: tuple = ()
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in PROFILES:
            raise ParameterError(f"unknown profile {self.kind!r}; expected one of {PROFILES}")
        object.__setattr__(self, "k", tuple(int(v) for v in np.atleast_1d(self.k)))
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.kind == "cosine" else 0

    def values(self, nodes: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full(len(nodes), self.a, dtype=complex)
        if self.kind == "cosine":
            out = np.zeros(len(nodes))
            for d, c in enumerate(self.coeffs):
                out += c * np.prod(np.cos(d * nodes), axis=1)
            return out.astype(complex)
        if self.kind == "hat":
            return (1.0 - np.abs(nodes).sum(axis=1) / np.pi).astype(complex)
        return np.exp(-self.beta * np.sum(nodes * nodes, axis=1)).astype(complex)


TestFunctionSpec = Sequence[Profile]

# three separated blocks used for convergence sweeps
STANDARD_TEST_FUNCTION = (
    Profile((0,), "constant", a=1.0),
    Profile((1,), "constant", a=0.5),
    Profile((-2,), "cosine", coeffs=(0.0, 1.0)),
)


def make_test_function(spec: TestFunctionSpec, grid: FrequencyGrid) -> BlockSpectrum:
    """Sample each profile of ``spec`` on ``grid``; repeated blocks are summed."""
    spec = list(spec)
    if not spec:
        raise ParameterError("test function spec is empty")
    blocks: dict = {}
    for prof in spec:
        if prof.degree >= grid.N // 2:
            raise ParameterError(
                f"cosine degree {prof.degree} must be below N/2 = {grid.N // 2}")
        key = _key(prof.k, grid.n)
        vals = prof.values(grid.nodes)
        blocks[key] = blocks[key] + vals if key in blocks else vals
    return BlockSpectrum(grid, blocks)


def fw_norm(f: BlockSpectrum, p: float) -> float:
    """``sum_k ||f^_k||_p``; with ``p = inf`` this is the Wiener-amalgam norm of FW."""
    return float(sum(lp_norm(g, p) for g in f.blocks.values()))


def fl_norm(f: BlockSpectrum, p: float) -> float:
    """``||f^||_{L_p(R^n)}`` assembled from the blocks."""
    norms = np.array([lp_norm(g, p) for g in f.blocks.values()])
    if norms.size == 0:
        return 0.0
    if np.isinf(float(p)):
        return float(norms.max())
    return float(np.sum(norms ** p) ** (1.0 / p))


def pw_norm(f: BlockSpectrum) -> float:
    """Paley-Wiener norm ``||f^||_{L_2(cell)}``; only block 0 may be present."""
    zero = (0,) * f.grid.n
    if any(k != zero for k in f.blocks):
        raise DomainError("function has spectrum outside the base cell (not band-limited)")
    return lp_norm(f.block(zero), 2)


def sample_block(f: BlockSpectrum, k, J_s: int) -> SampleArray:
    """Lattice samples ``f_k(j)`` for ``||j||_inf <= J_s``."""
    n = f.grid.n
    key = _key(k, n)
    if key not in f.blocks:
        return SampleArray.zeros(n, J_s)
    j = cube_indices(J_s, n)
    return SampleArray(n, J_s, synthesize(f.blocks[key], j))


def evaluate(f: BlockSpectrum, x):
    """``f(x) = sum_k exp(2 pi i <k, x>) f_k(x)``; one point or shape (M, n)."""
    n = f.grid.n
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0 or (arr.ndim == 1 and (n > 1 or arr.size == 1))
    pts = arr.reshape(-1, n)
    out = np.zeros(len(pts), dtype=complex)
    for k, g in f.blocks.items():
        out += np.exp(2j * np.pi * (pts @ np.array(k, dtype=float))) * synthesize(g, pts)
    return complex(out[0]) if scalar else out

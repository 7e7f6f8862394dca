"""The block-modulated cardinal approximand and its error analysis.

For ``f`` with blocks ``f^_k`` the approximand is

    J[f](x) = sum_{j,k} f_k(j) L(x - j) exp(2 pi i <x, k>),

and its spectrum on block ``l`` is the convex mixture

    J^_l(xi) = sum_k weight_{l-k}(xi) f^_k(xi).

Both the spectral form and the sample form are built here, and compared.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .fundamental import FundamentalSpectrum, fundamental_spatial, fundamental_spectrum, leakage
from .modulation import (
    BlockSpectrum,
    evaluate,
    fl_norm,
    fw_norm,
    make_test_function,
    sample_block,
)
from .spectral import FrequencyGrid, analyze_samples, cube_indices, lattice_points

__all__ = [
    "BoundCheck",
    "ErrorReport",
    "approximand_spectral",
    "approximand_from_samples",
    "evaluate_approximand_time",
    "error_report",
    "convergence_sweep",
    "default_eval_points",
    "holder_constant",
    "thread_count",
]

NORMS = (1.0, 2.0, np.inf)


def thread_count() -> int:
    """Worker cap from ``CARDREC_THREADS`` (default 1)."""
    raw = os.environ.get("CARDREC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"CARDREC_THREADS must be an integer, got {raw!r}") from None


def _output_window(f: BlockSpectrum, F: FundamentalSpectrum, out_window):
    R, W = f.support_radius, F.block_window
    if out_window is None:
        return R + W
    if not R <= out_window <= R + W:
        raise ParameterError(
            f"out_window must lie in [{R}, {R + W}] (support radius {R}, block window {W}); "
            f"got {out_window}")
    return int(out_window)


def approximand_spectral(f: BlockSpectrum, F: FundamentalSpectrum, out_window=None) -> BlockSpectrum:
    """Blocks ``l`` (``||l||_inf <= out_window``) of the approximand's spectrum.

    Weights of blocks outside ``F``'s window are omitted; their mass is bounded
    by ``F.tail_certificate``. The default ``out_window`` is support radius
    plus block window, which uses every carried weight.
    """
    if f.grid != F.grid:
        raise ParameterError("function and fundamental spectrum live on different grids")
    n = f.grid.n
    window = _output_window(f, F, out_window)
    out = {}
    for l in lattice_points(window, n):
        acc = np.zeros(f.grid.size, dtype=complex)
        for k, g in f.blocks.items():
            shift = l - np.array(k)
            if np.abs(shift).max() <= F.block_window:
                acc += F.weight_values(shift) * g.values
        out[tuple(int(v) for v in l)] = acc
    return BlockSpectrum(f.grid, out)


def approximand_from_samples(samples: dict, F: FundamentalSpectrum, out_window=None) -> BlockSpectrum:
    """Approximand from lattice samples ``{k: SampleArray}``.

    Each block spectrum is rebuilt from its samples by the lattice Fourier
    series before the same block mixture is applied.
    """
    grid = F.grid
    sigma = {k: analyze_samples(s, grid) for k, s in samples.items()}
    return approximand_spectral(BlockSpectrum(grid, sigma), F, out_window)


def evaluate_approximand_time(samples: dict, F: FundamentalSpectrum, x):
    """``sum_k exp(2 pi i <k, x>) sum_j f_k(j) L(x - j)`` at one point or shape (M, n)."""
    n = F.grid.n
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0 or (arr.ndim == 1 and (n > 1 or arr.size == 1))
    pts = arr.reshape(-1, n)
    out = np.zeros(len(pts), dtype=complex)
    for k, s in samples.items():
        keep = np.abs(s.values) > 0
        if not keep.any():
            continue
        js = s.indices[keep]
        diffs = (pts[:, None, :] - js[None, :, :]).reshape(-1, n)
        L = fundamental_spatial(F, diffs).reshape(len(pts), len(js))
        mod = np.exp(2j * np.pi * (pts @ np.array(k, dtype=float)))
        out += mod * (L @ s.values[keep])
    return complex(out[0]) if scalar else out


def holder_constant(n: int, p: float) -> float:
    """``(2pi)^(n(1 - 1/p) - n/2)``, the pointwise-from-FW_p constant."""
    inv = 0.0 if np.isinf(p) else 1.0 / p
    return float((2 * np.pi) ** (n * (1.0 - inv) - n / 2.0))


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool


@dataclass
class ErrorReport:
    """Errors of one approximand run. ``fw_errors`` include the omitted-block
    certificate; ``fw_errors_computed`` are the values over the carried blocks."""

    parameter: float
    fw_errors: dict
    fw_errors_computed: dict
    pointwise_sup: float
    interp_residual: float
    leakage_l1: float
    tail_certificate: float
    bound_checks: list = field(default_factory=list)

    @property
    def all_bounds_hold(self) -> bool:
        return all(b.passed for b in self.bound_checks)


def default_eval_points(n: int) -> np.ndarray:
    axis = np.arange(-3.0, 3.0 + 1e-9, 0.25) if n == 1 else np.arange(-2.0, 2.0 + 1e-9, 0.5)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def error_report(f: BlockSpectrum, Jf: BlockSpectrum, F: FundamentalSpectrum, eval_points=None,
                 *, interp_radius: int = 4, parameter=None) -> ErrorReport:
    """FW_p, pointwise and lattice errors of ``Jf`` against ``f`` with bound checks."""
    if f.grid != Jf.grid or f.grid != F.grid:
        raise ParameterError("f, Jf and the fundamental spectrum must share one grid")
    n = f.grid.n
    pts = default_eval_points(n) if eval_points is None else np.asarray(eval_points, float).reshape(-1, n)
    diff = f - Jf
    cert = F.tail_certificate
    computed = {p: fw_norm(diff, p) for p in NORMS}
    sizes = {p: fw_norm(f, p) for p in NORMS}
    errors = {p: computed[p] + cert * sizes[p] for p in NORMS}
    pointwise = float(np.abs(evaluate(f, pts) - evaluate(Jf, pts)).max(initial=0.0))
    lattice = cube_indices(interp_radius, n).astype(float)
    interp = float(np.abs(evaluate(Jf, lattice) - evaluate(f, lattice)).max(initial=0.0))
    shift_sum = F.max_shift_weight_sum()
    checks = []
    for p in NORMS:
        tag = "inf" if np.isinf(p) else str(int(p))
        rhs = holder_constant(n, p) * errors[p] + 1e-9
        checks.append(BoundCheck(f"pointwise_p{tag}", pointwise, rhs, pointwise <= rhs))
        fl = fl_norm(diff, p)
        checks.append(BoundCheck(f"fl_le_fw_p{tag}", fl, computed[p],
                                 fl <= computed[p] * (1 + 1e-12) + 1e-300))
        prior = 2.0 * (shift_sum + cert) * sizes[p]
        slack = 1e-12 * sizes[p] + 1e-15
        checks.append(BoundCheck(f"apriori_bound_p{tag}", errors[p], prior + slack,
                                 errors[p] <= prior + slack))
    param = F.family.parameter if parameter is None else parameter
    return ErrorReport(param, errors, computed, pointwise, interp, leakage(F)[1], cert, checks)


def convergence_sweep(fams, spec, grid: FrequencyGrid, W: int = 3, out_window=None,
                      eval_points=None, *, tol: float = 1e-12, path: str = "spectral",
                      sample_window: int | None = None, threads: int | None = None) -> list:
    """One :class:`ErrorReport` per family member, in input order.

    ``path`` selects the spectral mixture or the sample route
    (``"samples"``, lattice window ``sample_window``).
    """
    fams = list(fams)
    if not fams:
        raise ParameterError("convergence_sweep needs at least one family member")
    if len({fm.kind for fm in fams}) != 1:
        raise ParameterError("sweep members must share a kind")
    if path not in ("spectral", "samples"):
        raise ParameterError(f"unknown path {path!r}")
    f = make_test_function(spec, grid)
    if sample_window is None:
        sample_window = max(8, max((pr.degree for pr in spec), default=0))

    def run(fam):
        F = fundamental_spectrum(fam, grid, W, tol)
        if path == "spectral":
            Jf = approximand_spectral(f, F, out_window)
        else:
            samples = {k: sample_block(f, k, sample_window) for k in f.support}
            Jf = approximand_from_samples(samples, F, out_window)
        return error_report(f, Jf, F, eval_points)

    workers = thread_count() if threads is None else max(1, int(threads))
    if workers == 1 or len(fams) == 1:
        return [run(fm) for fm in fams]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, fams))

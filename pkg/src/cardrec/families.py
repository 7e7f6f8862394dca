"""Regular families of cardinal interpolators and numeric checks of their
defining conditions.

Spectra are known only up to a positive constant; every consumer works with
ratios ``phi^(xi + 2 pi j) / phi^(xi)``, so normalizations are dropped:

==============  ======================================  ==================
kind            spectrum (up to a positive constant)    family parameter
==============  ======================================  ==================
polyharmonic    ``||xi||^(-2k)``                        order ``k``
gaussian        ``exp(-alpha ||xi||^2)``                ``alpha``
multiquadric    ``(c/r)^nu K_nu(c r)``, ``r = ||xi||``  shift ``c``
==============  ======================================  ==================

with ``nu = beta + n/2`` for the multiquadric ``(||x||^2 + c^2)^beta``.
The gaussian row is the transform of ``exp(-||x||^2 / (4 alpha))`` without
the factor ``(2 alpha)^(n/2)``; the multiquadric row is the generalized
transform with its sign factor removed.

Conditions H1 (slow growth), H3 (smoothness off the origin) and H5 (bounded
derivative quotients) hold analytically for all three kinds and are not
checked here; H2, H4, R1 and R2 are measured by :func:`verify_conditions`.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bessel import NU_MAX, log_bessel_k
from .errors import NumericalFailure, ParameterError, SingularityError
from .spectral import FrequencyGrid, lattice_points

__all__ = [
    "InterpolatorFamily",
    "ConditionReport",
    "SmallAlphaWarning",
    "polyharmonic",
    "gaussian",
    "multiquadric",
    "synthetic_h2_failure",
    "log_spectrum",
    "spectrum",
    "m_ratio",
    "m_bound",
    "tail_bound",
    "tail_radius",
    "power_tail_correction",
    "verify_conditions",
]

logger = logging.getLogger(__name__)

KINDS = ("polyharmonic", "gaussian", "multiquadric", "synthetic")
GAUSSIAN_MIN_ALPHA = 1.0
MAX_TAIL_RADIUS = 10 ** 7
TWO_PI = 2.0 * np.pi


class SmallAlphaWarning(UserWarning):
    """A gaussian family member below the regular-family minimum was built."""


@dataclass(frozen=True)
class InterpolatorFamily:
    """One member ``phi_alpha`` of a family, identified by ``kind`` and ``parameter``.

    ``scale`` multiplies the spectrum by a positive constant; it exists to
    exercise the scale invariance of every derived quantity.
    """

    kind: str
    dimension: int
    parameter: float
    mq_exponent: float | None = None
    scale: float = 1.0
    allow_small_alpha: bool = field(default=False, compare=False)

    def __post_init__(self):
        kind, n, p = self.kind, self.dimension, self.parameter
        if kind not in KINDS:
            raise ParameterError(f"unknown family kind {kind!r}; expected one of {KINDS}")
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ParameterError(f"dimension must be a positive integer, got {n!r}")
        if not self.scale > 0:
            raise ParameterError("scale must be positive")
        if kind == "polyharmonic":
            if float(p) != int(p) or p < 1:
                raise ParameterError(f"polyharmonic order must be a positive integer, got {p}")
            object.__setattr__(self, "parameter", int(p))
            if 2 * int(p) <= n:
                raise ParameterError(
                    f"polyharmonic order {p} is not summable in dimension {n} (need 2k > n)")
        elif kind == "gaussian":
            if not p > 0:
                raise ParameterError(f"gaussian alpha must be positive, got {p}")
            if p < GAUSSIAN_MIN_ALPHA and not self.allow_small_alpha:
                warnings.warn(
                    f"gaussian alpha={p} is below the regular-family minimum "
                    f"{GAUSSIAN_MIN_ALPHA}", SmallAlphaWarning, stacklevel=3)
        elif kind == "multiquadric":
            beta = self.mq_exponent
            if beta is None:
                raise ParameterError("multiquadric requires mq_exponent")
            if p < 1:
                raise ParameterError(f"multiquadric shift c must be >= 1, got {p}")
            if beta < 0.5 or abs(beta - round(beta)) < 1e-12:
                raise ParameterError(
                    f"mq_exponent must be >= 1/2 and not an integer, got {beta}")
            if beta + n / 2 > NU_MAX:
                raise ParameterError(f"Bessel order {beta + n / 2} exceeds {NU_MAX}")

    @property
    def origin_singular(self) -> bool:
        return self.kind in ("polyharmonic", "multiquadric")

    @property
    def decay_class(self) -> str:
        if self.kind == "polyharmonic":
            return f"power({2 * self.parameter})"
        return {"gaussian": "superexponential", "multiquadric": "exponential",
                "synthetic": "compact"}[self.kind]

    @property
    def below_minimum(self) -> bool:
        """True for gaussian members with ``alpha`` under the regular-family minimum."""
        return self.kind == "gaussian" and self.parameter < GAUSSIAN_MIN_ALPHA

    @property
    def bessel_order(self) -> float:
        return self.mq_exponent + self.dimension / 2

    def with_parameter(self, parameter) -> "InterpolatorFamily":
        return InterpolatorFamily(self.kind, self.dimension, parameter, self.mq_exponent,
                                  self.scale, self.allow_small_alpha)


def polyharmonic(k: int, n: int = 1) -> InterpolatorFamily:
    return InterpolatorFamily("polyharmonic", n, k)


def gaussian(alpha: float, n: int = 1, *, allow_small_alpha: bool = False) -> InterpolatorFamily:
    return InterpolatorFamily("gaussian", n, alpha, allow_small_alpha=allow_small_alpha)


def multiquadric(c: float, beta: float = 0.5, n: int = 1) -> InterpolatorFamily:
    return InterpolatorFamily("multiquadric", n, c, mq_exponent=beta)


def synthetic_h2_failure(n: int = 1) -> InterpolatorFamily:
    """Test-only spectrum ``max(1 - ||xi||/pi, 0)``, which vanishes on the cell boundary."""
    return InterpolatorFamily("synthetic", n, 1.0)


def _radial_log(fam: InterpolatorFamily, r: np.ndarray) -> np.ndarray:
    """log of the radial profile; ``+inf`` at singular origins, ``-inf`` at zeros."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    with np.errstate(divide="ignore"):
        if fam.kind == "polyharmonic":
            out = -2.0 * fam.parameter * np.log(r)
        elif fam.kind == "gaussian":
            out = -fam.parameter * r * r
        elif fam.kind == "synthetic":
            out = np.log(np.maximum(1.0 - r / np.pi, 0.0))
        else:
            nu, c = fam.bessel_order, fam.parameter
            pos = r > 0
            out[~pos] = np.inf
            if pos.any():
                rr = r[pos]
                out[pos] = nu * (np.log(c) - np.log(rr)) + log_bessel_k(nu, c * rr)
    return out + np.log(fam.scale)


def log_spectrum(fam: InterpolatorFamily, omega) -> np.ndarray:
    """Natural log of the spectrum at points ``omega`` of shape (..., n)."""
    omega = np.asarray(omega, dtype=float)
    if omega.shape[-1:] != (fam.dimension,):
        omega = omega.reshape(omega.shape + (1,)) if fam.dimension == 1 else omega
    r = np.sqrt(np.sum(omega * omega, axis=-1))
    return _radial_log(fam, r)


def spectrum(fam: InterpolatorFamily, xi):
    """Spectrum value(s) at ``xi``; the origin of a singular family is an error."""
    xi = np.asarray(xi, dtype=float)
    lg = log_spectrum(fam, xi)
    if fam.origin_singular and np.any(np.isposinf(lg)):
        raise SingularityError(f"{fam.kind} spectrum is singular at the origin")
    out = np.exp(lg)
    return float(out) if np.ndim(out) == 0 else out


def _as_shift(j, n: int) -> np.ndarray:
    j = np.atleast_1d(np.asarray(j, dtype=np.int64))
    if j.shape != (n,):
        raise ParameterError(f"shift j must have length {n}")
    if not np.any(j):
        raise ParameterError("shift j must be nonzero")
    return j


def m_ratio(fam: InterpolatorFamily, j, xi):
    """``phi^(xi + 2 pi j) / phi^(xi)``; 0 at the origin of singular families."""
    n = fam.dimension
    j = _as_shift(j, n)
    xi = np.asarray(xi, dtype=float)
    pts = xi.reshape(-1, n)
    with np.errstate(invalid="ignore"):
        out = np.exp(log_spectrum(fam, pts + TWO_PI * j) - log_spectrum(fam, pts))
    if xi.ndim == 0 or (xi.ndim == 1 and (n > 1 or xi.size == 1)):
        return float(out[0])
    return out


def m_bound(fam: InterpolatorFamily, j, parameter_min=None) -> float:
    """Parameter-independent majorant ``M_j`` of ``m_ratio`` over the base cell.

    ``parameter_min`` is the smallest family parameter the bound must cover
    (default: ``fam.parameter``). Polyharmonic and gaussian bounds are closed
    forms; the multiquadric bound is a dense-sampling maximum times 1.01.
    """
    n = fam.dimension
    j = _as_shift(j, n)
    p = fam.parameter if parameter_min is None else parameter_min
    if fam.kind == "polyharmonic":
        # |xi| <= pi sqrt(n) and |xi + 2 pi j| >= 2 pi |j| - pi sqrt(n); ratio <= 1 always
        root = np.sqrt(n)
        gap = 2.0 * np.sqrt(float(j @ j)) - root
        base = 1.0 if gap <= root else root / gap
        return float(base ** (2 * int(p)))
    if fam.kind == "gaussian":
        return float(min(1.0, np.exp(-4.0 * np.pi ** 2 * p * (float(j @ j) - float(np.abs(j).sum())))))
    if fam.kind == "synthetic":
        return 0.0
    return _mq_bound(fam.with_parameter(p), tuple(int(v) for v in j))


@lru_cache(maxsize=4096)
def _mq_bound(fam: InterpolatorFamily, j: tuple) -> float:
    n = fam.dimension
    per_axis = {1: 4097, 2: 257}.get(n, 33)
    axis = np.linspace(-np.pi, np.pi, per_axis)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    ratio = m_ratio(fam, np.array(j), pts)
    return float(np.nanmax(ratio) * 1.01)


def _shell_count(s, n: int):
    s = np.asarray(s, dtype=float)
    return (2 * s + 1) ** n - (2 * s - 1) ** n


def _cell_min_log(fam: InterpolatorFamily) -> float:
    """log of the smallest spectrum value on the base cell (at a corner)."""
    return float(_radial_log(fam, np.array([np.pi * np.sqrt(fam.dimension)]))[0])


def _power_bound(k: int, n: int, J: float) -> float:
    """Sum bound of ``||xi + 2 pi j||^(-2k)`` over ``||j||_inf > J``, uniform in the cell."""
    growth = ((J + 1.0) / (J + 0.5)) ** (n - 1)
    return 2.0 * n * 3.0 ** (n - 1) * TWO_PI ** (-2 * k) * growth * J ** (n - 2 * k) / (2 * k - n)


def _power_correction_error(k: int, n: int, J: float) -> float:
    """Midpoint-rule error bound of the 1-D tail correction (both sides)."""
    return TWO_PI ** (-2 * k) / 12.0 * (2 * k * J ** (-2 * k - 1) + 2 * k * (2 * k + 1) * J ** (-2 * k - 2))


@lru_cache(maxsize=None)
def _cube_exterior_factor(k: int) -> float:
    # int_0^{pi/4} cos^{2k-2}(theta) d theta
    x, w = np.polynomial.legendre.leggauss(64)
    theta = (x + 1.0) * np.pi / 8.0
    return float(np.sum(w * np.cos(theta) ** (2 * k - 2)) * np.pi / 8.0)


def power_tail_correction(k: int, n: int, xi: np.ndarray, J: int) -> np.ndarray:
    """Integral estimate of the omitted tail ``sum_{||j||_inf > J} ||xi + 2 pi j||^(-2k)``.

    In one dimension this is the per-node midpoint form
    ``sum_+- (2 pi (J + 1/2) +- xi)^(1-2k) / (2 pi (2k - 1))``; in two
    dimensions the exterior of the cube ``||t||_inf > J + 1/2`` is integrated
    in polar form (the linear term in ``xi`` cancels by symmetry). No
    correction is applied for ``n >= 3``.
    """
    xi = np.asarray(xi, dtype=float).reshape(-1, n)
    edge = TWO_PI * (J + 0.5)
    if n == 1:
        x = xi[:, 0]
        return ((edge + x) ** (1 - 2 * k) + (edge - x) ** (1 - 2 * k)) / (TWO_PI * (2 * k - 1))
    if n == 2:
        val = 8.0 * (J + 0.5) ** (2 - 2 * k) / (2 * k - 2) * _cube_exterior_factor(k)
        return np.full(len(xi), TWO_PI ** (-2 * k) * val)
    return np.zeros(len(xi))


def tail_bound(fam: InterpolatorFamily, J: int, *, corrected: bool = False) -> float:
    """Absolute bound on ``sum_{||j||_inf > J} phi^(xi + 2 pi j)``, uniform over the cell.

    With ``corrected`` (power-decay families only) the bound covers the
    residual left after :func:`power_tail_correction` has been added.
    """
    n = fam.dimension
    if J < 1:
        raise ParameterError("truncation radius must be >= 1")
    if fam.kind == "polyharmonic":
        k = fam.parameter
        raw = fam.scale * _power_bound(k, n, J)
        if not corrected:
            return raw
        if n == 1:
            return fam.scale * _power_correction_error(k, n, J)
        est = float(power_tail_correction(k, n, np.zeros((1, n)), J)[0]) * fam.scale
        return max(raw, est)
    if fam.kind == "synthetic":
        return 0.0
    # radial decreasing profile: every term of shell s is <= phi(2 pi s - pi)
    total, s = 0.0, J + 1
    while True:
        shells = np.arange(s, s + 64, dtype=float)
        logs = np.log(_shell_count(shells, n)) + _radial_log(fam, TWO_PI * shells - np.pi)
        terms = np.exp(logs)
        total += float(terms.sum())
        if terms[-1] <= 1e-20 * total or terms[-1] < 1e-300:
            # terms decay at least geometrically past this point
            q = terms[-1] / terms[-2] if terms[-2] > 0 else 0.0
            return total + (terms[-1] * q / (1 - q) if q < 1 else 0.0)
        s += 64


def tail_radius(fam: InterpolatorFamily, tol: float, *, corrected: bool = False,
                relative: bool = True) -> int:
    """Smallest ``J >= 1`` whose certified tail bound is below ``tol``.

    With ``relative`` (the default) the bound is divided by the smallest
    spectrum value on the base cell, which makes ``tol`` a bound on the
    relative error of the periodized denominator.
    """
    if not tol > 0:
        raise ParameterError("tol must be positive")
    norm = np.exp(_cell_min_log(fam)) if relative else 1.0

    def ok(J):
        return tail_bound(fam, J, corrected=corrected) / norm < tol

    if fam.kind == "synthetic":
        return 1
    if not ok(MAX_TAIL_RADIUS):
        raise NumericalFailure(
            f"tail tolerance {tol:g} unreachable with J <= {MAX_TAIL_RADIUS} for {fam}")
    lo, hi = 0, 1
    while not ok(hi):
        lo, hi = hi, min(2 * hi, MAX_TAIL_RADIUS)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class ConditionReport:
    """Measured versions of H2, H4, R1 and R2 for an ordered list of family members."""

    kind: str
    parameters: list
    h2_delta: float
    h2_by_member: list
    h4_decay_exponent_fit: float
    r2_violations: int
    r2_margin: float
    r1_trend: dict
    r1_threshold: float
    passed: bool

    def rows(self):
        """Flat ``(field, j, parameter, value)`` records, deterministic order."""
        yield ("h2_delta", "", "", self.h2_delta)
        for p, v in zip(self.parameters, self.h2_by_member):
            yield ("h2_delta_member", "", p, v)
        yield ("h4_decay_exponent_fit", "", "", self.h4_decay_exponent_fit)
        yield ("r2_violations", "", "", self.r2_violations)
        yield ("r2_margin", "", "", self.r2_margin)
        for j, trend in self.r1_trend.items():
            jj = " ".join(str(v) for v in j)
            for p, v in zip(self.parameters, trend):
                yield ("r1_max_interior_ratio", jj, p, v)
        yield ("passed", "", "", int(self.passed))


def _decay_slope(fam: InterpolatorFamily) -> float:
    r = np.geomspace(4 * np.pi, 32 * np.pi, 12)
    lg = _radial_log(fam, r)
    good = np.isfinite(lg)
    if good.sum() < 2:
        return -np.inf
    return float(np.polyfit(np.log(r[good]), lg[good], 1)[0])


def verify_conditions(fams, grid: FrequencyGrid, j_range: int = 5, tol: float = 1e-12,
                      *, r1_threshold: float = 1.0) -> ConditionReport:
    """Check H2, H4, R1 and R2 numerically on ``grid``.

    ``fams`` must share a kind and be ordered by increasing parameter. R1 is
    tracked only at interior nodes: at the faces ``xi_i = -pi`` the ratio for
    ``j = e_i`` equals 1 for every gaussian member. ``tol`` is the slack of the
    nonincreasing test on the R1 trends.
    """
    fams = list(fams)
    if not fams:
        raise ParameterError("verify_conditions needs at least one family member")
    kinds = {f.kind for f in fams}
    if len(kinds) != 1:
        raise ParameterError(f"family members must share a kind, got {sorted(kinds)}")
    params = [f.parameter for f in fams]
    if any(b < a for a, b in zip(params, params[1:])):
        raise ParameterError("family members must be ordered by increasing parameter")
    n = fams[0].dimension
    nodes = grid.nodes
    keep = np.ones(grid.size, bool)
    if fams[0].origin_singular:
        keep[grid.origin_index] = False
    interior = grid.interior_mask()

    h2_each = [float(np.exp(log_spectrum(f, nodes[keep])).min()) for f in fams]
    h2 = min(h2_each)
    h4 = _decay_slope(fams[-1])
    shifts = lattice_points(j_range, n, exclude_origin=True)
    violations, margin = 0, np.inf
    trend = {}
    pmin = params[0]
    with np.errstate(invalid="ignore", divide="ignore"):
        for j in shifts:
            bound = m_bound(fams[0], j, parameter_min=pmin)
            seq = []
            for f in fams:
                ratio = m_ratio(f, j, nodes)
                top = np.nanmax(ratio) if np.isfinite(ratio).any() else np.inf
                if np.isnan(ratio).any() or not top <= bound * (1 + 1e-12):
                    violations += 1
                if bound > 0 and np.isfinite(top):
                    margin = min(margin, 1.0 - top / bound)
                inner = ratio[interior]
                seq.append(float(np.nanmax(inner)) if np.isfinite(inner).any() else np.inf)
            trend[tuple(int(v) for v in j)] = seq
    r1_ok = all(
        all(b <= a + tol for a, b in zip(seq, seq[1:])) and seq[-1] < r1_threshold
        for seq in trend.values())
    passed = bool(h2 > 0 and violations == 0 and r1_ok)
    if not passed:
        logger.info("condition check failed: h2=%g violations=%d r1_ok=%s", h2, violations, r1_ok)
    return ConditionReport(fams[0].kind, params, h2, h2_each, h4, violations,
                           float(margin) if np.isfinite(margin) else 0.0,
                           trend, r1_threshold, passed)

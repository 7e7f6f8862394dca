"""Modified Bessel function of the second kind by trapezoidal quadrature.

Uses the integral representation

    K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt,

evaluated in scaled, log-shifted form so that neither tiny ``x`` (large
values) nor large ``x`` (underflow) loses accuracy. The integrand is even and
analytic in the strip ``|Im t| < pi/2``, so the trapezoid rule converges
geometrically; the step is shrunk near a sharp peak and the range is cut
where the integrand has fallen below ``1e-18`` of its maximum.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError, ParameterError

__all__ = ["bessel_k", "log_bessel_k", "NU_MAX"]

NU_MAX = 12.0
_LOG_CUTOFF = np.log(1e-18)
_CHUNK = 4096


def _log_cosh(y):
    y = np.abs(y)
    return y + np.log1p(np.exp(-2.0 * y)) - np.log(2.0)


def _log_integrand(t, x, nu):
    # log of exp(-x (cosh t - 1)) cosh(nu t); cosh t - 1 = 2 sinh^2(t/2)
    return -2.0 * x * np.sinh(0.5 * t) ** 2 + _log_cosh(nu * t)


def _check(nu, x):
    if not (0.0 <= nu <= NU_MAX):
        raise ParameterError(f"order nu must lie in [0, {NU_MAX}], got {nu}")
    if np.any(~(x > 0)):
        raise DomainError("K_nu(x) requires x > 0")


def _log_scaled(nu: float, x: np.ndarray) -> np.ndarray:
    """log of ``exp(x) K_nu(x)`` for a 1-D array of positive ``x``."""
    peak = np.arcsinh(nu / x)
    top = _log_integrand(peak, x, nu)
    curv = x * np.cosh(peak) + (nu / np.cosh(nu * peak)) ** 2
    step = np.minimum(0.05, 0.5 / np.sqrt(curv))
    # grow the cut point until the integrand is negligible past the peak
    reach = peak + 1.0
    for _ in range(64):
        low = _log_integrand(reach, x, nu) < top + _LOG_CUTOFF
        if low.all():
            break
        reach = np.where(low, reach, peak + 2.0 * (reach - peak))
    counts = np.ceil(reach / step).astype(np.int64) + 1
    out = np.empty_like(x)
    order = np.argsort(counts, kind="stable")
    for start in range(0, x.size, _CHUNK):
        idx = order[start:start + _CHUNK]
        m = int(counts[idx].max())
        t = step[idx, None] * np.arange(m)[None, :]
        vals = _log_integrand(t, x[idx, None], nu)
        vals[t > reach[idx, None] + step[idx, None]] = -np.inf
        shift = vals.max(axis=1, keepdims=True)
        w = np.exp(vals - shift)
        w[:, 0] *= 0.5
        out[idx] = shift[:, 0] + np.log(step[idx] * w.sum(axis=1))
    return out


def log_bessel_k(nu: float, x):
    """Natural log of ``K_nu(x)``; vectorized over ``x``."""
    nu = abs(float(nu))
    arr = np.asarray(x, dtype=float)
    _check(nu, arr)
    flat = arr.reshape(-1)
    uniq, inv = np.unique(flat, return_inverse=True)
    res = (_log_scaled(nu, uniq) - uniq)[inv].reshape(arr.shape)
    return float(res) if res.ndim == 0 else res


def bessel_k(nu: float, x):
    """Modified Bessel function of the second kind ``K_nu(x)``, ``|nu| <= 12``.

    Negative orders use ``K_{-nu} = K_nu``.

    Relative accuracy is about ``1e-12`` over ``x`` in ``[1e-3, 1e3]``.

    >>> round(bessel_k(0.5, 1.0), 6)
    0.461069
    """
    return np.exp(log_bessel_k(nu, x))

"""
The hat function as a fundamental function
==========================================

For the polyharmonic family with ``k = 1`` in one dimension the fundamental
function is the piecewise-linear hat ``max(0, 1 - |x|)``. Building it from
the periodized spectrum is a good end-to-end check of the quadrature.
"""

import numpy as np

from cardrec import fundamental_spatial, fundamental_spectrum, make_grid, polyharmonic

grid = make_grid(1, 256)
F = fundamental_spectrum(polyharmonic(1), grid, W=3)
print("truncation radius J =", F.truncation_radius)

###############################################################################
# Evaluate on [-3, 3] and compare with the closed form.

x = np.linspace(-3, 3, 121)[:, None]
L = fundamental_spatial(F, x)
hat = np.maximum(0.0, 1.0 - np.abs(x[:, 0]))
print("max |L - hat| =", np.abs(L - hat).max())

###############################################################################
# Higher orders give smoother, wider cardinal splines that still vanish at
# the nonzero integers.

for k in (2, 3):
    Fk = fundamental_spectrum(polyharmonic(k), grid)
    m = np.arange(-4, 5, dtype=float)[:, None]
    print(f"k={k}: L(0.5) = {fundamental_spatial(Fk, 0.5):.6f}, "
          f"max |L(m) - delta| = {np.abs(fundamental_spatial(Fk, m) - (m[:, 0] == 0)).max():.2e}")

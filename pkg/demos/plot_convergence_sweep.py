"""
Convergence sweeps
==================

Increasing the family parameter pushes the block weights toward the ideal
indicator of the base cell. The FW_1 error falls quickly; the FW_infinity
error stays of order one because the weights at the cell faces are fixed
at one half.
"""

import warnings

from cardrec import (
    STANDARD_TEST_FUNCTION,
    SmallAlphaWarning,
    convergence_sweep,
    gaussian,
    make_grid,
    polyharmonic,
)

grid = make_grid(1, 256)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", SmallAlphaWarning)
    gauss = [gaussian(a) for a in (0.25, 0.5, 1, 2, 4, 8)]

for name, fams in (("gaussian", gauss), ("polyharmonic", [polyharmonic(k) for k in range(1, 7)])):
    print(name)
    print(f"{'param':>6} {'fw_1':>8} {'fw_2':>8} {'fw_inf':>8} {'leakage':>8}")
    for r in convergence_sweep(fams, STANDARD_TEST_FUNCTION, grid):
        print(f"{r.parameter:>6} {r.fw_errors[1.0]:8.4f} {r.fw_errors[2.0]:8.4f} "
              f"{r.fw_errors[float('inf')]:8.4f} {r.leakage_l1:8.4f}")

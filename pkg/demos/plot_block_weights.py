"""
Block weights, partition of unity and leakage
=============================================

Each block ``k`` of the fundamental spectrum is a convex weight
``phi^(xi + 2 pi k) / sum_j phi^(xi + 2 pi j)``. The weights sum to one and the
mass outside block 0 (the leakage) shrinks as the family parameter grows.
"""

import numpy as np

from cardrec import fundamental_spectrum, gaussian, leakage, make_grid, polyharmonic

grid = make_grid(1, 256)
for fam in (gaussian(1), gaussian(4), polyharmonic(1), polyharmonic(4)):
    F = fundamental_spectrum(fam, grid)
    dev = np.abs(F.row_sums() - 1).max()
    _, l1 = leakage(F)
    print(f"{fam.kind:12s} {fam.parameter:>4}: row-sum deviation {dev:.1e} "
          f"(certificate {F.tail_certificate:.1e}), leakage L1 {l1:.4f}")

###############################################################################
# At the cell face the two neighbouring blocks share the weight equally for
# every gaussian parameter, which is why the sup-norm error never vanishes.

for alpha in (1, 8, 64):
    F = fundamental_spectrum(gaussian(alpha), grid)
    print(f"alpha={alpha}: weight_0(-pi) = {F.weight_values(0)[0]:.12f}, "
          f"weight_1(-pi) = {F.weight_values(1)[0]:.12f}")

"""
Modified Bessel functions by quadrature
=======================================

The multiquadric spectrum needs ``K_nu`` of half-integer order. The values
come from a trapezoid rule on the integral representation, carried out in log
scale so very large arguments do not underflow.
"""

import numpy as np

from cardrec import bessel_k, log_bessel_k

x = np.array([0.5, 1.0, 2.0, 5.0])
closed = np.sqrt(np.pi / (2 * x)) * np.exp(-x)
print("K_1/2 relative error:", np.abs(bessel_k(0.5, x) / closed - 1).max())
print("K_3/2 relative error:", np.abs(bessel_k(1.5, x) / (closed * (1 + 1 / x)) - 1).max())

###############################################################################
# Recurrence ``K_{nu+1} - K_{nu-1} = (2 nu / x) K_nu``.

for nu in (1.0, 1.5, 2.0, 2.5):
    lhs = bessel_k(nu + 1, x) - bessel_k(nu - 1, x)
    print(nu, np.abs(lhs / (2 * nu / x * bessel_k(nu, x)) - 1).max())

print("log K_0.5(5000) =", log_bessel_k(0.5, 5000.0))

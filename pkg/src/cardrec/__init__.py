"""Cardinal interpolation with regular families of radial basis functions.

Fundamental functions, block-modulated approximands and their errors in
Wiener-amalgam type spaces, computed by exact trigonometric quadrature on the
base frequency cell.
"""
from .approximand import *  # noqa: F401,F403
from .bessel import *  # noqa: F401,F403
from .errors import DomainError, NumericalFailure, ParameterError, SingularityError
from .families import *  # noqa: F401,F403
from .fundamental import *  # noqa: F401,F403
from .modulation import *  # noqa: F401,F403
from .spectral import *  # noqa: F401,F403

__version__ = "0.1.0"

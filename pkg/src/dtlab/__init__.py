"""Divisor statistics of Fourier coefficients of level-1 eigenforms.

Modules:
    arith     sieve-backed multiplicative functions
    factor    factorization of large coefficients
    series    big-integer power series products
    modforms  coefficient tables, Sato-Tate angles, cache files
    lcm_sums  multivariable lcm sums and lcm-count identities
    stats     divisor moments, divisibility densities, decompositions
    cli       the ``dtlab`` command
"""

from .errors import CacheFormatError, CapacityError, ConfigError, DtlabError
from .modforms import Interval, NewformSpec

__all__ = ["CacheFormatError", "CapacityError", "ConfigError", "DtlabError", "Interval", "NewformSpec"]
__version__ = "0.1.0"

"""Exact transforms of subsets of F_q^d, L^p spectral exponents, and the
sumset / distance / simplex counters built on top of them."""

from fqsalem._core import *  # noqa: F401,F403
from fqsalem._core import __version__  # noqa: F401

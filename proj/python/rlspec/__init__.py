"""Spectra of finite-rank real linear operators z -> C z + B conj(z)."""

from ._rlspec import *  # noqa: F401,F403
from ._rlspec import __doc__  # noqa: F401

__version__ = "0.1.0"

"""Warped-product surgery toolkit.

Model manifolds with rotational symmetry, their Green solutions and spectral
bounds, and the neck assembly that joins two of them while certifying that the
bound survives. Everything here re-exports the compiled core; see the README
for the experiment-runner CLI built on the same library.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

"""Exact intersection-theory calculators for vector bundles on P1-bundles.

The heavy lifting is sparse polynomial arithmetic over exact rationals; its
hot kernels live in a compiled extension with a pure-Python fallback (see
``p1chow.kernels.BACKEND`` for which one is active).
"""

__version__ = "0.1.0"

from .kernels import BACKEND

__all__ = ["BACKEND", "__version__"]

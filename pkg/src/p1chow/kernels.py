"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``P1CHOW_PURE=1`` in the environment to force the pure-Python kernels
(used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("P1CHOW_PURE"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
add_terms = _impl.add_terms
sub_terms = _impl.sub_terms
neg_terms = _impl.neg_terms
scale_terms = _impl.scale_terms
mul_terms = _impl.mul_terms

__all__ = [
    "BACKEND",
    "add_terms",
    "sub_terms",
    "neg_terms",
    "scale_terms",
    "mul_terms",
]

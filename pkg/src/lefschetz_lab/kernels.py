"""Kernel selection.

Uses the compiled ``_ckernels`` extension when it was built, the pure-Python
``_kernels_py`` otherwise. Setting ``LEFSCHETZ_PURE=1`` forces the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("LEFSCHETZ_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py

add = _impl.add
scale = _impl.scale
mul = _impl.mul
addmul = _impl.addmul
frobenius = _impl.frobenius
standard_monomial_counts = _impl.standard_monomial_counts

__all__ = [
    "BACKEND",
    "add",
    "scale",
    "mul",
    "addmul",
    "frobenius",
    "standard_monomial_counts",
]

"""Hot inner loops, compiled when possible.

``BACKEND`` is ``"cython"`` when the extension imported, otherwise ``"python"``.
Set ``SBM_SPECTRAL_PURE=1`` to force the fallback.
"""
import os

from . import _fallback

if os.environ.get("SBM_SPECTRAL_PURE"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

solve_tridiagonal = _impl.solve_tridiagonal
jacobi_sweep = _impl.jacobi_sweep

__all__ = ["BACKEND", "solve_tridiagonal", "jacobi_sweep"]

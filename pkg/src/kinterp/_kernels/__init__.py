"""Hot-kernel backend selection.

Prefers the compiled Cython extension; falls back to the numpy
implementations when the extension is missing or when the environment
variable ``KINTERP_FORCE_FALLBACK`` is set (used by the benchmark and the
cross-backend tests).  ``BACKEND`` names the active implementation.
"""

import os

from . import _fallback

if os.environ.get("KINTERP_FORCE_FALLBACK"):
    _impl = _fallback
    BACKEND = "fallback"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "fallback"

theta_sweep = _impl.theta_sweep
jacobi_svd = _impl.jacobi_svd

__all__ = ["theta_sweep", "jacobi_svd", "BACKEND"]

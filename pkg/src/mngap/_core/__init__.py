"""Numerical core: compiled kernels with a pure-numpy fallback.

The backend is chosen once at import time.  Set ``MNGAP_BACKEND=python``
to force the numpy fallback even when the compiled extension is present
(used by the benchmark and the backend-equivalence tests).
"""

import os

from . import _backend_np

if os.environ.get("MNGAP_BACKEND", "").lower() == "python":
    _impl = _backend_np
else:
    try:
        from . import _core_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _backend_np

BACKEND_NAME = _impl.BACKEND_NAME
cum_trapezoid = _impl.cum_trapezoid
cum_parabolic = _impl.cum_parabolic
operator_core = _impl.operator_core

__all__ = ["BACKEND_NAME", "cum_trapezoid", "cum_parabolic", "operator_core"]

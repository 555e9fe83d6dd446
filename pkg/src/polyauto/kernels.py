"""Kernel backend selection.

The compiled extension is used when it imports cleanly; setting the
environment variable POLYAUTO_PURE=1 forces the pure-Python fallback
(useful for the backend-comparison benchmark and for debugging).
"""

import os

_impl = None
if not os.environ.get("POLYAUTO_PURE"):
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = None
if _impl is None:
    from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
mul_terms_fp = _impl.mul_terms_fp
mul_terms_obj = _impl.mul_terms_obj
mul_terms_ext = _impl.mul_terms_ext

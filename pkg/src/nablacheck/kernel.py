"""Selects the reduction kernel: compiled extension if available, else pure.

NABLA_CHECK_PURE=1 forces the pure-Python kernel (used by the benchmark and
by tests that compare the two implementations).
"""

from __future__ import annotations

import os

if os.environ.get("NABLA_CHECK_PURE"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

BACKEND = _impl.BACKEND
deref = _impl.deref
shift = _impl.shift
subst = _impl.subst
normalize = _impl.normalize
eta_contract = _impl.eta_contract

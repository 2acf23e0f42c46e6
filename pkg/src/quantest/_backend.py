"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
bit-for-bit equivalent.  Set QUANTEST_BACKEND=python or =compiled to force a
choice (forcing the compiled backend raises if the extension is missing).
"""

from __future__ import annotations

import os

_requested = os.environ.get("QUANTEST_BACKEND", "auto").strip().lower() or "auto"

if _requested in ("auto", ""):
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"
elif _requested in ("compiled", "cython", "c"):
    from . import _kernels as _impl
    BACKEND = "compiled"
elif _requested in ("python", "numpy", "py"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    raise ImportError(
        f"QUANTEST_BACKEND={_requested!r} not recognized; "
        "use 'auto', 'compiled', or 'python'"
    )

run_location_block = _impl.run_location_block
run_scale_block = _impl.run_scale_block
run_joint_block = _impl.run_joint_block

__all__ = ["BACKEND", "run_location_block", "run_scale_block", "run_joint_block"]

"""Backend selection for the numerical kernels.

The compiled extension is preferred when built; the pure numpy fallback is
used otherwise.  ``EXTPOVM_BACKEND=python`` or ``=cython`` forces a choice.
"""

import os

_forced = os.environ.get("EXTPOVM_BACKEND", "").strip().lower()
if _forced not in ("", "python", "cython"):
    raise ImportError(
        f"EXTPOVM_BACKEND must be 'python' or 'cython', got {_forced!r}"
    )

if _forced == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise ImportError(
                "EXTPOVM_BACKEND=cython but the compiled extension is not "
                "built; reinstall with a C compiler available"
            )
        from . import _kernels_py as _impl

        BACKEND = "python"

jacobi_eigh = _impl.jacobi_eigh
pivot_inplace = _impl.pivot_inplace


def backend_name():
    """Name of the kernel backend in use: 'cython' or 'python'."""
    return BACKEND

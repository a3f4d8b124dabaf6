"""Select the compiled LLF kernels when present, NumPy otherwise.

Set ``KKRIEMANN_BACKEND=python`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("KKRIEMANN_BACKEND", "").lower() != "python":
    try:
        from . import _kernels_c as kernels  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass


def get_kernels(name=None):
    """Kernel module by name ('cython' or 'python'); default is the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels_c
        return _kernels_c
    raise ValueError(f"unknown backend {name!r}")
